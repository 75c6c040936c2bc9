from importlib import metadata

__version__ = metadata.version("fcechlib")
__all__ = ["__version__"]

from .abelian import (
    CoefficientGroup,
    FgAbGroup,
    GroupHom,
    LimitReport,
    finite_chain_limit,
    homology_from_boundaries,
    induced_on_cohomology,
    induced_on_homology,
    iso_check,
    smith_normal_form,
)

__all__.extend(
    [
        "CoefficientGroup",
        "FgAbGroup",
        "GroupHom",
        "LimitReport",
        "finite_chain_limit",
        "homology_from_boundaries",
        "induced_on_cohomology",
        "induced_on_homology",
        "iso_check",
        "smith_normal_form",
    ]
)

from .simplicial import (
    Complex,
    SimplicialMap,
    SimplicialPair,
    cohomology,
    connecting_delta,
    contiguous,
    homology,
    induced,
)

__all__.extend(
    [
        "Complex",
        "SimplicialMap",
        "SimplicialPair",
        "cohomology",
        "connecting_delta",
        "contiguous",
        "homology",
        "induced",
    ]
)

from .cover import Cover, Refinement, nerve, projection_map, pullback_cover, trace_cover

__all__.extend(
    ["Cover", "Refinement", "nerve", "projection_map", "pullback_cover", "trace_cover"]
)

from .backends import BoxSpace, CircleSpace, FiniteSpace, standard_chain

__all__.extend(["BoxSpace", "CircleSpace", "FiniteSpace", "standard_chain"])

from .cech import (
    CoverSystem,
    compact_beta_check,
    eta,
    functional_cohomology,
    functional_homology,
    induced_limit_map,
    limit_connecting,
    naturality_check,
    pair_sequence_check,
    system_report,
    triple_sequence_check,
)

__all__.extend(
    [
        "CoverSystem",
        "compact_beta_check",
        "eta",
        "functional_cohomology",
        "functional_homology",
        "induced_limit_map",
        "limit_connecting",
        "naturality_check",
        "pair_sequence_check",
        "system_report",
        "triple_sequence_check",
    ]
)

from .config import Settings

__all__.extend(["Settings"])

from .fixtures import get_fixture

__all__.extend(["get_fixture"])

from .logger import Logger

__all__.extend(["Logger"])

from .timer import Timer

__all__.extend(["Timer"])
