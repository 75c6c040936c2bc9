"""Bundled spaces with their known (co)homology.

Tables for cover-system fixtures give multiplicities k, meaning the group is
G^k for coefficients G; every fixture here has free integral homology, so
these tables hold for all finitely generated G.  Complex fixtures carry
explicit integral groups.
"""

from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import portion as P

from .abelian import FgAbGroup
from .backends import (
    BoxSpace,
    CircleSpace,
    FiniteSpace,
    circle_cover,
    constant_system,
    grid_cover,
    halving_projection,
    standard_chain,
)
from .cech import CoverSystem
from .config import DEFAULT_DEPTH
from .cover import Cover, nerve
from .simplicial import (
    Complex,
    SimplicialPair,
    Variance,
    as_pair,
    projective_plane,
    wedge_of_triangles,
)

WEDGE_POINTS = ("p01", "p02", "p12", "p03", "p04", "p34")
WEDGE_ELEMENTS = {
    0: ("p01", "p02", "p03", "p04"),
    1: ("p01", "p12"),
    2: ("p02", "p12"),
    3: ("p03", "p34"),
    4: ("p04", "p34"),
}


@dataclass(frozen=True)
class Fixture:
    name: str
    description: str
    compact: bool
    source: str
    eta_value: int
    homology: dict[int, int] = field(default_factory=dict)
    cohomology: dict[int, int] = field(default_factory=dict)
    eta_rule: Callable[[FgAbGroup], int] | None = None
    builder: Callable[[int], CoverSystem] | None = None
    complex_builder: Callable[[], SimplicialPair] | None = None
    reference: Callable[[], Cover | Complex] | None = None
    explicit: dict[tuple[str, int], str] = field(default_factory=dict)
    inner: Any = None
    depth: int = DEFAULT_DEPTH
    job: str | None = None

    @property
    def kind(self) -> str:
        return "complex" if self.complex_builder is not None else "cover_system"

    def build(self, depth: int | None = None) -> CoverSystem:
        if self.builder is None:
            raise ValueError(f"Fixture {self.name} is a complex, not a cover system")
        return self.builder(self.depth if depth is None else depth)

    def complex(self) -> SimplicialPair:
        if self.complex_builder is None:
            return self.build().nerves()[-1]
        return as_pair(self.complex_builder())

    def reference_pair(self) -> SimplicialPair:
        """Nerve of one fine cover built apart from the fixture's chain."""
        if self.reference is None:
            return self.complex()
        ref = self.reference()
        return nerve(ref) if isinstance(ref, Cover) else as_pair(ref)

    def expected(self, coefficients: FgAbGroup, n: int, variance: Variance) -> FgAbGroup:
        if self.explicit:
            if coefficients != FgAbGroup.integers():
                raise ValueError(f"Fixture {self.name} only registers integral groups")
            return FgAbGroup.parse(self.explicit.get((variance, n), "0"))
        table = self.homology if variance == "homology" else self.cohomology
        return coefficients.power(table.get(n, 0))

    def eta(self, coefficients: FgAbGroup) -> int:
        """Top degree of nonvanishing absolute cohomology with these coefficients."""
        if coefficients.is_trivial():
            raise ValueError("Coefficient group must be nontrivial")
        if self.eta_rule is None:
            return self.eta_value
        return self.eta_rule(coefficients)

    def table(self) -> dict[str, dict[int, str]]:
        if self.explicit:
            out: dict[str, dict[int, str]] = {"homology": {}, "cohomology": {}}
            for (variance, n), group in sorted(self.explicit.items()):
                out[variance][n] = group
            return out
        return {
            "homology": {n: _power_label(k) for n, k in sorted(self.homology.items())},
            "cohomology": {n: _power_label(k) for n, k in sorted(self.cohomology.items())},
        }


def _power_label(k: int) -> str:
    return "0" if k == 0 else ("G" if k == 1 else f"G^{k}")


def _interval_triple(depth: int) -> CoverSystem:
    sys = standard_chain("interval_pair", depth)
    return CoverSystem(sys.space, sys.covers, sys.projections(), name="interval_triple")


def _arc_pair_space() -> CircleSpace:
    return CircleSpace(sub=CircleSpace.arc(0, "1/4", True, True))


def _arc_cover(space: CircleSpace, n: int = 5) -> Cover:
    # arcs (k/n, (k + 3/2)/n); only neighbours meet
    arcs = {k: CircleSpace.arc(Fraction(k, n), Fraction(3, 2 * n)) for k in range(n)}
    return Cover(f"arcs{n}", space, arcs)


def _circle_arc_pair(depth: int) -> CoverSystem:
    space = _arc_pair_space()
    covers = [circle_cover(space, j) for j in range(depth)]
    projections = [halving_projection(c) for c in covers[1:]]
    return CoverSystem(space, covers, projections, name="circle_arc_pair")


def _finite_wedge(depth: int) -> CoverSystem:
    space = FiniteSpace(WEDGE_POINTS)
    cover = Cover("wedge", space, WEDGE_ELEMENTS)
    return constant_system(space, cover, depth, "finite_wedge")


def _projective_plane_eta(coefficients: FgAbGroup) -> int:
    # H^2 is G/2G, and H^1 (the 2-torsion of G) vanishes whenever H^2 does
    even = coefficients.free_rank > 0 or any(d % 2 == 0 for d in coefficients.invariant_factors)
    return 2 if even else 0


FIXTURES: dict[str, Fixture] = {
    fx.name: fx
    for fx in [
        Fixture(
            "point",
            "singleton space, one cover repeated along the chain",
            compact=True,
            source="singleton",
            eta_value=0,
            homology={0: 1},
            cohomology={0: 1},
            builder=lambda d: standard_chain("point", d),
            reference=lambda: Cover("point", FiniteSpace(["q"]), {0: ["q"]}),
            job="point.json",
        ),
        Fixture(
            "interval",
            "[0, 1] with 2^j + 1 overlapping subintervals",
            compact=True,
            source="classical",
            eta_value=0,
            homology={0: 1},
            cohomology={0: 1},
            builder=lambda d: standard_chain("interval", d),
            reference=lambda: grid_cover(BoxSpace.interval(), 5),
            job="interval.json",
        ),
        Fixture(
            "circle",
            "circle with 3 * 2^j open arcs",
            compact=True,
            source="classical",
            eta_value=1,
            homology={0: 1, 1: 1},
            cohomology={0: 1, 1: 1},
            builder=lambda d: standard_chain("circle", d),
            reference=lambda: _arc_cover(CircleSpace()),
            job="circle.json",
        ),
        Fixture(
            "interval_pair",
            "([0, 1], {0, 1})",
            compact=True,
            source="classical",
            eta_value=0,
            homology={1: 1},
            cohomology={1: 1},
            builder=lambda d: standard_chain("interval_pair", d),
            reference=lambda: grid_cover(BoxSpace.interval(0, 1, (0, 1)), 5),
            job="interval_pair.json",
        ),
        Fixture(
            "circle_arc_pair",
            "circle relative to the closed arc [0, 1/4]",
            compact=True,
            source="classical",
            eta_value=1,
            homology={1: 1},
            cohomology={1: 1},
            builder=_circle_arc_pair,
            reference=lambda: _arc_cover(_arc_pair_space()),
        ),
        Fixture(
            "interval_triple",
            "([0, 1], {0, 1}, {0})",
            compact=True,
            source="classical",
            eta_value=0,
            homology={1: 1},
            cohomology={1: 1},
            builder=_interval_triple,
            reference=lambda: grid_cover(BoxSpace.interval(0, 1, (0, 1)), 5),
            inner=((P.singleton(0),),),
        ),
        Fixture(
            "finite_wedge",
            "six points, five sets; nerve is two hollow triangles sharing a vertex",
            compact=True,
            source="nerve",
            eta_value=1,
            homology={0: 1, 1: 2},
            cohomology={0: 1, 1: 2},
            builder=_finite_wedge,
            reference=wedge_of_triangles,
            job="finite_wedge.json",
        ),
        Fixture(
            "projective_plane",
            "minimal 6-vertex triangulation of the projective plane",
            compact=True,
            source="classical",
            eta_value=2,
            eta_rule=_projective_plane_eta,
            complex_builder=projective_plane,
            explicit={
                ("homology", 0): "Z",
                ("homology", 1): "Z/2",
                ("cohomology", 0): "Z",
                ("cohomology", 2): "Z/2",
            },
        ),
    ]
}


def get_fixture(name: str) -> Fixture:
    try:
        return FIXTURES[name]
    except KeyError:
        raise KeyError(f"Unknown fixture: {name!r}")


def fixture_names() -> list[str]:
    return list(FIXTURES)
