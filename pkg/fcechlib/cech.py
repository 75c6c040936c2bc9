"""Functional (co)homology of cover systems and the structural checks on it.

A CoverSystem is a finite chain of covers, coarse to fine, joined by
validated refinement projections.  Homology forms an inverse system along
the chain and cohomology a direct one; both limits are attained at the
finest stage, and the reports say how many trailing rungs are isomorphisms.
"""

import warnings
from collections.abc import Hashable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any, Literal

from . import _matrix as mx
from .abelian import (
    FgAbGroup,
    GroupHom,
    LimitReport,
    SlotFailure,
    check_exact,
    check_order_two,
    finite_chain_limit,
)
from .config import DEFAULT_WINDOW
from .cover import (
    Cover,
    MapHandle,
    Refinement,
    Region,
    Space,
    is_pair_map,
    nerve,
    projection_map,
    pullback_cover,
    refinement_violations,
    restrict_to_sub,
    trace_cover,
)
from .errors import (
    CheckFailure,
    InvalidRefinement,
    LadderBroken,
    NotCompact,
    NotPairMap,
    RectangleBroken,
    ShapeMismatch,
)
from .logger import Logger
from .simplicial import (
    SimplicialMap,
    SimplicialPair,
    Variance,
    cohomology,
    connecting_delta,
    homology,
    induced,
    pair_sequence_labels,
)

DIAGNOSTIC_LABELS = [
    "stage", "cover", "vertices", "simplices", "dimension", "variance", "degree", "group",
]  # fmt: skip
FINITE_CHAIN_NOTE = "finite-chain artifact, not implied at true limits"

VARIANCES: tuple[Variance, ...] = ("homology", "cohomology")


class CoverSystem(object):
    _space: Space
    _covers: tuple[Cover, ...]
    _refinements: tuple[Refinement, ...]
    _name: str | None

    def __init__(
        self,
        space: Space,
        covers: Sequence[Cover],
        projections: Sequence[Mapping[Hashable, Hashable]] | None = None,
        name: str | None = None,
    ) -> None:
        if not covers:
            raise ValueError("A cover system needs at least one cover")
        for c in covers:
            if c.space != space:
                raise ValueError(f"Cover {c.id} does not live on the space of the system")
        pairs = list(zip(covers, covers[1:]))
        if projections is None:
            refinements = [Refinement.by_containment(c, f) for c, f in pairs]
        else:
            if len(projections) != len(pairs):
                raise ShapeMismatch(f"{len(covers)} covers need {len(pairs)} projections")
            refinements = [Refinement(c, f, p) for (c, f), p in zip(pairs, projections)]
        for r in refinements:
            bad = refinement_violations(r)
            if bad:
                raise InvalidRefinement(f"{r.fine.id} does not refine {r.coarse.id} at {bad}")
        self._space = space
        self._covers = tuple(covers)
        self._refinements = tuple(refinements)
        self._name = name

    @property
    def space(self) -> Space:
        return self._space

    @property
    def covers(self) -> tuple[Cover, ...]:
        return self._covers

    @property
    def refinements(self) -> tuple[Refinement, ...]:
        return self._refinements

    @property
    def name(self) -> str | None:
        return self._name

    @property
    def depth(self) -> int:
        return len(self._covers)

    @property
    def finest(self) -> Cover:
        return self._covers[-1]

    def __repr__(self) -> str:
        return f"CoverSystem({self._name!r}, depth={self.depth})"

    def projections(self) -> list[dict[Hashable, Hashable]]:
        return [r.projection for r in self._refinements]

    def nerves(self) -> list[SimplicialPair]:
        return [nerve(c) for c in self._covers]

    def projection_maps(self) -> list[SimplicialMap]:
        return [projection_map(r) for r in self._refinements]

    def dimension_bound(self) -> int:
        return max(p.total.dimension for p in self.nerves())

    def _derived(self, space: Space, covers: Sequence[Cover], suffix: str) -> "CoverSystem":
        projections = [
            {v: p[v] for v in fine.elements}
            for p, fine in zip(self.projections(), covers[1:])
        ]
        name = None if self._name is None else f"{self._name}{suffix}"
        return CoverSystem(space, covers, projections, name=name)

    def trace(self, onto: Space | None = None) -> "CoverSystem":
        onto = self._space.subspace() if onto is None else onto
        return self._derived(onto, [trace_cover(c, onto) for c in self._covers], "|A")

    def with_sub(self, sub: Region) -> "CoverSystem":
        space = self._space.with_sub(sub)
        return self._derived(space, [c.with_space(space) for c in self._covers], "")

    def absolute(self) -> "CoverSystem":
        if self._space.is_empty(self._space.sub):
            return self
        return self.with_sub(self._space.empty_region())

    def pullback(self, f: MapHandle) -> tuple["CoverSystem", list[SimplicialMap]]:
        pulled = [pullback_cover(f, c) for c in self._covers]
        covers = [c for c, _ in pulled]
        projections = []
        for p, (coarse, up), (fine, down) in zip(self.projections(), pulled, pulled[1:]):
            projection = {}
            for w in fine.elements:
                target = p[down(w)]
                found = [
                    u
                    for u in coarse.elements
                    if up(u) == target and f.source.contains(coarse.region(u), fine.region(w))
                ]
                if not found:
                    raise InvalidRefinement(f"No piece of {coarse.id} contains {w!r} of {fine.id}")
                projection[w] = found[0]
            projections.append(projection)
        name = None if self._name is None else f"{self._name}^*"
        return CoverSystem(f.source, covers, projections, name=name), [m for _, m in pulled]

    def extend(
        self, cover: Cover, projection: Mapping[Hashable, Hashable] | None = None
    ) -> "CoverSystem":
        if projection is None:
            projection = Refinement.by_containment(self.finest, cover).projection
        return CoverSystem(
            self._space,
            self._covers + (cover,),
            self.projections() + [dict(projection)],
            name=self._name,
        )

    def with_projections(
        self, projections: Sequence[Mapping[Hashable, Hashable]]
    ) -> "CoverSystem":
        return CoverSystem(self._space, self._covers, projections, name=self._name)


@dataclass(frozen=True)
class Verdict:
    check: str
    passed: bool
    failures: list[dict[str, Any]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def describe(self) -> str:
        return f"{self.check}: {'pass' if self.passed else 'FAIL'}"


@dataclass(frozen=True)
class EtaReport:
    """Largest degree with nonvanishing functional cohomology.

    `value` is None when a degree that decides it has not stabilized; the
    finest-stage answer is kept in `candidate`.  Degrees above
    `dimension_bound` vanish because every stage nerve is at most that big.
    """

    value: int | None
    candidate: int
    dimension_bound: int
    stabilized: bool

    def describe(self) -> str:
        if self.value is None:
            return f"bounded-unknown (finest stage gives {self.candidate}, D = {self.dimension_bound})"
        return f"{self.value} (D = {self.dimension_bound})"


@dataclass(frozen=True)
class StageSize:
    stage: int
    cover: str
    vertices: int
    simplices: int
    dimension: int


@dataclass(frozen=True)
class SystemReport:
    name: str | None
    coefficients: FgAbGroup
    homology: dict[int, LimitReport]
    cohomology: dict[int, LimitReport]
    stages: list[StageSize]
    verdicts: list[Verdict]


def functional_homology(
    sys: CoverSystem, coefficients: FgAbGroup, n: int, window: int = DEFAULT_WINDOW
) -> LimitReport:
    groups = [homology(p, coefficients, n) for p in sys.nerves()]
    maps = [induced(f, coefficients, n, "homology") for f in sys.projection_maps()]
    return finite_chain_limit(groups, maps, "inverse", window)


def functional_cohomology(
    sys: CoverSystem, coefficients: FgAbGroup, n: int, window: int = DEFAULT_WINDOW
) -> LimitReport:
    groups = [cohomology(p, coefficients, n) for p in sys.nerves()]
    maps = [induced(f, coefficients, n, "cohomology") for f in sys.projection_maps()]
    return finite_chain_limit(groups, maps, "direct", window)


def functional(
    sys: CoverSystem,
    coefficients: FgAbGroup,
    n: int,
    variance: Variance,
    window: int = DEFAULT_WINDOW,
) -> LimitReport:
    if variance == "homology":
        return functional_homology(sys, coefficients, n, window)
    if variance == "cohomology":
        return functional_cohomology(sys, coefficients, n, window)
    raise ValueError(f"Invalid variance: {variance}")


def _witness(h: GroupHom) -> list[list[int]]:
    return mx.to_lists(h.matrix)


def induced_limit_map(
    f: MapHandle,
    target_sys: CoverSystem,
    coefficients: FgAbGroup,
    n: int,
    variance: Variance = "homology",
) -> GroupHom:
    """Map of finest-stage groups induced by f; the ladder must commute at every rung."""
    source_sys, stage_maps = target_sys.pullback(f)
    stage = [induced(m, coefficients, n, variance) for m in stage_maps]
    ps = source_sys.projection_maps()
    qs = target_sys.projection_maps()
    for i in range(len(ps)):
        p = induced(ps[i], coefficients, n, variance)
        q = induced(qs[i], coefficients, n, variance)
        if variance == "homology":
            left, right = stage[i] @ p, q @ stage[i + 1]
        else:
            left, right = p @ stage[i], stage[i + 1] @ q
        if left != right:
            raise LadderBroken(
                f"Ladder of {variance} in degree {n} does not commute at rung {i}",
                rung=i,
                degree=n,
                left=_witness(left),
                right=_witness(right),
            )
    return stage[-1]


def limit_connecting(
    sys: CoverSystem,
    coefficients: FgAbGroup,
    n: int,
    variance: Variance = "homology",
) -> GroupHom:
    """Connecting map of the finest stage, read through the trace identification.

    Homology: H_n(X, A) -> H_{n-1}(A).  Cohomology: H^{n-1}(A) -> H^n(X, A).
    """
    trace = sys.trace()
    pairs = sys.nerves()
    for i, (pair, traced) in enumerate(zip(pairs, trace.nerves())):
        if traced.total != pair.sub:
            raise RectangleBroken(
                f"Trace nerve differs from the subcomplex at stage {i}", stage=i, degree=n
            )
    stage = [connecting_delta(p, coefficients, n, variance) for p in pairs]
    ps = sys.projection_maps()
    qs = trace.projection_maps()
    for i in range(len(ps)):
        p = induced(ps[i], coefficients, n, variance)
        q = induced(qs[i], coefficients, n - 1, variance)
        if variance == "homology":
            left, right = q @ stage[i + 1], stage[i] @ p
        else:
            left, right = stage[i + 1] @ q, p @ stage[i]
        if left != right:
            raise RectangleBroken(
                f"Connecting {variance} map in degree {n} does not commute at stage {i}",
                stage=i,
                degree=n,
                left=_witness(left),
                right=_witness(right),
            )
    return stage[-1]


def _failure_rows(
    failures: Sequence[SlotFailure], labels: Sequence[str], variance: str
) -> list[dict[str, Any]]:
    return [
        {
            "variance": variance,
            "slot": s.slot,
            "between": f"{labels[s.slot - 1]} -> {labels[s.slot]}",
            "reason": s.reason,
            "incoming": s.incoming,
            "outgoing": s.outgoing,
        }
        for s in failures
    ]


def limit_pair_sequence(
    sys: CoverSystem,
    coefficients: FgAbGroup,
    n_range: tuple[int, int],
    variance: Variance,
) -> list[GroupHom]:
    """Long sequence of the pair at the limit, ordered as pair_sequence_labels."""
    lo, hi = n_range
    pair = sys.nerves()[-1]
    sub = sys.trace().nerves()[-1]
    i = SimplicialMap(sub, pair.total, {v: v for v in sub.total.vertices})
    j = SimplicialMap(pair.total, pair, {v: v for v in pair.total.vertices})
    if variance == "homology":
        seq = [limit_connecting(sys, coefficients, hi + 1, "homology")]
        for n in range(hi, lo - 1, -1):
            seq += [
                induced(i, coefficients, n, "homology"),
                induced(j, coefficients, n, "homology"),
                limit_connecting(sys, coefficients, n, "homology"),
            ]
        return seq
    seq = []
    for n in range(lo, hi + 1):
        seq += [
            limit_connecting(sys, coefficients, n, "cohomology"),
            induced(j, coefficients, n, "cohomology"),
            induced(i, coefficients, n, "cohomology"),
        ]
    return seq + [limit_connecting(sys, coefficients, hi + 1, "cohomology")]


def _run_checked(check: str, body) -> Verdict:
    try:
        failures, notes = body()
    except CheckFailure as e:
        return Verdict(check, False, [{"error": str(e), **e.witness}])
    return Verdict(check, not failures, failures, notes)


def pair_sequence_check(
    sys: CoverSystem, coefficients: FgAbGroup, n_range: tuple[int, int]
) -> Verdict:
    lo, hi = n_range

    def body():
        failures: list[dict[str, Any]] = []
        notes: list[str] = []
        labels = pair_sequence_labels(lo, hi, "homology")
        seq = limit_pair_sequence(sys, coefficients, n_range, "homology")
        failures += _failure_rows(check_order_two(seq), labels, "homology")
        if not failures and not check_exact(seq):
            notes.append(f"homology sequence exact ({FINITE_CHAIN_NOTE})")
        labels = pair_sequence_labels(lo, hi, "cohomology")
        seq = limit_pair_sequence(sys, coefficients, n_range, "cohomology")
        failures += _failure_rows(check_exact(seq), labels, "cohomology")
        return failures, notes

    return _run_checked("pair_sequence", body)


def triple_sequence_labels(lo: int, hi: int, variance: Variance = "cohomology") -> list[str]:
    if variance == "homology":
        labels = [f"dbar_{hi + 1}"]
        for n in range(hi, lo - 1, -1):
            labels += [f"ibar_{n}", f"jbar_{n}", f"dbar_{n}"]
        return labels
    labels = []
    for n in range(lo, hi + 1):
        labels += [f"deltabar^{n}", f"jbar^{n}", f"ibar^{n}"]
    return labels + [f"deltabar^{hi + 1}"]


def triple_sequence(
    sys: CoverSystem,
    inner: Region,
    coefficients: FgAbGroup,
    n_range: tuple[int, int],
    variance: Variance = "cohomology",
) -> list[GroupHom]:
    """Sequence of the triple (X, A, B) at the finest stage, B given by `inner`.

    The connecting map of the triple is delta o j''^* on cohomology and
    j''_* o d on homology, where j'' : (A, 0) -> (A, B).
    """
    space = sys.space
    if not space.contains(space.sub, space.restrict(inner)):
        raise ValueError("Inner subspace is not contained in the distinguished subspace")
    lo, hi = n_range
    xa = sys.nerves()[-1]
    xb = sys.with_sub(inner).nerves()[-1]
    ab = sys.trace(onto=space.subspace(inner)).nerves()[-1]
    jbar = SimplicialMap(xb, xa, {v: v for v in xb.total.vertices})
    ibar = SimplicialMap(ab, xb, {v: v for v in ab.total.vertices})
    jpp = SimplicialMap(ab.total, ab, {v: v for v in ab.total.vertices})

    def bar(n: int) -> GroupHom:
        if variance == "homology":
            return induced(jpp, coefficients, n - 1, "homology") @ connecting_delta(
                xa, coefficients, n, "homology"
            )
        return connecting_delta(xa, coefficients, n, "cohomology") @ induced(
            jpp, coefficients, n - 1, "cohomology"
        )

    if variance == "homology":
        seq = [bar(hi + 1)]
        for n in range(hi, lo - 1, -1):
            seq += [
                induced(ibar, coefficients, n, "homology"),
                induced(jbar, coefficients, n, "homology"),
                bar(n),
            ]
        return seq
    seq = []
    for n in range(lo, hi + 1):
        seq += [
            bar(n),
            induced(jbar, coefficients, n, "cohomology"),
            induced(ibar, coefficients, n, "cohomology"),
        ]
    return seq + [bar(hi + 1)]


def triple_sequence_check(
    sys: CoverSystem,
    inner: Region,
    coefficients: FgAbGroup,
    n_range: tuple[int, int],
    variance: Variance = "cohomology",
) -> Verdict:
    lo, hi = n_range

    def body():
        labels = triple_sequence_labels(lo, hi, variance)
        seq = triple_sequence(sys, inner, coefficients, n_range, variance)
        if variance == "cohomology":
            return _failure_rows(check_exact(seq), labels, variance), []
        failures = _failure_rows(check_order_two(seq), labels, variance)
        notes = []
        if not failures and not check_exact(seq):
            notes.append(f"homology triple sequence exact ({FINITE_CHAIN_NOTE})")
        return failures, notes

    return _run_checked(f"triple_sequence[{variance}]", body)


def naturality_check(
    f: MapHandle, target_sys: CoverSystem, coefficients: FgAbGroup, n: int
) -> Verdict:
    if not is_pair_map(f):
        raise NotPairMap("Map does not send the subspace into the subspace")
    source_sys, _ = target_sys.pullback(f)
    f_sub = restrict_to_sub(f)
    sub_sys = target_sys.trace()

    def body():
        failures = []
        for variance in VARIANCES:
            f_star = induced_limit_map(f, target_sys, coefficients, n, variance)
            f_a = induced_limit_map(f_sub, sub_sys, coefficients, n - 1, variance)
            d_x = limit_connecting(source_sys, coefficients, n, variance)
            d_y = limit_connecting(target_sys, coefficients, n, variance)
            if variance == "homology":
                left, right = d_y @ f_star, f_a @ d_x
            else:
                left, right = f_star @ d_y, d_x @ f_a
            if left != right:
                failures.append(
                    {
                        "variance": variance,
                        "degree": n,
                        "left": _witness(left),
                        "right": _witness(right),
                    }
                )
        return failures, []

    return _run_checked("naturality", body)


def eta(
    sys: CoverSystem, coefficients: FgAbGroup, window: int = DEFAULT_WINDOW
) -> EtaReport:
    if coefficients.is_trivial():
        raise ValueError("Coefficient group must be nontrivial")
    absolute = sys.absolute()
    if absolute.space.is_empty():
        return EtaReport(-1, -1, -1, True)
    bound = absolute.dimension_bound()
    candidate = 0
    stabilized = True
    for m in range(bound, -1, -1):
        report = functional_cohomology(absolute, coefficients, m, window)
        stabilized = stabilized and report.stabilized
        if not report.limit_group.is_trivial():
            candidate = m
            break
    if not stabilized:
        msg = f"Cohomology of {sys.name or 'the system'} has not stabilized; eta is bounded-unknown"
        warnings.warn(msg, UserWarning)
    return EtaReport(candidate if stabilized else None, candidate, bound, stabilized)


def realizes_group(
    sys: CoverSystem,
    coefficients: FgAbGroup,
    n: int,
    expected: FgAbGroup,
    variance: Variance = "cohomology",
    window: int = DEFAULT_WINDOW,
) -> Verdict:
    report = functional(sys, coefficients, n, variance, window)
    failures = []
    if report.limit_group != expected:
        failures.append(
            {"degree": n, "expected": str(expected), "computed": str(report.limit_group)}
        )
    notes = [] if report.stabilized else [f"degree {n} not stabilized"]
    return Verdict(f"realizes[{variance} {n}]", not failures and report.stabilized, failures, notes)


def classical_cech(
    fixture: str,
    coefficients: FgAbGroup,
    n: int,
    variance: Variance = "homology",
) -> FgAbGroup:
    """(Co)homology of the nerve of the fixture's reference cover."""
    from .fixtures import get_fixture

    pair = get_fixture(fixture).reference_pair()
    if variance == "homology":
        return homology(pair, coefficients, n)
    return cohomology(pair, coefficients, n)


def compact_beta_check(
    sys: CoverSystem,
    coefficients: FgAbGroup,
    n_range: tuple[int, int],
    fixture: str | None = None,
    window: int = DEFAULT_WINDOW,
) -> Verdict:
    from .fixtures import get_fixture

    if not sys.space.is_compact():
        raise NotCompact(f"{sys.name or 'space'} is not compact; beta comparison unavailable")
    fx = get_fixture(fixture or sys.name or "")
    lo, hi = n_range
    failures = []
    notes = []
    for n in range(lo, hi + 1):
        for variance in VARIANCES:
            report = functional(sys, coefficients, n, variance, window)
            expected = fx.expected(coefficients, n, variance)
            classical = classical_cech(fx.name, coefficients, n, variance)
            row = {
                "variance": variance,
                "degree": n,
                "expected": str(expected),
                "computed": str(report.limit_group),
                "classical": str(classical),
            }
            if not report.stabilized:
                failures.append({**row, "reason": "not stabilized"})
            elif report.limit_group != expected or classical != expected:
                failures.append({**row, "reason": "group mismatch"})
    expected_eta = fx.eta(coefficients)
    e = eta(sys, coefficients, window)
    if e.value != expected_eta:
        failures.append({"check": "eta", "expected": expected_eta, "computed": e.value})
    notes.append(f"source: {fx.source}")
    return Verdict("compact_beta", not failures, failures, notes)


def record_stages(
    sys: CoverSystem, reports: Mapping[tuple[str, int], LimitReport], logger: Logger
) -> None:
    logger.set_labels(DIAGNOSTIC_LABELS)
    for (variance, degree), report in sorted(reports.items()):
        for i, (c, pair) in enumerate(zip(sys.covers, sys.nerves())):
            logger.store(
                i,
                [c.id],
                len(pair.total.vertices),
                len(pair.total),
                pair.total.dimension,
                [variance],
                degree,
                [str(report.stage_groups[i])],
            )


def system_report(
    sys: CoverSystem,
    coefficients: FgAbGroup,
    degrees: tuple[int, int],
    window: int = DEFAULT_WINDOW,
    logger: Logger | None = None,
) -> SystemReport:
    lo, hi = degrees
    homology_reports = {}
    cohomology_reports = {}
    for n in range(lo, hi + 1):
        homology_reports[n] = functional_homology(sys, coefficients, n, window)
        cohomology_reports[n] = functional_cohomology(sys, coefficients, n, window)
    for label, reports in (("H", homology_reports), ("H^", cohomology_reports)):
        for n, report in reports.items():
            if not report.stabilized:
                msg = f"{label}{n} of {sys.name or 'the system'} has not stabilized over window {window}"
                warnings.warn(msg, UserWarning)
    stages = [
        StageSize(i, c.id, len(p.total.vertices), len(p.total), p.total.dimension)
        for i, (c, p) in enumerate(zip(sys.covers, sys.nerves()))
    ]
    if logger is not None:
        rows = {("homology", n): r for n, r in homology_reports.items()}
        rows.update({("cohomology", n): r for n, r in cohomology_reports.items()})
        record_stages(sys, rows, logger)
    verdicts = [pair_sequence_check(sys, coefficients, degrees)]
    return SystemReport(
        sys.name, coefficients, homology_reports, cohomology_reports, stages, verdicts
    )
