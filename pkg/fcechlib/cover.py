import itertools
from collections.abc import Hashable, Iterable, Iterator, Mapping, Sequence
from typing import Any, Protocol

from .errors import InvalidRefinement, NotACover, OracleViolation, UnsupportedMap
from .simplicial import Complex, SimplicialMap, SimplicialPair, oriented, vertex_key

Label = Hashable
Region = Any

EXHAUSTIVE_LIMIT = 16


class SpaceOracle(Protocol):
    def nonempty(self, indices: Iterable[Label]) -> bool:
        ...

    def meets_sub(self, indices: Iterable[Label]) -> bool:
        ...


class Space(Protocol):
    """Geometric backend a cover lives on.

    Regions are backend values (box unions, circle subsets, point sets);
    `whole` is the space X and `sub` the distinguished subspace A.
    """

    @property
    def kind(self) -> str:
        ...

    @property
    def whole(self) -> Region:
        ...

    @property
    def sub(self) -> Region:
        ...

    def is_compact(self) -> bool:
        ...

    def empty_region(self) -> Region:
        ...

    def is_empty(self, region: Region | None = None) -> bool:
        ...

    def intersect(self, regions: Sequence[Region]) -> Region:
        ...

    def contains(self, big: Region, small: Region) -> bool:
        ...

    def covers(self, regions: Sequence[Region]) -> bool:
        ...

    def restrict(self, region: Region) -> Region:
        ...

    def components(self, region: Region) -> list[Region]:
        ...

    def subspace(self, sub: Region | None = None) -> "Space":
        ...

    def with_sub(self, sub: Region) -> "Space":
        ...


class MapHandle(Protocol):
    @property
    def source(self) -> Space:
        ...

    @property
    def target(self) -> Space:
        ...

    def preimage(self, region: Region) -> Region:
        ...


class RegionOracle(object):
    _space: Space
    _regions: dict[Label, Region]

    def __init__(self, space: Space, regions: Mapping[Label, Region]) -> None:
        self._space = space
        self._regions = dict(regions)

    def carrier(self, indices: Iterable[Label]) -> Region:
        return self._space.intersect([self._regions[i] for i in indices])

    def nonempty(self, indices: Iterable[Label]) -> bool:
        return not self._space.is_empty(self.carrier(indices))

    def meets_sub(self, indices: Iterable[Label]) -> bool:
        carrier = self.carrier(indices)
        return not self._space.is_empty(self._space.intersect([carrier, self._space.sub]))


def region_oracle(space: Space, regions: Mapping[Label, Region]) -> RegionOracle:
    for label, region in regions.items():
        if not space.contains(space.whole, region):
            raise NotACover(f"Element {label!r} is not contained in the space")
    if not space.covers(list(regions.values())):
        raise NotACover("Elements do not cover the space")
    return RegionOracle(space, regions)


class Cover(object):
    _id: str
    _space: Space
    _regions: dict[Label, Region]
    _oracle: SpaceOracle
    _nerve: SimplicialPair | None

    def __init__(
        self,
        id: str,
        space: Space,
        regions: Mapping[Label, Region] | Sequence[Region],
        oracle: SpaceOracle | None = None,
    ) -> None:
        if not isinstance(regions, Mapping):
            regions = dict(enumerate(regions))
        self._id = id
        self._space = space
        self._regions = dict(regions)
        self._oracle = region_oracle(space, self._regions) if oracle is None else oracle
        self._nerve = None

    @property
    def id(self) -> str:
        return self._id

    @property
    def space(self) -> Space:
        return self._space

    @property
    def elements(self) -> tuple[Label, ...]:
        return tuple(self._regions)

    @property
    def oracle(self) -> SpaceOracle:
        return self._oracle

    def region(self, label: Label) -> Region:
        return self._regions[label]

    def regions(self) -> dict[Label, Region]:
        return dict(self._regions)

    def __len__(self) -> int:
        return len(self._regions)

    def __repr__(self) -> str:
        return f"Cover({self._id!r}, {len(self)} elements)"

    def with_space(self, space: Space) -> "Cover":
        return Cover(self._id, space, self._regions)


def _enumerate_pruned(elements: Sequence[Label], oracle: SpaceOracle) -> set[tuple]:
    level = [(v,) for v in elements if oracle.nonempty((v,))]
    found = set(level)
    while level:
        present = set(level)
        candidates = []
        for a, b in itertools.combinations(level, 2):
            if a[:-1] != b[:-1]:
                continue
            s = oriented(a + b[-1:])
            if all(s[:i] + s[i + 1 :] in present for i in range(len(s))):
                candidates.append(s)
        level = sorted({s for s in candidates if oracle.nonempty(s)}, key=_tuple_key)
        found.update(level)
    return found


def _tuple_key(s: tuple) -> tuple:
    return tuple(vertex_key(v) for v in s)


def _enumerate_exhaustive(
    elements: Sequence[Label], query, name: str
) -> set[tuple]:
    found = set()
    for k in range(1, len(elements) + 1):
        for s in itertools.combinations(elements, k):
            if query(s):
                found.add(oriented(s))
    for s in found:
        for i in range(len(s)):
            face = s[:i] + s[i + 1 :]
            if face and face not in found:
                raise OracleViolation(f"{name} holds on {s} but not on its face {face}")
    return found


def nerve(c: Cover, exhaustive: bool = False) -> SimplicialPair:
    """Nerve pair (X_c, A_c) of the cover.

    The default enumeration grows simplices level by level and only queries
    sets whose faces are all simplices.  `exhaustive` queries every subset
    and raises OracleViolation when the oracle is not monotone.
    """
    elements = sorted(c.elements, key=vertex_key)
    if exhaustive:
        if len(elements) > EXHAUSTIVE_LIMIT:
            raise ValueError(
                f"Exhaustive enumeration is limited to {EXHAUSTIVE_LIMIT} elements"
            )
        total = _enumerate_exhaustive(elements, c.oracle.nonempty, "nonempty")
        sub = _enumerate_exhaustive(elements, c.oracle.meets_sub, "meets_sub")
    else:
        if c._nerve is not None:
            return c._nerve
        total = _enumerate_pruned(elements, c.oracle)
        sub = {s for s in total if c.oracle.meets_sub(s)}
        for s in sub:
            for i in range(len(s)):
                face = s[:i] + s[i + 1 :]
                if face and face not in sub:
                    raise OracleViolation(f"meets_sub holds on {s} but not on its face {face}")
    outside = sub - total
    if outside:
        raise OracleViolation(f"meets_sub holds on empty carriers: {sorted(outside, key=_tuple_key)}")
    pair = SimplicialPair(Complex(total), Complex(sub))
    if not exhaustive:
        c._nerve = pair
    return pair


def containing_indices(coarse: Cover, region: Region) -> list[Label]:
    return [v for v in coarse.elements if coarse.space.contains(coarse.region(v), region)]


class Refinement(object):
    """fine refines coarse; projection sends each fine label to a containing coarse label."""

    _coarse: Cover
    _fine: Cover
    _projection: dict[Label, Label]

    def __init__(self, coarse: Cover, fine: Cover, projection: Mapping[Label, Label]) -> None:
        self._coarse = coarse
        self._fine = fine
        self._projection = dict(projection)

    @classmethod
    def by_containment(cls, coarse: Cover, fine: Cover, choose: str = "first") -> "Refinement":
        if choose not in ("first", "last"):
            raise ValueError(f"Invalid choice rule: {choose}")
        projection = {}
        for v in fine.elements:
            found = containing_indices(coarse, fine.region(v))
            if not found:
                raise InvalidRefinement(f"No element of {coarse.id} contains {v!r} of {fine.id}")
            projection[v] = found[0] if choose == "first" else found[-1]
        return cls(coarse, fine, projection)

    @property
    def coarse(self) -> Cover:
        return self._coarse

    @property
    def fine(self) -> Cover:
        return self._fine

    @property
    def projection(self) -> dict[Label, Label]:
        return dict(self._projection)

    def __call__(self, v: Label) -> Label:
        return self._projection[v]

    def with_projection(self, projection: Mapping[Label, Label]) -> "Refinement":
        return Refinement(self._coarse, self._fine, projection)


def refinement_violations(r: Refinement) -> list[Label]:
    space = r.coarse.space
    bad = []
    for v in r.fine.elements:
        target = r.projection.get(v)
        if target is None or target not in r.coarse.elements:
            bad.append(v)
        elif not space.contains(r.coarse.region(target), r.fine.region(v)):
            bad.append(v)
    return bad


def validate_refinement(r: Refinement) -> bool:
    return not refinement_violations(r)


def alternative_projections(r: Refinement, limit: int | None = None) -> Iterator[dict[Label, Label]]:
    fine = list(r.fine.elements)
    choices = [containing_indices(r.coarse, r.fine.region(v)) for v in fine]
    for k, picked in enumerate(itertools.product(*choices)):
        if limit is not None and k >= limit:
            return
        yield dict(zip(fine, picked))


def projection_map(r: Refinement) -> SimplicialMap:
    bad = refinement_violations(r)
    if bad:
        raise InvalidRefinement(f"Projection {r.fine.id} -> {r.coarse.id} fails at {bad}")
    source = nerve(r.fine)
    target = nerve(r.coarse)
    f = SimplicialMap(
        source, target, {v: r.projection[v] for v in source.total.vertices}
    )
    if not f.is_pair_map():
        raise InvalidRefinement(f"Projection {r.fine.id} -> {r.coarse.id} is not a pair map")
    return f


def trace_cover(c: Cover, onto: Space | None = None) -> Cover:
    onto = c.space.subspace() if onto is None else onto
    traces = {}
    for v in c.elements:
        t = onto.restrict(c.region(v))
        if not onto.is_empty(t):
            traces[v] = t
    return Cover(f"{c.id}|A", onto, traces)


def pullback_cover(f: MapHandle, c: Cover) -> tuple[Cover, SimplicialMap]:
    """Preimage cover along f and its nerve map onto the nerve of c.

    Each preimage is split into its connected pieces.  A piece keeps the
    label of its element when the preimage is connected and is labelled
    (label, k) otherwise; the nerve map sends every piece to its element.
    """
    if c.space != f.target:
        raise UnsupportedMap(f"Cover {c.id} does not live on the target of the map")
    pulled = {}
    origin = {}
    for v in c.elements:
        r = f.source.restrict(f.preimage(c.region(v)))
        pieces = f.source.components(r)
        if len(pieces) == 1:
            pulled[v], origin[v] = pieces[0], v
            continue
        for k, piece in enumerate(pieces):
            pulled[(v, k)], origin[(v, k)] = piece, v
    cover = Cover(f"{c.id}^*", f.source, pulled)
    stage_map = SimplicialMap(nerve(cover), nerve(c), origin)
    return cover, stage_map


def is_pair_map(f: MapHandle) -> bool:
    pulled = f.source.restrict(f.preimage(f.target.sub))
    return f.source.contains(pulled, f.source.sub)


class ComposedMap(object):
    """g after f."""

    _g: MapHandle
    _f: MapHandle

    def __init__(self, g: MapHandle, f: MapHandle) -> None:
        if f.target != g.source:
            raise UnsupportedMap("Maps are not composable")
        self._g = g
        self._f = f

    @property
    def source(self) -> Space:
        return self._f.source

    @property
    def target(self) -> Space:
        return self._g.target

    def preimage(self, region: Region) -> Region:
        return self._f.preimage(self._g.preimage(region))


def compose_maps(g: MapHandle, f: MapHandle) -> ComposedMap:
    return ComposedMap(g, f)


class RestrictedMap(object):
    _f: MapHandle
    _source: Space
    _target: Space

    def __init__(self, f: MapHandle) -> None:
        self._f = f
        self._source = f.source.subspace()
        self._target = f.target.subspace()

    @property
    def source(self) -> Space:
        return self._source

    @property
    def target(self) -> Space:
        return self._target

    def preimage(self, region: Region) -> Region:
        return self._source.restrict(self._f.preimage(region))


def restrict_to_sub(f: MapHandle) -> RestrictedMap:
    return RestrictedMap(f)
