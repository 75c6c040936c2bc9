"""Exact geometric spaces presenting cover oracles.

All coordinates are `fractions.Fraction` and all sets are `portion`
intervals, so emptiness of a carrier is decided without rounding.
"""

import itertools
import math
from collections.abc import Hashable, Iterable, Mapping, Sequence
from fractions import Fraction
from functools import reduce
from typing import TYPE_CHECKING, Literal

import portion as P

from .cover import Cover, RegionOracle, region_oracle
from .errors import ShapeMismatch, UnsupportedMap

if TYPE_CHECKING:
    from .cech import CoverSystem

Rational = Fraction | int
Box = tuple[P.Interval, ...]
BoxUnion = tuple[Box, ...]

UNIT = P.closedopen(0, 1)

StandardKind = Literal["circle", "interval", "point", "interval_pair"]


def rational(x: Rational | str | Sequence[int]) -> Fraction:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValueError(f"Rational pair must have two entries: {x}")
        return Fraction(int(x[0]), int(x[1]))
    return Fraction(x)


def box(*axes: P.Interval) -> Box:
    for a in axes:
        if not a.atomic:
            raise ValueError(f"Box sides must be single intervals: {a}")
    return tuple(axes)


def closed_box(*bounds: tuple[Rational, Rational]) -> Box:
    return tuple(P.closed(rational(lo), rational(hi)) for lo, hi in bounds)


def _box_empty(b: Box) -> bool:
    return any(a.empty for a in b)


def _box_meet(b: Box, c: Box) -> Box:
    return tuple(x & y for x, y in zip(b, c))


def _endpoints(regions: Iterable[BoxUnion], dim: int) -> list[list[Fraction]]:
    points: list[set[Fraction]] = [set() for _ in range(dim)]
    for region in regions:
        for b in region:
            if _box_empty(b):
                continue
            for k, a in enumerate(b):
                points[k].update((a.lower, a.upper))
    return [sorted(p) for p in points]


def _axis_cells(ends: list[Fraction]) -> list[tuple[Fraction, tuple[Fraction, ...]]]:
    cells = [(e, (e,)) for e in ends]
    for a, b in zip(ends, ends[1:]):
        mid = (a + b) / 2
        cells.append((mid, (a, mid, b)))
    return cells


def _in_union(x: Sequence[Fraction], region: BoxUnion) -> bool:
    return any(all(c in a for c, a in zip(x, b)) for b in region)


def _box_closure(b: Box) -> Box:
    return tuple(P.closed(a.lower, a.upper) for a in b)


def _boxes_touch(b: Box, c: Box) -> bool:
    # the union of two boxes is connected iff one meets the closure of the other
    return not (
        _box_empty(_box_meet(_box_closure(b), c)) and _box_empty(_box_meet(b, _box_closure(c)))
    )


class BoxSpace(object):
    _dim: int
    _whole: BoxUnion
    _sub: BoxUnion

    def __init__(
        self, whole: Iterable[Box], sub: Iterable[Box] = (), dim: int | None = None
    ) -> None:
        whole = tuple(b for b in whole if not _box_empty(b))
        sub = tuple(b for b in sub if not _box_empty(b))
        if dim is None:
            dim = len(whole[0]) if whole else 1
        for b in whole + sub:
            if len(b) != dim:
                raise ShapeMismatch(f"Box {b} is not {dim}-dimensional")
        self._dim = dim
        self._whole = whole
        self._sub = sub
        if not self.contains(whole, sub):
            raise ValueError("Subspace is not contained in the space")

    @classmethod
    def interval(
        cls, lo: Rational = 0, hi: Rational = 1, sub_points: Iterable[Rational] = ()
    ) -> "BoxSpace":
        sub = [(P.singleton(rational(p)),) for p in sub_points]
        return cls([closed_box((lo, hi))], sub, dim=1)

    @classmethod
    def unit_cube(cls, dim: int) -> "BoxSpace":
        return cls([closed_box(*[(0, 1)] * dim)], (), dim=dim)

    @property
    def kind(self) -> str:
        return "box"

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def whole(self) -> BoxUnion:
        return self._whole

    @property
    def sub(self) -> BoxUnion:
        return self._sub

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BoxSpace):
            return NotImplemented
        return (self._dim, self._whole, self._sub) == (other._dim, other._whole, other._sub)

    def __repr__(self) -> str:
        return f"BoxSpace({self._whole}, sub={self._sub})"

    def empty_region(self) -> BoxUnion:
        return ()

    def is_empty(self, region: BoxUnion | None = None) -> bool:
        region = self._whole if region is None else region
        return all(_box_empty(b) for b in region)

    def intersect(self, regions: Sequence[BoxUnion]) -> BoxUnion:
        def meet(r: BoxUnion, s: BoxUnion) -> BoxUnion:
            out = (_box_meet(b, c) for b in r for c in s)
            return tuple(b for b in out if not _box_empty(b))

        if not regions:
            return self._whole
        return reduce(meet, regions)

    def contains(self, big: BoxUnion, small: BoxUnion) -> bool:
        ends = _endpoints([big, small], self._dim)
        axes = [[s for s, _ in _axis_cells(e)] for e in ends]
        return all(
            _in_union(x, big) for x in itertools.product(*axes) if _in_union(x, small)
        )

    def covers(self, regions: Sequence[BoxUnion]) -> bool:
        union = tuple(b for r in regions for b in r)
        return self.contains(union, self._whole)

    def restrict(self, region: BoxUnion) -> BoxUnion:
        return self.intersect([region, self._whole])

    def components(self, region: BoxUnion) -> list[BoxUnion]:
        boxes = [b for b in region if not _box_empty(b)]
        groups: list[list[int]] = []
        for i, b in enumerate(boxes):
            touching = [g for g in groups if any(_boxes_touch(b, boxes[j]) for j in g)]
            merged = sorted([i] + [j for g in touching for j in g])
            groups = [g for g in groups if all(g is not t for t in touching)] + [merged]
        return [tuple(boxes[j] for j in g) for g in sorted(groups)]

    def is_compact(self) -> bool:
        # bounded, so compact iff every closure cell of an included cell is included
        cells = [_axis_cells(e) for e in _endpoints([self._whole], self._dim)]
        for combo in itertools.product(*cells):
            if not _in_union([s for s, _ in combo], self._whole):
                continue
            for x in itertools.product(*[closure for _, closure in combo]):
                if not _in_union(x, self._whole):
                    return False
        return True

    def subspace(self, sub: Iterable[Box] | None = None) -> "BoxSpace":
        return BoxSpace(self._sub, () if sub is None else sub, dim=self._dim)

    def with_sub(self, sub: Iterable[Box]) -> "BoxSpace":
        return BoxSpace(self._whole, sub, dim=self._dim)

    def oracle(self, elements: Mapping[Hashable, BoxUnion]) -> RegionOracle:
        return region_oracle(self, elements)


def _shift(atom: P.Interval, t: Fraction) -> P.Interval:
    if atom.empty:
        return atom
    return P.Interval.from_atomic(atom.left, atom.lower + t, atom.upper + t, atom.right)


def wrap(interval: P.Interval) -> P.Interval:
    out = P.empty()
    for atom in interval:
        if atom.empty:
            continue
        for m in range(math.floor(atom.lower), math.ceil(atom.upper) + 1):
            out |= _shift(atom, Fraction(-m)) & UNIT
    return out


def _negate(interval: P.Interval) -> P.Interval:
    out = P.empty()
    for atom in interval:
        if not atom.empty:
            out |= P.Interval.from_atomic(atom.right, -atom.upper, -atom.lower, atom.left)
    return out


class CircleSpace(object):
    _whole: P.Interval
    _sub: P.Interval

    def __init__(self, whole: P.Interval | None = None, sub: P.Interval | None = None) -> None:
        self._whole = UNIT if whole is None else wrap(whole)
        self._sub = P.empty() if sub is None else wrap(sub)
        if not self.contains(self._whole, self._sub):
            raise ValueError("Subspace is not contained in the space")

    @staticmethod
    def arc(
        start: Rational, length: Rational, left_closed: bool = False, right_closed: bool = False
    ) -> P.Interval:
        start, length = rational(start), rational(length)
        if not 0 < length <= 1:
            raise ValueError(f"Arc length must lie in (0, 1]: {length}")
        left = P.CLOSED if left_closed else P.OPEN
        right = P.CLOSED if right_closed else P.OPEN
        return wrap(P.Interval.from_atomic(left, start, start + length, right))

    @staticmethod
    def point(t: Rational) -> P.Interval:
        return wrap(P.singleton(rational(t)))

    @property
    def kind(self) -> str:
        return "circle"

    @property
    def whole(self) -> P.Interval:
        return self._whole

    @property
    def sub(self) -> P.Interval:
        return self._sub

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CircleSpace):
            return NotImplemented
        return self._whole == other._whole and self._sub == other._sub

    def __repr__(self) -> str:
        return f"CircleSpace({self._whole}, sub={self._sub})"

    def empty_region(self) -> P.Interval:
        return P.empty()

    def is_empty(self, region: P.Interval | None = None) -> bool:
        return (self._whole if region is None else region).empty

    def intersect(self, regions: Sequence[P.Interval]) -> P.Interval:
        return reduce(lambda a, b: a & b, regions, UNIT)

    def contains(self, big: P.Interval, small: P.Interval) -> bool:
        return small.empty or small in big

    def covers(self, regions: Sequence[P.Interval]) -> bool:
        union = reduce(lambda a, b: a | b, regions, P.empty())
        return self.contains(union, self._whole)

    def restrict(self, region: P.Interval) -> P.Interval:
        return region & self._whole

    def components(self, region: P.Interval) -> list[P.Interval]:
        atoms = [atom for atom in region if not atom.empty]
        if len(atoms) > 1:
            first, last = atoms[0], atoms[-1]
            # [0, a) and (b, 1) are joined through 0 on the circle
            if first.lower == 0 and first.left == P.CLOSED and last.upper == 1:
                atoms = [last | first] + atoms[1:-1]
        return atoms

    def is_compact(self) -> bool:
        closed = self._whole | (P.singleton(1) if 0 in self._whole else P.empty())
        return all(
            atom.empty or (atom.left == P.CLOSED and atom.right == P.CLOSED)
            for atom in closed
        )

    def subspace(self, sub: P.Interval | None = None) -> "CircleSpace":
        return CircleSpace(self._sub, sub)

    def with_sub(self, sub: P.Interval) -> "CircleSpace":
        return CircleSpace(self._whole, sub)

    def oracle(self, elements: Mapping[Hashable, P.Interval]) -> RegionOracle:
        return region_oracle(self, elements)


class FiniteSpace(object):
    _points: frozenset[Hashable]
    _sub: frozenset[Hashable]

    def __init__(self, points: Iterable[Hashable], sub: Iterable[Hashable] = ()) -> None:
        self._points = frozenset(points)
        self._sub = frozenset(sub)
        if not self._sub <= self._points:
            raise ValueError(f"Subspace has foreign points: {set(self._sub - self._points)}")

    @property
    def kind(self) -> str:
        return "finite"

    @property
    def whole(self) -> frozenset[Hashable]:
        return self._points

    @property
    def sub(self) -> frozenset[Hashable]:
        return self._sub

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteSpace):
            return NotImplemented
        return self._points == other._points and self._sub == other._sub

    def __repr__(self) -> str:
        return f"FiniteSpace({sorted(map(str, self._points))}, sub={sorted(map(str, self._sub))})"

    def empty_region(self) -> frozenset:
        return frozenset()

    def is_empty(self, region: frozenset | None = None) -> bool:
        return not (self._points if region is None else region)

    def intersect(self, regions: Sequence[Iterable[Hashable]]) -> frozenset:
        return reduce(lambda a, b: a & frozenset(b), regions, self._points)

    def contains(self, big: frozenset, small: frozenset) -> bool:
        return frozenset(small) <= frozenset(big)

    def covers(self, regions: Sequence[frozenset]) -> bool:
        return self._points <= frozenset().union(*regions)

    def restrict(self, region: Iterable[Hashable]) -> frozenset:
        return frozenset(region) & self._points

    def components(self, region: Iterable[Hashable]) -> list[frozenset]:
        # point sets model cover elements, so they are never split
        region = frozenset(region)
        return [region] if region else []

    def is_compact(self) -> bool:
        return True

    def subspace(self, sub: Iterable[Hashable] | None = None) -> "FiniteSpace":
        return FiniteSpace(self._sub, () if sub is None else sub)

    def with_sub(self, sub: Iterable[Hashable]) -> "FiniteSpace":
        return FiniteSpace(self._points, sub)

    def oracle(self, elements: Mapping[Hashable, Iterable[Hashable]]) -> RegionOracle:
        return region_oracle(self, {k: frozenset(v) for k, v in elements.items()})


Space = BoxSpace | CircleSpace | FiniteSpace


def box_oracle(space: BoxSpace, elements: Mapping[Hashable, BoxUnion]) -> RegionOracle:
    return space.oracle(elements)


def circle_oracle(space: CircleSpace, elements: Mapping[Hashable, P.Interval]) -> RegionOracle:
    return space.oracle(elements)


def finite_oracle(space: FiniteSpace, elements: Mapping[Hashable, Iterable[Hashable]]) -> RegionOracle:
    return space.oracle(elements)


class _MapBase(object):
    _source: Space
    _target: Space

    def __init__(self, source: Space, target: Space) -> None:
        self._source = source
        self._target = target
        if not source.contains(source.restrict(self.preimage(target.whole)), source.whole):
            raise ValueError(f"{type(self).__name__} does not map {source} into {target}")

    @property
    def source(self) -> Space:
        return self._source

    @property
    def target(self) -> Space:
        return self._target

    def preimage(self, region):
        raise NotImplementedError


class IdentityMap(_MapBase):
    def __init__(self, space: Space) -> None:
        super().__init__(space, space)

    def preimage(self, region):
        return region


class InclusionMap(_MapBase):
    def __init__(self, source: Space, target: Space) -> None:
        if source.kind != target.kind:
            raise UnsupportedMap(f"Unable to include a {source.kind} space into a {target.kind} space")
        super().__init__(source, target)

    def preimage(self, region):
        return self._source.restrict(region)


class AffineMap(_MapBase):
    _scale: Fraction
    _shift: Fraction

    def __init__(self, source: BoxSpace, target: BoxSpace, scale: Rational, shift: Rational = 0) -> None:
        if not (isinstance(source, BoxSpace) and isinstance(target, BoxSpace)):
            raise UnsupportedMap("Affine maps act on box spaces")
        if source.dim != 1 or target.dim != 1:
            raise UnsupportedMap("Affine maps are supported on 1-dimensional boxes only")
        self._scale = rational(scale)
        self._shift = rational(shift)
        if self._scale == 0:
            raise UnsupportedMap("Constant affine maps have no exact interval preimages")
        super().__init__(source, target)

    def _pull(self, a: P.Interval) -> P.Interval:
        if a.empty:
            return a
        lo = (a.lower - self._shift) / self._scale
        hi = (a.upper - self._shift) / self._scale
        if self._scale > 0:
            return P.Interval.from_atomic(a.left, lo, hi, a.right)
        return P.Interval.from_atomic(a.right, hi, lo, a.left)

    def preimage(self, region: BoxUnion) -> BoxUnion:
        return tuple((self._pull(b[0]),) for b in region)


class RotationMap(_MapBase):
    _offset: Fraction

    def __init__(self, source: CircleSpace, target: CircleSpace, offset: Rational) -> None:
        if not (isinstance(source, CircleSpace) and isinstance(target, CircleSpace)):
            raise UnsupportedMap("Rotations act on circle spaces")
        self._offset = rational(offset)
        super().__init__(source, target)

    def preimage(self, region: P.Interval) -> P.Interval:
        return wrap(reduce(lambda a, b: a | b, (_shift(x, -self._offset) for x in region), P.empty()))


class WindingMap(_MapBase):
    """t -> degree * t on the circle; degree 0 is the constant map to 0."""

    _degree: int

    def __init__(self, source: CircleSpace, target: CircleSpace, degree: int) -> None:
        if not (isinstance(source, CircleSpace) and isinstance(target, CircleSpace)):
            raise UnsupportedMap("Windings act on circle spaces")
        self._degree = int(degree)
        super().__init__(source, target)

    @property
    def degree(self) -> int:
        return self._degree

    def preimage(self, region: P.Interval) -> P.Interval:
        if self._degree == 0:
            return UNIT if 0 in region else P.empty()
        d = abs(self._degree)
        if self._degree < 0:
            region = wrap(_negate(region))
        out = P.empty()
        for atom in region:
            if atom.empty:
                continue
            for k in range(d):
                out |= P.Interval.from_atomic(
                    atom.left, (atom.lower + k) / d, (atom.upper + k) / d, atom.right
                )
        return wrap(out)


def _interval_elements(stage: int) -> list[P.Interval]:
    n = 2**stage
    h = Fraction(1, n)
    return [P.open((k - 1) * h, (k + 1) * h) & P.closed(0, 1) for k in range(n + 1)]


def interval_cover(space: BoxSpace, stage: int) -> Cover:
    elements = {k: space.restrict(((a,),)) for k, a in enumerate(_interval_elements(stage))}
    return Cover(f"interval{stage}", space, elements)


def circle_cover(space: CircleSpace, stage: int) -> Cover:
    """3 * 2^stage open arcs centred at k/n with half-width 1/n."""
    n = 3 * 2**stage
    h = Fraction(1, n)
    elements = {
        k: space.restrict(CircleSpace.arc((k - 1) * h, 2 * h)) for k in range(n)
    }
    return Cover(f"circle{stage}", space, elements)


def grid_cover(space: BoxSpace, n: int) -> Cover:
    if n < 1:
        raise ValueError(f"Grid resolution must be positive: {n}")
    h = Fraction(1, n)
    sides = [P.open((k - 1) * h, (k + 1) * h) & P.closed(0, 1) for k in range(n + 1)]
    elements = {}
    for label, axes in enumerate(itertools.product(sides, repeat=space.dim)):
        region = space.restrict((tuple(axes),))
        if not space.is_empty(region):
            elements[label] = region
    return Cover(f"grid{n}", space, elements)


def halving_projection(fine: Cover) -> dict[Hashable, Hashable]:
    return {k: k // 2 for k in fine.elements}


def constant_system(space: Space, cover: Cover, depth: int, name: str) -> "CoverSystem":
    from .cech import CoverSystem

    covers = [Cover(f"{cover.id}.{j}", space, cover.regions()) for j in range(depth)]
    identity = {v: v for v in cover.elements}
    return CoverSystem(space, covers, [identity] * (depth - 1), name=name)


def standard_chain(kind: StandardKind, depth: int) -> "CoverSystem":
    from .cech import CoverSystem

    if depth < 1:
        raise ValueError(f"Chain depth must be positive: {depth}")
    if kind == "circle":
        space = CircleSpace()
        covers = [circle_cover(space, j) for j in range(depth)]
    elif kind in ("interval", "interval_pair"):
        space = BoxSpace.interval(0, 1, (0, 1) if kind == "interval_pair" else ())
        covers = [interval_cover(space, j) for j in range(depth)]
    elif kind == "point":
        space = FiniteSpace(["p"])
        return constant_system(space, Cover("point", space, {0: ["p"]}), depth, "point")
    else:
        raise ValueError(f"Unknown standard chain: {kind}")
    projections = [halving_projection(c) for c in covers[1:]]
    return CoverSystem(space, covers, projections, name=kind)
