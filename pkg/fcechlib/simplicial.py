"""Abstract simplicial complexes, pairs, and their (co)homology.

Simplices are stored as tuples sorted by a fixed global vertex order, which
also fixes their orientation.  Chain groups of a pair (K, L) are spanned by
the simplices of K that are not in L.
"""

import itertools
from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any, Literal

from . import _matrix as mx
from ._matrix import IntMatrix
from .abelian import (
    FgAbGroup,
    GroupHom,
    cohomology_from_coboundaries,
    homology_from_boundaries,
    homology_presentation,
    induced_on_cohomology,
    induced_on_homology,
    tensor_chain_map,
)
from .config import DEFAULT_ORDERED_LIMIT
from .errors import NotPairMap, NotSimplicial, ShapeMismatch

Vertex = Hashable
Simplex = tuple[Any, ...]
Variance = Literal["homology", "cohomology"]


def vertex_key(v: Vertex) -> tuple[int, Any]:
    """Global vertex order: integers, then strings, then anything else by repr."""
    if isinstance(v, bool):
        return (2, repr(v))
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    return (2, repr(v))


def simplex_key(s: Simplex) -> tuple[int, tuple[tuple[int, Any], ...]]:
    return (len(s), tuple(vertex_key(v) for v in s))


def oriented(vertices: Iterable[Vertex]) -> Simplex:
    return tuple(sorted(set(vertices), key=vertex_key))


def permutation_sign(seq: Sequence[Vertex]) -> int:
    keys = [vertex_key(v) for v in seq]
    inversions = sum(
        1 for i in range(len(keys)) for j in range(i + 1, len(keys)) if keys[i] > keys[j]
    )
    return -1 if inversions % 2 else 1


def _check_variance(variance: str) -> None:
    if variance not in ("homology", "cohomology"):
        raise ValueError(f"Invalid variance: {variance}")


class Complex(object):
    _vertices: tuple[Vertex, ...]
    _simplices: frozenset[Simplex]
    _bases: dict[int, list[Simplex]]
    _index: dict[Simplex, int]

    def __init__(self, simplices: Iterable[Iterable[Vertex]] = ()) -> None:
        family = {oriented(s) for s in simplices}
        if () in family:
            raise NotSimplicial("Empty simplex given")
        for s in family:
            if len(s) > 1:
                for i in range(len(s)):
                    face = s[:i] + s[i + 1 :]
                    if face not in family:
                        raise NotSimplicial(f"Face {face} of {s} is missing")
        self._simplices = frozenset(family)
        self._vertices = tuple(sorted((s[0] for s in family if len(s) == 1), key=vertex_key))
        self._bases = {}
        for s in sorted(family, key=simplex_key):
            self._bases.setdefault(len(s) - 1, []).append(s)
        self._index = {}
        for basis in self._bases.values():
            self._index.update((s, i) for i, s in enumerate(basis))

    @classmethod
    def generated_by(cls, maximal: Iterable[Iterable[Vertex]]) -> "Complex":
        family: set[Simplex] = set()
        for s in maximal:
            t = oriented(s)
            for k in range(1, len(t) + 1):
                family.update(itertools.combinations(t, k))
        return cls(family)

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return self._vertices

    @property
    def simplices(self) -> frozenset[Simplex]:
        return self._simplices

    @property
    def dimension(self) -> int:
        return max(self._bases, default=-1)

    def basis(self, n: int) -> list[Simplex]:
        return list(self._bases.get(n, []))

    def count(self, n: int) -> int:
        return len(self._bases.get(n, []))

    def index(self, s: Simplex) -> int:
        return self._index[s]

    def __len__(self) -> int:
        return len(self._simplices)

    def __contains__(self, s: object) -> bool:
        if not isinstance(s, Iterable):
            return False
        return oriented(s) in self._simplices

    def __iter__(self):
        for n in sorted(self._bases):
            yield from self._bases[n]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Complex):
            return NotImplemented
        return self._simplices == other._simplices

    def __hash__(self) -> int:
        return hash(self._simplices)

    def __repr__(self) -> str:
        return f"Complex({sorted(self._simplices, key=simplex_key)})"

    def is_subcomplex_of(self, other: "Complex") -> bool:
        return self._simplices <= other._simplices

    def is_empty(self) -> bool:
        return not self._simplices

    def union(self, other: "Complex") -> "Complex":
        return Complex(self._simplices | other._simplices)

    def restricted(self, vertices: Iterable[Vertex]) -> "Complex":
        keep = set(vertices)
        return Complex(s for s in self._simplices if keep.issuperset(s))


class SimplicialPair(object):
    _total: Complex
    _sub: Complex

    def __init__(self, total: Complex, sub: Complex | None = None) -> None:
        sub = Complex() if sub is None else sub
        if not sub.is_subcomplex_of(total):
            missing = sorted(sub.simplices - total.simplices, key=simplex_key)
            raise NotSimplicial(f"Subcomplex has simplices outside the total: {missing}")
        self._total = total
        self._sub = sub

    @property
    def total(self) -> Complex:
        return self._total

    @property
    def sub(self) -> Complex:
        return self._sub

    def absolute(self) -> "SimplicialPair":
        return SimplicialPair(self._total)

    def sub_pair(self) -> "SimplicialPair":
        return SimplicialPair(self._sub)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialPair):
            return NotImplemented
        return self._total == other._total and self._sub == other._sub

    def __hash__(self) -> int:
        return hash((self._total, self._sub))

    def __repr__(self) -> str:
        return f"SimplicialPair({self._total!r}, {self._sub!r})"


def as_pair(k: "Complex | SimplicialPair") -> SimplicialPair:
    return k if isinstance(k, SimplicialPair) else SimplicialPair(k)


@dataclass(frozen=True)
class ChainComplexRep:
    bases: dict[int, list[Simplex]]
    boundaries: dict[int, IntMatrix]
    top: int

    def size(self, n: int) -> int:
        return len(self.bases.get(n, []))

    def boundary(self, n: int) -> IntMatrix:
        if n in self.boundaries:
            return self.boundaries[n]
        return mx.zeros(self.size(n - 1) if n > 0 else 0, self.size(n))

    def boundary_list(self, upto: int) -> list[IntMatrix]:
        return [self.boundary(k) for k in range(upto + 1)]


def _boundary_between(
    cols: Sequence[Simplex], rows: Sequence[Simplex]
) -> IntMatrix:
    index = {s: i for i, s in enumerate(rows)}
    m = mx.zeros(len(rows), len(cols))
    for j, s in enumerate(cols):
        if len(s) < 2:
            continue
        for i in range(len(s)):
            face = s[:i] + s[i + 1 :]
            if face in index:
                m[index[face], j] += -1 if i % 2 else 1
    return m


def boundary_matrix(k: Complex, n: int) -> IntMatrix:
    if n < 0:
        raise ValueError(f"Negative degree: {n}")
    rows = k.basis(n - 1) if n > 0 else []
    return _boundary_between(k.basis(n), rows)


def relative_chain_complex(p: "SimplicialPair | Complex") -> ChainComplexRep:
    p = as_pair(p)
    top = p.total.dimension
    bases = {
        n: [s for s in p.total.basis(n) if s not in p.sub.simplices] for n in range(top + 1)
    }
    boundaries = {
        n: _boundary_between(bases[n], bases[n - 1] if n > 0 else [])
        for n in range(top + 1)
    }
    return ChainComplexRep(bases, boundaries, top)


def check_chain_complex(k: "Complex | SimplicialPair | ChainComplexRep") -> bool:
    rep = k if isinstance(k, ChainComplexRep) else relative_chain_complex(k)
    return all(
        mx.is_zero(mx.matmul(rep.boundary(n), rep.boundary(n + 1)))
        for n in range(rep.top + 1)
    )


def homology(p: "SimplicialPair | Complex", coefficients: FgAbGroup, n: int) -> FgAbGroup:
    if n < 0:
        return FgAbGroup.trivial()
    rep = relative_chain_complex(p)
    return homology_from_boundaries(rep.boundary(n + 1), rep.boundary(n), coefficients)


def cohomology(p: "SimplicialPair | Complex", coefficients: FgAbGroup, n: int) -> FgAbGroup:
    if n < 0:
        return FgAbGroup.trivial()
    rep = relative_chain_complex(p)
    return cohomology_from_coboundaries(
        mx.transpose(rep.boundary(n + 1)), mx.transpose(rep.boundary(n)), coefficients
    )


class SimplicialMap(object):
    _source: SimplicialPair
    _target: SimplicialPair
    _vertex_map: dict[Vertex, Vertex]

    def __init__(
        self,
        source: "SimplicialPair | Complex",
        target: "SimplicialPair | Complex",
        vertex_map: Mapping[Vertex, Vertex],
    ) -> None:
        self._source = as_pair(source)
        self._target = as_pair(target)
        self._vertex_map = dict(vertex_map)
        for v in self._source.total.vertices:
            if v not in self._vertex_map:
                raise NotSimplicial(f"Vertex {v!r} is not mapped")
        for s in self._source.total:
            if self.image(s) not in self._target.total.simplices:
                raise NotSimplicial(f"Image of {s} is not a simplex: {self.image(s)}")

    @classmethod
    def identity(cls, p: "SimplicialPair | Complex") -> "SimplicialMap":
        p = as_pair(p)
        return cls(p, p, {v: v for v in p.total.vertices})

    @property
    def source(self) -> SimplicialPair:
        return self._source

    @property
    def target(self) -> SimplicialPair:
        return self._target

    @property
    def vertex_map(self) -> dict[Vertex, Vertex]:
        return dict(self._vertex_map)

    def __call__(self, v: Vertex) -> Vertex:
        return self._vertex_map[v]

    def image(self, s: Iterable[Vertex]) -> Simplex:
        return oriented(self._vertex_map[v] for v in s)

    def is_pair_map(self) -> bool:
        return all(self.image(s) in self._target.sub.simplices for s in self._source.sub)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialMap):
            return NotImplemented
        return (
            self._source == other._source
            and self._target == other._target
            and all(self(v) == other(v) for v in self._source.total.vertices)
        )

    def __hash__(self) -> int:
        return hash((self._source, self._target))

    def chain_matrix(self, n: int) -> IntMatrix:
        src = [s for s in self._source.total.basis(n) if s not in self._source.sub.simplices]
        tgt = [s for s in self._target.total.basis(n) if s not in self._target.sub.simplices]
        index = {s: i for i, s in enumerate(tgt)}
        m = mx.zeros(len(tgt), len(src))
        for j, s in enumerate(src):
            image = [self._vertex_map[v] for v in s]
            if len(set(image)) < len(image):
                continue
            t = oriented(image)
            if t in index:
                m[index[t], j] = permutation_sign(image)
        return m


def compose(g: SimplicialMap, f: SimplicialMap) -> SimplicialMap:
    """g after f."""
    if f.target != g.source:
        raise ShapeMismatch("Target of the first map is not the source of the second")
    return SimplicialMap(
        f.source, g.target, {v: g(f(v)) for v in f.source.total.vertices}
    )


def induced(
    f: SimplicialMap, coefficients: FgAbGroup, n: int, variance: Variance = "homology"
) -> GroupHom:
    """f_* on H_n, or f^* : H^n(target) -> H^n(source) on cohomology."""
    _check_variance(variance)
    if not f.is_pair_map():
        raise NotPairMap("Subcomplex of the source is not mapped into the target subcomplex")
    if n < 0:
        trivial = FgAbGroup.trivial()
        return GroupHom.zero(trivial, trivial)
    src = relative_chain_complex(f.source)
    tgt = relative_chain_complex(f.target)
    chain_map = [f.chain_matrix(k) for k in range(n + 2)]
    src_bd = src.boundary_list(n + 1)
    tgt_bd = tgt.boundary_list(n + 1)
    if variance == "homology":
        return induced_on_homology(chain_map, src_bd, tgt_bd, coefficients, n)
    return induced_on_cohomology(chain_map, src_bd, tgt_bd, coefficients, n)


def contiguous(f: SimplicialMap, g: SimplicialMap) -> bool:
    if f.source != g.source or f.target != g.target:
        raise ValueError("Contiguity needs maps with the same source and target")
    for s in f.source.total:
        if oriented(f.image(s) + g.image(s)) not in f.target.total.simplices:
            return False
    for s in f.source.sub:
        if oriented(f.image(s) + g.image(s)) not in f.target.sub.simplices:
            return False
    return True


def inclusion(sub: "SimplicialPair | Complex", total: "SimplicialPair | Complex") -> SimplicialMap:
    sub = as_pair(sub)
    return SimplicialMap(sub, total, {v: v for v in sub.total.vertices})


def _embed_blocks(
    vec: Sequence[int], src: Sequence[Simplex], dst: Sequence[Simplex], nblocks: int
) -> list[int]:
    index = {s: i for i, s in enumerate(dst)}
    out = [0] * (len(dst) * nblocks)
    for b in range(nblocks):
        for i, s in enumerate(src):
            if s in index:
                out[b * len(dst) + index[s]] = vec[b * len(src) + i]
    return out


def connecting_delta(
    p: SimplicialPair, coefficients: FgAbGroup, n: int, variance: Variance = "homology"
) -> GroupHom:
    """Connecting map H_n(K, L) -> H_{n-1}(L), or H^{n-1}(L) -> H^n(K, L).

    A relative (co)cycle is lifted to an absolute (co)chain, the absolute
    (co)boundary is applied, and the result is read off on L (resp. K - L).
    """
    _check_variance(variance)
    p = as_pair(p)
    rel = relative_chain_complex(p)
    sub = relative_chain_complex(p.sub)
    absolute = relative_chain_complex(p.total)
    k = coefficients.ngens

    def rel_basis(d: int) -> list[Simplex]:
        return rel.bases.get(d, [])

    def sub_basis(d: int) -> list[Simplex]:
        return sub.bases.get(d, [])

    def abs_basis(d: int) -> list[Simplex]:
        return absolute.bases.get(d, [])

    if variance == "homology":
        src = homology_presentation(rel.boundary(n + 1), rel.boundary(n), coefficients)
        if n - 1 < 0:
            return GroupHom.zero(src.group, FgAbGroup.trivial())
        tgt = homology_presentation(sub.boundary(n), sub.boundary(n - 1), coefficients)
        d = tensor_chain_map(absolute.boundary(n), coefficients)
        m = mx.zeros(tgt.group.ngens, src.group.ngens)
        for j in range(src.group.ngens):
            lifted = _embed_blocks(src.lift(j), rel_basis(n), abs_basis(n), k)
            image = list(mx.matmul(d, mx.column(lifted))[:, 0]) if lifted else []
            restricted = _embed_blocks(image, abs_basis(n - 1), sub_basis(n - 1), k)
            m[:, j] = tgt.to_canonical(restricted)
        return GroupHom(src.group, tgt.group, m)

    tgt = homology_presentation(
        mx.transpose(rel.boundary(n)), mx.transpose(rel.boundary(n + 1)), coefficients
    )
    if n - 1 < 0:
        return GroupHom.zero(FgAbGroup.trivial(), tgt.group)
    src = homology_presentation(
        mx.transpose(sub.boundary(n - 1)), mx.transpose(sub.boundary(n)), coefficients
    )
    delta = tensor_chain_map(mx.transpose(absolute.boundary(n)), coefficients)
    m = mx.zeros(tgt.group.ngens, src.group.ngens)
    for j in range(src.group.ngens):
        extended = _embed_blocks(src.lift(j), sub_basis(n - 1), abs_basis(n - 1), k)
        image = list(mx.matmul(delta, mx.column(extended))[:, 0]) if extended else []
        restricted = _embed_blocks(image, abs_basis(n), rel_basis(n), k)
        m[:, j] = tgt.to_canonical(restricted)
    return GroupHom(src.group, tgt.group, m)


def pair_sequence_labels(lo: int, hi: int, variance: Variance = "homology") -> list[str]:
    _check_variance(variance)
    if variance == "homology":
        labels = [f"d_{hi + 1}"]
        for n in range(hi, lo - 1, -1):
            labels += [f"i_{n}", f"j_{n}", f"d_{n}"]
        return labels
    labels = []
    for n in range(lo, hi + 1):
        labels += [f"delta^{n}", f"j^{n}", f"i^{n}"]
    return labels + [f"delta^{hi + 1}"]


def pair_long_sequence(
    p: SimplicialPair,
    coefficients: FgAbGroup,
    n_range: tuple[int, int],
    variance: Variance = "homology",
) -> list[GroupHom]:
    """Long sequence of the pair over degrees lo..hi, in the order of pair_sequence_labels.

    Homology runs H_{hi+1}(K,L) -> H_hi(L) -> H_hi(K) -> H_hi(K,L) -> ...;
    cohomology runs H^{lo-1}(L) -> H^lo(K,L) -> H^lo(K) -> H^lo(L) -> ...
    """
    _check_variance(variance)
    lo, hi = n_range
    if lo > hi:
        raise ValueError(f"Invalid degree range: {lo}..{hi}")
    p = as_pair(p)
    i = inclusion(p.sub, p.total)
    j = SimplicialMap(p.total, p, {v: v for v in p.total.vertices})
    if variance == "homology":
        seq = [connecting_delta(p, coefficients, hi + 1, "homology")]
        for n in range(hi, lo - 1, -1):
            seq += [
                induced(i, coefficients, n, "homology"),
                induced(j, coefficients, n, "homology"),
                connecting_delta(p, coefficients, n, "homology"),
            ]
        return seq
    seq = []
    for n in range(lo, hi + 1):
        seq += [
            connecting_delta(p, coefficients, n, "cohomology"),
            induced(j, coefficients, n, "cohomology"),
            induced(i, coefficients, n, "cohomology"),
        ]
    return seq + [connecting_delta(p, coefficients, hi + 1, "cohomology")]


def _ordered_basis(p: SimplicialPair, n: int) -> list[Simplex]:
    vertices = p.total.vertices
    return [
        t
        for t in itertools.product(vertices, repeat=n + 1)
        if oriented(t) in p.total.simplices and oriented(t) not in p.sub.simplices
    ]


def _ordered_boundaries(p: SimplicialPair, upto: int) -> list[IntMatrix]:
    bases = [_ordered_basis(p, d) for d in range(upto + 1)]
    out = [mx.zeros(0, len(bases[0]))]
    for d in range(1, upto + 1):
        out.append(_boundary_between(bases[d], bases[d - 1]))
    return out


def _check_ordered_limit(p: SimplicialPair, n: int, limit: int) -> None:
    if len(p.total) > limit:
        raise ValueError(
            f"Ordered chains are limited to {limit} simplices, got {len(p.total)}"
        )
    if n > p.total.dimension + 1:
        raise ValueError(f"Ordered chains are limited to degree {p.total.dimension + 1}")


def ordered_homology(
    p: "SimplicialPair | Complex",
    coefficients: FgAbGroup,
    n: int,
    limit: int = DEFAULT_ORDERED_LIMIT,
) -> FgAbGroup:
    p = as_pair(p)
    _check_ordered_limit(p, n, limit)
    if n < 0:
        return FgAbGroup.trivial()
    bd = _ordered_boundaries(p, n + 1)
    return homology_from_boundaries(bd[n + 1], bd[n], coefficients)


def ordered_cohomology(
    p: "SimplicialPair | Complex",
    coefficients: FgAbGroup,
    n: int,
    limit: int = DEFAULT_ORDERED_LIMIT,
) -> FgAbGroup:
    p = as_pair(p)
    _check_ordered_limit(p, n, limit)
    if n < 0:
        return FgAbGroup.trivial()
    bd = _ordered_boundaries(p, n + 1)
    return cohomology_from_coboundaries(
        mx.transpose(bd[n + 1]), mx.transpose(bd[n]), coefficients
    )


def hollow_polygon(n: int) -> Complex:
    if n < 3:
        raise ValueError(f"A hollow polygon needs at least 3 vertices, got {n}")
    return Complex.generated_by((k, (k + 1) % n) for k in range(n))


def path(n: int) -> Complex:
    if n < 1:
        raise ValueError(f"A path needs at least one vertex, got {n}")
    return Complex.generated_by([(0,)] + [(k, k + 1) for k in range(n - 1)])


def simplex_boundary(d: int) -> Complex:
    full = range(d + 1)
    return Complex.generated_by(
        tuple(v for v in full if v != omit) for omit in full
    )


def projective_plane() -> Complex:
    """Minimal 6-vertex triangulation of the real projective plane."""
    return Complex.generated_by(
        [
            (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1),
            (1, 2, 4), (2, 3, 5), (3, 4, 1), (4, 5, 2), (5, 1, 3),
        ]
    )  # fmt: skip


def wedge_of_triangles() -> Complex:
    return Complex.generated_by([(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)])
