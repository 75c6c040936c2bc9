"""Exact arithmetic of finitely generated abelian groups.

Every group is kept in invariant-factor form Z^r + Z/d1 + ... + Z/dk with
d1 | d2 | ... | dk and d1 >= 2.  Generators are ordered free part first, then
torsion generators by ascending order.  A homomorphism is an integer matrix
whose column j is the image of source generator j written on target
generators, with torsion rows reduced modulo their order.
"""

import re
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import _matrix as mx
from ._matrix import IntMatrix
from .errors import NonComposable, NotAChainMap, ShapeMismatch

Direction = Literal["inverse", "direct"]


@dataclass(frozen=True)
class _Snf:
    S: list[list[int]]
    U: list[list[int]]
    V: list[list[int]]
    Uinv: list[list[int]]
    Vinv: list[list[int]]
    rank: int

    @property
    def divisors(self) -> list[int]:
        return [self.S[i][i] for i in range(self.rank)]


def _eye(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def _snf(m: IntMatrix) -> _Snf:
    rows, cols = m.shape
    S = [[int(x) for x in row] for row in m]
    U, Uinv = _eye(rows), _eye(rows)
    V, Vinv = _eye(cols), _eye(cols)

    def swap_rows(i: int, j: int) -> None:
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]
        for r in Uinv:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i: int, j: int) -> None:
        for r in S:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row[dst] += q * row[src]
        S[dst] = [a + q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]
        for r in Uinv:
            r[src] -= q * r[dst]

    def add_col(dst: int, src: int, q: int) -> None:
        # col[dst] += q * col[src]
        for r in S:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]
        Vinv[src] = [a - q * b for a, b in zip(Vinv[src], Vinv[dst])]

    def move_to_pivot(i: int, j: int, t: int) -> None:
        if i != t:
            swap_rows(t, i)
        if j != t:
            swap_cols(t, j)

    t = 0
    while t < min(rows, cols):
        candidates = [
            (abs(S[i][j]), i, j)
            for i in range(t, rows)
            for j in range(t, cols)
            if S[i][j] != 0
        ]
        if not candidates:
            break
        _, i, j = min(candidates)
        move_to_pivot(i, j, t)
        while True:
            p = S[t][t]
            for i in range(t + 1, rows):
                if S[i][t] != 0:
                    add_row(i, t, -(S[i][t] // p))
            for j in range(t + 1, cols):
                if S[t][j] != 0:
                    add_col(j, t, -(S[t][j] // p))
            rest = [(abs(S[i][t]), i, t) for i in range(t + 1, rows) if S[i][t]]
            rest += [(abs(S[t][j]), t, j) for j in range(t + 1, cols) if S[t][j]]
            if rest:
                _, i, j = min(rest)
                move_to_pivot(i, j, t)
                continue
            bad = next(
                (
                    i
                    for i in range(t + 1, rows)
                    for j in range(t + 1, cols)
                    if S[i][j] % p != 0
                ),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
            for r in Uinv:
                r[t] = -r[t]
        t += 1
    return _Snf(S, U, V, Uinv, Vinv, t)


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Returns (S, U, V) with S = U @ m @ V, U and V unimodular.

    Pivots are chosen by minimal absolute value in each elimination round.
    """
    rows, cols = m.shape
    snf = _snf(m)
    return (
        mx.int_matrix(snf.S, rows, cols),
        mx.int_matrix(snf.U, rows, rows),
        mx.int_matrix(snf.V, cols, cols),
    )


def integer_kernel(m: IntMatrix) -> IntMatrix:
    rows, cols = m.shape
    snf = _snf(m)
    basis = [[snf.V[i][j] for j in range(snf.rank, cols)] for i in range(cols)]
    return mx.int_matrix(basis, cols, cols - snf.rank)


class Lattice(object):
    _ambient: int
    _U: list[list[int]]
    _Uinv: list[list[int]]
    _divisors: list[int]

    def __init__(self, generators: IntMatrix) -> None:
        self._ambient = generators.shape[0]
        snf = _snf(generators)
        self._U = snf.U
        self._Uinv = snf.Uinv
        self._divisors = snf.divisors

    @property
    def ambient(self) -> int:
        return self._ambient

    @property
    def rank(self) -> int:
        return len(self._divisors)

    @property
    def basis(self) -> IntMatrix:
        b = mx.zeros(self._ambient, self.rank)
        for j, s in enumerate(self._divisors):
            for i in range(self._ambient):
                b[i, j] = self._Uinv[i][j] * s
        return b

    def _transformed(self, v: Sequence[int]) -> list[int]:
        return [sum(u * int(x) for u, x in zip(row, v)) for row in self._U]

    def contains(self, v: Sequence[int]) -> bool:
        w = self._transformed(v)
        if any(w[i] != 0 for i in range(self.rank, self._ambient)):
            return False
        return all(w[i] % s == 0 for i, s in enumerate(self._divisors))

    def coordinates(self, v: Sequence[int]) -> list[int]:
        if not self.contains(v):
            raise ValueError(f"Vector is not in the lattice: {list(v)}")
        w = self._transformed(v)
        return [w[i] // s for i, s in enumerate(self._divisors)]


def kernel_lattice(a: IntMatrix, row_moduli: Sequence[int]) -> Lattice:
    rows, cols = a.shape
    if rows == 0:
        return Lattice(mx.identity(cols))
    augmented = mx.hstack([a, mx.diagonal(list(row_moduli))], rows)
    kernel = integer_kernel(augmented)
    return Lattice(mx.copy(kernel[:cols, :]))


class Presentation(object):
    """Z^k / span(relations) brought to canonical generators.

    `project` takes coordinates on the k presentation generators to canonical
    coordinates; `lift` takes canonical generator j back to presentation
    coordinates.
    """

    _ngens: int
    _group: "FgAbGroup"
    _project: list[list[int]]
    _lift: list[list[int]]

    def __init__(self, ngens: int, relations: IntMatrix) -> None:
        if relations.shape[0] != ngens:
            raise ShapeMismatch(
                f"Relations have {relations.shape[0]} rows for {ngens} generators"
            )
        self._ngens = ngens
        snf = _snf(relations)
        diag = [snf.S[i][i] if i < snf.rank else 0 for i in range(ngens)]
        free = [i for i, d in enumerate(diag) if d == 0]
        torsion = [i for i, d in enumerate(diag) if d > 1]
        selected = free + torsion
        self._group = FgAbGroup._canonical(len(free), tuple(diag[i] for i in torsion))
        self._project = [snf.U[i] for i in selected]
        self._lift = [[snf.Uinv[r][i] for i in selected] for r in range(ngens)]

    @property
    def group(self) -> "FgAbGroup":
        return self._group

    @property
    def ngens(self) -> int:
        return self._ngens

    def project(self, coords: Sequence[int]) -> list[int]:
        w = [sum(u * int(x) for u, x in zip(row, coords)) for row in self._project]
        return self._group.reduce(w)

    def lift(self, j: int) -> list[int]:
        return [row[j] for row in self._lift]


class Subquotient(object):
    _cycles: Lattice
    _presentation: Presentation
    _basis: IntMatrix

    def __init__(self, cycles: Lattice, boundaries: IntMatrix) -> None:
        if boundaries.shape[0] != cycles.ambient:
            raise ShapeMismatch(
                f"Boundaries live in Z^{boundaries.shape[0]}, cycles in Z^{cycles.ambient}"
            )
        self._cycles = cycles
        k = cycles.rank
        relations = mx.zeros(k, boundaries.shape[1])
        for j in range(boundaries.shape[1]):
            relations[:, j] = cycles.coordinates(list(boundaries[:, j]))
        self._presentation = Presentation(k, relations)
        self._basis = cycles.basis

    @property
    def group(self) -> "FgAbGroup":
        return self._presentation.group

    @property
    def ambient(self) -> int:
        return self._cycles.ambient

    def lift(self, j: int) -> list[int]:
        coords = self._presentation.lift(j)
        return [
            sum(int(self._basis[i, c]) * x for c, x in enumerate(coords))
            for i in range(self.ambient)
        ]

    def lifts(self) -> IntMatrix:
        out = mx.zeros(self.ambient, self.group.ngens)
        for j in range(self.group.ngens):
            out[:, j] = self.lift(j)
        return out

    def to_canonical(self, v: Sequence[int]) -> list[int]:
        return self._presentation.project(self._cycles.coordinates(v))

    def contains(self, v: Sequence[int]) -> bool:
        return self._cycles.contains(v)


class FgAbGroup(object):
    _free_rank: int
    _invariant_factors: tuple[int, ...]

    def __init__(self, free_rank: int = 0, torsion: Sequence[int] = ()) -> None:
        if free_rank < 0:
            raise ValueError(f"Negative free rank: {free_rank}")
        orders = [abs(int(d)) for d in torsion]
        extra_free = sum(1 for d in orders if d == 0)
        orders = [d for d in orders if d > 1]
        if not all(orders[i + 1] % orders[i] == 0 for i in range(len(orders) - 1)):
            p = Presentation(len(orders), mx.diagonal(orders))
            orders = list(p.group.invariant_factors)
        self._free_rank = free_rank + extra_free
        self._invariant_factors = tuple(orders)

    @classmethod
    def _canonical(cls, free_rank: int, factors: tuple[int, ...]) -> "FgAbGroup":
        obj = object.__new__(cls)
        obj._free_rank = free_rank
        obj._invariant_factors = factors
        return obj

    @classmethod
    def from_relations(cls, ngens: int, relations: IntMatrix) -> "FgAbGroup":
        return Presentation(ngens, relations).group

    @classmethod
    def trivial(cls) -> "FgAbGroup":
        return cls._canonical(0, ())

    @classmethod
    def integers(cls, rank: int = 1) -> "FgAbGroup":
        return cls._canonical(rank, ())

    @classmethod
    def cyclic(cls, order: int) -> "FgAbGroup":
        return cls(0, [order])

    @classmethod
    def parse(cls, text: str) -> "FgAbGroup":
        """Parses "0", "Z", "Z^2 + Z/2 + Z/6", "Z_2" or "Z+Z/2"."""
        s = text.replace(" ", "")
        if s in ("0", ""):
            return cls.trivial()
        free = 0
        torsion: list[int] = []
        for term in s.split("+"):
            m = re.fullmatch(r"Z(?:\^(\d+))?", term)
            if m:
                free += int(m.group(1)) if m.group(1) else 1
                continue
            m = re.fullmatch(r"(?:Z[/_](\d+))(?:\^(\d+))?", term)
            if m:
                torsion.extend([int(m.group(1))] * int(m.group(2) or 1))
                continue
            if term == "0":
                continue
            raise ValueError(f"Invalid group term: {term}")
        return cls(free, torsion)

    @property
    def free_rank(self) -> int:
        return self._free_rank

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self._invariant_factors

    @property
    def ngens(self) -> int:
        return self._free_rank + len(self._invariant_factors)

    @property
    def orders(self) -> tuple[int, ...]:
        return (0,) * self._free_rank + self._invariant_factors

    def is_trivial(self) -> bool:
        return self.ngens == 0

    def reduce(self, coords: Sequence[int]) -> list[int]:
        return [int(x) % d if d else int(x) for x, d in zip(coords, self.orders)]

    def direct_sum(self, other: "FgAbGroup") -> "FgAbGroup":
        return FgAbGroup(
            self._free_rank + other.free_rank,
            self._invariant_factors + other.invariant_factors,
        )

    def power(self, k: int) -> "FgAbGroup":
        out = FgAbGroup.trivial()
        for _ in range(k):
            out = out.direct_sum(self)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FgAbGroup):
            return NotImplemented
        return (
            self._free_rank == other._free_rank
            and self._invariant_factors == other._invariant_factors
        )

    def __hash__(self) -> int:
        return hash((self._free_rank, self._invariant_factors))

    def __repr__(self) -> str:
        return f"FgAbGroup({self._free_rank}, {list(self._invariant_factors)})"

    def __str__(self) -> str:
        terms = []
        if self._free_rank == 1:
            terms.append("Z")
        elif self._free_rank > 1:
            terms.append(f"Z^{self._free_rank}")
        terms.extend(f"Z/{d}" for d in self._invariant_factors)
        return " + ".join(terms) if terms else "0"


CoefficientGroup = FgAbGroup


def iso_check(a: FgAbGroup, b: FgAbGroup) -> bool:
    return a == b


class GroupHom(object):
    _source: FgAbGroup
    _target: FgAbGroup
    _matrix: IntMatrix

    def __init__(self, source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> None:
        if matrix.shape != (target.ngens, source.ngens):
            raise ShapeMismatch(
                f"Matrix shape {matrix.shape} does not fit {source} -> {target}"
            )
        self._source = source
        self._target = target
        self._matrix = mx.reduce_rows(matrix, target.orders)
        if not self.respects_torsion():
            raise ValueError(f"Matrix does not respect torsion orders of {source}")

    @classmethod
    def identity(cls, group: FgAbGroup) -> "GroupHom":
        return cls(group, group, mx.identity(group.ngens))

    @classmethod
    def zero(cls, source: FgAbGroup, target: FgAbGroup) -> "GroupHom":
        return cls(source, target, mx.zeros(target.ngens, source.ngens))

    @property
    def source(self) -> FgAbGroup:
        return self._source

    @property
    def target(self) -> FgAbGroup:
        return self._target

    @property
    def matrix(self) -> IntMatrix:
        return self._matrix

    def respects_torsion(self) -> bool:
        for j, d in enumerate(self._source.orders):
            if d == 0:
                continue
            image = [d * int(x) for x in self._matrix[:, j]]
            if any(y for y in self._target.reduce(image)):
                return False
        return True

    def __call__(self, coords: Sequence[int]) -> list[int]:
        w = mx.matmul(self._matrix, mx.column(list(coords)))
        return self._target.reduce(list(w[:, 0]))

    def __matmul__(self, other: "GroupHom") -> "GroupHom":
        """self @ other is the composite "self after other"."""
        if other.target != self._source:
            raise NonComposable(f"Unable to compose {other.target} with {self._source}")
        return GroupHom(
            other.source, self._target, mx.matmul(self._matrix, other.matrix)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (
            self._source == other._source
            and self._target == other._target
            and np.array_equal(self._matrix, other._matrix)
        )

    def __hash__(self) -> int:
        return hash((self._source, self._target, tuple(self._matrix.flat)))

    def __repr__(self) -> str:
        return f"GroupHom({self._source}, {self._target}, {mx.to_lists(self._matrix)})"

    def is_zero(self) -> bool:
        return mx.is_zero(self._matrix)

    def _kernel_lattice(self) -> Lattice:
        return kernel_lattice(self._matrix, self._target.orders)

    def kernel(self) -> FgAbGroup:
        relations = mx.diagonal(list(self._source.orders))
        return Subquotient(self._kernel_lattice(), relations).group

    def image(self) -> FgAbGroup:
        relations = mx.diagonal(list(self._target.orders))
        spanning = mx.hstack([self._matrix, relations], self._target.ngens)
        return Subquotient(Lattice(spanning), relations).group

    def cokernel(self) -> FgAbGroup:
        n = self._target.ngens
        relations = mx.hstack([self._matrix, mx.diagonal(list(self._target.orders))], n)
        return FgAbGroup.from_relations(n, relations)

    def is_injective(self) -> bool:
        return self.kernel().is_trivial()

    def is_surjective(self) -> bool:
        return self.cokernel().is_trivial()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()


@dataclass(frozen=True)
class SlotFailure:
    slot: int
    reason: str
    incoming: list[list[int]] = field(default_factory=list)
    outgoing: list[list[int]] = field(default_factory=list)


def _check_endpoints(sequence: Sequence[GroupHom]) -> None:
    for i in range(len(sequence) - 1):
        if sequence[i].target != sequence[i + 1].source:
            raise NonComposable(
                f"Slot {i + 1}: {sequence[i].target} != {sequence[i + 1].source}"
            )


def check_order_two(sequence: Sequence[GroupHom]) -> list[SlotFailure]:
    _check_endpoints(sequence)
    failures = []
    for i in range(1, len(sequence)):
        f, g = sequence[i - 1], sequence[i]
        if not (g @ f).is_zero():
            failures.append(
                SlotFailure(
                    i, "composite is nonzero", mx.to_lists(f.matrix), mx.to_lists(g.matrix)
                )
            )
    return failures


def check_exact(sequence: Sequence[GroupHom]) -> list[SlotFailure]:
    """Slots where ker(outgoing) != im(incoming), decided on canonical presentations."""
    failures = check_order_two(sequence)
    bad = {s.slot for s in failures}
    for i in range(1, len(sequence)):
        if i in bad:
            continue
        f, g = sequence[i - 1], sequence[i]
        middle = f.target
        boundaries = mx.hstack(
            [f.matrix, mx.diagonal(list(middle.orders))], middle.ngens
        )
        homology = Subquotient(g._kernel_lattice(), boundaries).group
        if not homology.is_trivial():
            failures.append(
                SlotFailure(
                    i,
                    f"ker/im = {homology}",
                    mx.to_lists(f.matrix),
                    mx.to_lists(g.matrix),
                )
            )
    return sorted(failures, key=lambda s: s.slot)


def _tensor(d: IntMatrix, coefficients: FgAbGroup) -> tuple[IntMatrix, list[int], list[int]]:
    orders = coefficients.orders
    rows, cols = d.shape
    block = mx.block_diagonal([d] * len(orders)) if orders else mx.zeros(0, 0)
    row_moduli = [g for g in orders for _ in range(rows)]
    col_moduli = [g for g in orders for _ in range(cols)]
    return block, row_moduli, col_moduli


def tensor_chain_map(f: IntMatrix, coefficients: FgAbGroup) -> IntMatrix:
    return _tensor(f, coefficients)[0]


def homology_presentation(
    d_in: IntMatrix, d_out: IntMatrix, coefficients: FgAbGroup
) -> Subquotient:
    """ker(d_out (x) 1_G) / im(d_in (x) 1_G) with its canonical generators."""
    if d_out.shape[1] != d_in.shape[0]:
        raise ShapeMismatch(
            f"Outgoing map has {d_out.shape[1]} columns, incoming has {d_in.shape[0]} rows"
        )
    if not mx.is_zero(mx.matmul(d_out, d_in)):
        raise NonComposable("Composite of consecutive boundaries is nonzero")
    a, row_moduli, col_moduli = _tensor(d_out, coefficients)
    b, _, _ = _tensor(d_in, coefficients)
    m = len(col_moduli)
    if a.shape[0] == 0:
        a = mx.zeros(0, m)
    if b.shape[0] != m:
        b = mx.zeros(m, 0)
    cycles = kernel_lattice(a, row_moduli)
    boundaries = mx.hstack([b, mx.diagonal(col_moduli)], m)
    return Subquotient(cycles, boundaries)


def homology_from_boundaries(
    d_in: IntMatrix, d_out: IntMatrix, coefficients: FgAbGroup
) -> FgAbGroup:
    return homology_presentation(d_in, d_out, coefficients).group


def cohomology_from_coboundaries(
    delta_out: IntMatrix, delta_in: IntMatrix, coefficients: FgAbGroup
) -> FgAbGroup:
    return homology_presentation(delta_in, delta_out, coefficients).group


def _degree_size(boundaries: Sequence[IntMatrix], k: int) -> int:
    # C_k is the column space of boundary k, or the row space of boundary k+1.
    if k < 0:
        return 0
    if k < len(boundaries):
        return boundaries[k].shape[1]
    if k + 1 < len(boundaries):
        return boundaries[k + 1].shape[0]
    return 0


def _boundary(boundaries: Sequence[IntMatrix], k: int) -> IntMatrix:
    if 0 <= k < len(boundaries):
        return boundaries[k]
    return mx.zeros(_degree_size(boundaries, k - 1), _degree_size(boundaries, k))


def _chain_component(
    chain_map: Sequence[IntMatrix],
    source: Sequence[IntMatrix],
    target: Sequence[IntMatrix],
    k: int,
) -> IntMatrix:
    if 0 <= k < len(chain_map):
        return chain_map[k]
    return mx.zeros(_degree_size(target, k), _degree_size(source, k))


def check_chain_map(
    chain_map: Sequence[IntMatrix],
    source: Sequence[IntMatrix],
    target: Sequence[IntMatrix],
) -> None:
    for k in range(1, max(len(source), len(target), len(chain_map))):
        left = mx.matmul(_boundary(target, k), _chain_component(chain_map, source, target, k))
        right = mx.matmul(
            _chain_component(chain_map, source, target, k - 1), _boundary(source, k)
        )
        if not np.array_equal(left, right):
            raise NotAChainMap(f"Square at degree {k} does not commute")


def induced_on_homology(
    chain_map: Sequence[IntMatrix],
    source_boundaries: Sequence[IntMatrix],
    target_boundaries: Sequence[IntMatrix],
    coefficients: FgAbGroup,
    n: int,
) -> GroupHom:
    check_chain_map(chain_map, source_boundaries, target_boundaries)
    src = homology_presentation(
        _boundary(source_boundaries, n + 1), _boundary(source_boundaries, n), coefficients
    )
    tgt = homology_presentation(
        _boundary(target_boundaries, n + 1), _boundary(target_boundaries, n), coefficients
    )
    f = tensor_chain_map(
        _chain_component(chain_map, source_boundaries, target_boundaries, n), coefficients
    )
    return _induced(f, src, tgt)


def induced_on_cohomology(
    chain_map: Sequence[IntMatrix],
    source_boundaries: Sequence[IntMatrix],
    target_boundaries: Sequence[IntMatrix],
    coefficients: FgAbGroup,
    n: int,
) -> GroupHom:
    """Map H^n(target) -> H^n(source) dual to the given chain map."""
    check_chain_map(chain_map, source_boundaries, target_boundaries)
    tgt = homology_presentation(
        mx.transpose(_boundary(target_boundaries, n)),
        mx.transpose(_boundary(target_boundaries, n + 1)),
        coefficients,
    )
    src = homology_presentation(
        mx.transpose(_boundary(source_boundaries, n)),
        mx.transpose(_boundary(source_boundaries, n + 1)),
        coefficients,
    )
    f = mx.transpose(_chain_component(chain_map, source_boundaries, target_boundaries, n))
    return _induced(tensor_chain_map(f, coefficients), tgt, src)


def _induced(f: IntMatrix, src: Subquotient, tgt: Subquotient) -> GroupHom:
    m = mx.zeros(tgt.group.ngens, src.group.ngens)
    for j in range(src.group.ngens):
        image = mx.matmul(f, mx.column(src.lift(j)))
        m[:, j] = tgt.to_canonical(list(image[:, 0]))
    return GroupHom(src.group, tgt.group, m)


@dataclass(frozen=True)
class LimitReport:
    limit_group: FgAbGroup
    stage_groups: tuple[FgAbGroup, ...]
    stage_maps: tuple[GroupHom, ...]
    direction: Direction
    window: int
    stabilized: bool
    stable_window: int

    def describe(self) -> str:
        flag = "stabilized" if self.stabilized else "not stabilized"
        return f"{self.limit_group} ({flag})"


def finite_chain_limit(
    groups: Sequence[FgAbGroup],
    maps: Sequence[GroupHom],
    direction: Direction,
    window: int,
) -> LimitReport:
    """Limit of a finite chain of groups listed coarse to fine.

    Inverse chains carry maps fine -> coarse, direct chains coarse -> fine.
    A finite chain has a maximum, so the (co)limit is the finest group; the
    report counts how many trailing maps are isomorphisms.
    """
    if not groups:
        raise ValueError("Empty chain of groups")
    if window < 1:
        raise ValueError(f"Stabilization window must be positive: {window}")
    if direction not in ("inverse", "direct"):
        raise ValueError(f"Invalid direction: {direction}")
    if len(maps) != len(groups) - 1:
        raise ShapeMismatch(f"{len(groups)} groups need {len(groups) - 1} maps")
    for i, h in enumerate(maps):
        coarse, fine = groups[i], groups[i + 1]
        expected = (fine, coarse) if direction == "inverse" else (coarse, fine)
        if (h.source, h.target) != expected:
            raise ShapeMismatch(
                f"Map {i} runs {h.source} -> {h.target}, expected {expected[0]} -> {expected[1]}"
            )
    stable = 0
    for h in reversed(maps):
        if not h.is_isomorphism():
            break
        stable += 1
    return LimitReport(
        limit_group=groups[-1],
        stage_groups=tuple(groups),
        stage_maps=tuple(maps),
        direction=direction,
        window=window,
        stabilized=stable >= window,
        stable_window=stable,
    )
