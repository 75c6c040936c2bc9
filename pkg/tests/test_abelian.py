import itertools
import math
import random

import numpy as np
import pytest
from fcechlib import _matrix as mx
from fcechlib.abelian import (
    FgAbGroup,
    GroupHom,
    Lattice,
    check_exact,
    check_order_two,
    finite_chain_limit,
    homology_from_boundaries,
    integer_kernel,
    iso_check,
    kernel_lattice,
    smith_normal_form,
)
from fcechlib.errors import NonComposable, ShapeMismatch

Z = FgAbGroup.integers()
Z2 = FgAbGroup.cyclic(2)
Z6 = FgAbGroup.cyclic(6)


def random_matrix(rng: random.Random, rows: int, cols: int, bound: int = 9):
    return mx.int_matrix(
        [[rng.randint(-bound, bound) for _ in range(cols)] for _ in range(rows)], rows, cols
    )


def random_unimodular(rng: random.Random, n: int):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.randrange(n), rng.randrange(n)
        if i == j:
            u[i] = [-x for x in u[i]]
        else:
            c = rng.randint(-3, 3)
            u[i] = [x + c * y for x, y in zip(u[i], u[j])]
    return mx.int_matrix(u, n, n)


def invariant_factors(S) -> list[int]:
    return [int(S[i, i]) for i in range(min(S.shape))]


class TestMatrix:
    @pytest.mark.parametrize(
        "data,det",
        [
            ([[2, 0], [0, 3]], 6),
            ([[0, 1], [1, 0]], -1),
            ([[1, 2, 3], [4, 5, 6], [7, 8, 10]], -3),
            ([[1, 2], [2, 4]], 0),
            ([], 1),
        ],
    )
    def test_determinant(self, data, det) -> None:
        n = len(data)
        assert mx.determinant(mx.int_matrix(data, n, n)) == det

    def test_determinant_non_square(self) -> None:
        with pytest.raises(ValueError):
            mx.determinant(mx.zeros(2, 3))

    def test_no_overflow(self) -> None:
        big = mx.int_matrix([[2**70]], 1, 1)
        assert mx.matmul(big, big)[0, 0] == 2**140

    def test_reduce_rows(self) -> None:
        m = mx.int_matrix([[7, -1], [5, 9]])
        np.testing.assert_array_equal(mx.reduce_rows(m, [0, 4]), [[7, -1], [1, 1]])


class TestSmithNormalForm:
    def test_known_example(self) -> None:
        m = mx.int_matrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
        S, U, V = smith_normal_form(m)
        np.testing.assert_array_equal(S, [[2, 0, 0], [0, 6, 0], [0, 0, 12]])
        np.testing.assert_array_equal(mx.matmul(mx.matmul(U, m), V), S)

    @pytest.mark.parametrize("seed", range(1000))
    def test_random_matrices(self, seed) -> None:
        rng = random.Random(seed)
        rows, cols = rng.randint(1, 8), rng.randint(1, 8)
        m = random_matrix(rng, rows, cols, bound=20)
        S, U, V = smith_normal_form(m)
        np.testing.assert_array_equal(mx.matmul(mx.matmul(U, m), V), S)
        assert mx.determinant(U) in (1, -1)
        assert mx.determinant(V) in (1, -1)
        diag = invariant_factors(S)
        off = [S[i, j] for i in range(rows) for j in range(cols) if i != j]
        assert all(x == 0 for x in off)
        assert all(d >= 0 for d in diag)
        nonzero = [d for d in diag if d != 0]
        assert diag[: len(nonzero)] == nonzero
        assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))

    @pytest.mark.parametrize("seed", range(300))
    def test_unimodular_invariance(self, seed) -> None:
        rng = random.Random(5000 + seed)
        rows, cols = rng.randint(1, 8), rng.randint(1, 8)
        m = random_matrix(rng, rows, cols, bound=20)
        a, b = random_unimodular(rng, rows), random_unimodular(rng, cols)
        assert mx.determinant(a) in (1, -1)
        moved = mx.matmul(mx.matmul(a, m), b)
        assert invariant_factors(smith_normal_form(moved)[0]) == invariant_factors(
            smith_normal_form(m)[0]
        )

    @pytest.mark.parametrize("seed", range(100))
    def test_minor_gcds(self, seed) -> None:
        # d_1 ... d_k is the gcd of the k x k minors
        rng = random.Random(9000 + seed)
        rows, cols = rng.randint(1, 6), rng.randint(1, 6)
        m = random_matrix(rng, rows, cols, bound=20)
        if rng.random() < 0.3:
            # force a rank drop
            m[rows - 1, :] = 2 * m[0, :]
        diag = invariant_factors(smith_normal_form(m)[0])
        for k in range(1, min(rows, cols) + 1):
            minors = [
                mx.determinant(m[np.ix_(r, c)])
                for r in itertools.combinations(range(rows), k)
                for c in itertools.combinations(range(cols), k)
            ]
            assert math.prod(diag[:k]) == math.gcd(*minors)

    def test_zero_matrix(self) -> None:
        S, U, V = smith_normal_form(mx.zeros(2, 3))
        assert mx.is_zero(S)
        np.testing.assert_array_equal(U, mx.identity(2))

    @pytest.mark.parametrize("seed", range(10))
    def test_integer_kernel(self, seed) -> None:
        rng = random.Random(100 + seed)
        m = random_matrix(rng, rng.randint(1, 4), rng.randint(2, 6), bound=4)
        k = integer_kernel(m)
        assert mx.is_zero(mx.matmul(m, k))
        S, _, _ = smith_normal_form(m)
        rank = sum(1 for i in range(min(S.shape)) if S[i, i] != 0)
        assert k.shape[1] == m.shape[1] - rank


class TestLattice:
    def test_contains_and_coordinates(self) -> None:
        lat = Lattice(mx.int_matrix([[2, 0], [0, 3]]))
        assert lat.rank == 2
        assert lat.contains([4, 9])
        assert not lat.contains([1, 3])
        v = [4, 9]
        coords = lat.coordinates(v)
        np.testing.assert_array_equal(mx.matmul(lat.basis, mx.column(coords))[:, 0], v)

    def test_coordinates_outside(self) -> None:
        lat = Lattice(mx.int_matrix([[2]]))
        with pytest.raises(ValueError) as excinfo:
            lat.coordinates([3])
        assert "not in the lattice" in str(excinfo.value)

    def test_kernel_lattice_modular(self) -> None:
        # 2x = 0 mod 6
        lat = kernel_lattice(mx.int_matrix([[2]]), [6])
        assert lat.contains([3])
        assert not lat.contains([1])


class TestFgAbGroup:
    @pytest.mark.parametrize(
        "free,torsion,expected",
        [
            (0, [], "0"),
            (1, [], "Z"),
            (2, [], "Z^2"),
            (0, [2, 3], "Z/6"),  # coprime orders merge
            (1, [4, 2], "Z + Z/2 + Z/4"),
            (0, [1, 1], "0"),
            (0, [0], "Z"),
            (0, [6, 4], "Z/2 + Z/12"),
        ],
    )
    def test_canonical_form(self, free, torsion, expected) -> None:
        assert str(FgAbGroup(free, torsion)) == expected

    @pytest.mark.parametrize(
        "text,expected",
        [
            ("0", FgAbGroup.trivial()),
            ("Z", Z),
            ("Z^2 + Z/6", FgAbGroup(2, [6])),
            ("Z_2", Z2),
            ("Z+Z/2", FgAbGroup(1, [2])),
            ("Z/2^3", FgAbGroup(0, [2, 2, 2])),
        ],
    )
    def test_parse(self, text, expected) -> None:
        assert FgAbGroup.parse(text) == expected

    def test_parse_invalid(self) -> None:
        with pytest.raises(ValueError) as excinfo:
            FgAbGroup.parse("Q")
        assert "Invalid group term" in str(excinfo.value)

    @pytest.mark.parametrize("text", ["0", "Z", "Z^3 + Z/2 + Z/4", "Z/12"])
    def test_str_parses_back(self, text) -> None:
        assert str(FgAbGroup.parse(text)) == text

    def test_negative_rank(self) -> None:
        with pytest.raises(ValueError):
            FgAbGroup(-1)

    def test_power(self) -> None:
        assert str(Z2.power(3)) == "Z/2 + Z/2 + Z/2"
        assert Z6.power(0).is_trivial()
        assert FgAbGroup.parse("Z+Z/2").power(2) == FgAbGroup(2, [2, 2])

    def test_direct_sum(self) -> None:
        assert Z2.direct_sum(FgAbGroup.cyclic(3)) == Z6

    def test_from_relations(self) -> None:
        g = FgAbGroup.from_relations(2, mx.int_matrix([[2, 0], [0, 3]]))
        assert g == Z6
        g = FgAbGroup.from_relations(3, mx.int_matrix([[2], [0], [0]]))
        assert g == FgAbGroup(2, [2])

    def test_hash_and_iso_check(self) -> None:
        assert hash(FgAbGroup(0, [2, 3])) == hash(Z6)
        assert iso_check(FgAbGroup(0, [3, 2]), Z6)
        assert not iso_check(Z, Z2)

    def test_orders(self) -> None:
        g = FgAbGroup(2, [2, 4])
        assert g.orders == (0, 0, 2, 4)
        assert g.ngens == 4
        assert g.reduce([5, -1, 3, 9]) == [5, -1, 1, 1]


class TestGroupHom:
    def test_shape_mismatch(self) -> None:
        with pytest.raises(ShapeMismatch):
            GroupHom(Z, Z, mx.zeros(2, 1))

    def test_torsion_not_respected(self) -> None:
        with pytest.raises(ValueError) as excinfo:
            GroupHom(Z2, Z, mx.int_matrix([[1]]))
        assert "torsion" in str(excinfo.value)

    def test_call_reduces(self) -> None:
        h = GroupHom(Z2, FgAbGroup.cyclic(4), mx.int_matrix([[2]]))
        assert h([1]) == [2]
        assert h([2]) == [0]

    def test_compose(self) -> None:
        f = GroupHom(Z, Z, mx.int_matrix([[2]]))
        g = GroupHom(Z, Z6, mx.int_matrix([[1]]))
        np.testing.assert_array_equal((g @ f).matrix, [[2]])
        with pytest.raises(NonComposable):
            f @ g

    @pytest.mark.parametrize(
        "source,target,matrix,kernel,image,cokernel",
        [
            (Z, Z, [[2]], "0", "Z", "Z/2"),
            (Z6, Z6, [[2]], "Z/2", "Z/3", "Z/2"),
            (Z, Z2, [[1]], "Z", "Z/2", "0"),
            (Z, Z, [[0]], "Z", "0", "Z"),
        ],
    )
    def test_kernel_image_cokernel(self, source, target, matrix, kernel, image, cokernel) -> None:
        h = GroupHom(source, target, mx.int_matrix(matrix))
        assert str(h.kernel()) == kernel
        assert str(h.image()) == image
        assert str(h.cokernel()) == cokernel

    def test_isomorphism(self) -> None:
        assert GroupHom(Z, Z, mx.int_matrix([[-1]])).is_isomorphism()
        assert not GroupHom(Z, Z, mx.int_matrix([[3]])).is_isomorphism()
        assert GroupHom(Z6, Z6, mx.int_matrix([[5]])).is_isomorphism()

    def test_equality(self) -> None:
        a = GroupHom(Z6, Z6, mx.int_matrix([[7]]))
        b = GroupHom(Z6, Z6, mx.int_matrix([[1]]))
        assert a == b
        assert a == GroupHom.identity(Z6)
        assert GroupHom.zero(Z, Z2).is_zero()


class TestSequences:
    def test_exact_short_sequence(self) -> None:
        f = GroupHom(Z, Z, mx.int_matrix([[2]]))
        g = GroupHom(Z, Z2, mx.int_matrix([[1]]))
        h = GroupHom.zero(Z2, FgAbGroup.trivial())
        assert check_exact([f, g, h]) == []

    def test_not_exact(self) -> None:
        zero = GroupHom.zero(Z, Z)
        failures = check_exact([zero, zero])
        assert len(failures) == 1
        assert failures[0].slot == 1
        assert failures[0].reason == "ker/im = Z"

    def test_order_two_failure(self) -> None:
        one = GroupHom.identity(Z)
        failures = check_order_two([one, one])
        assert [f.slot for f in failures] == [1]
        assert failures[0].incoming == [[1]]

    def test_endpoints_must_match(self) -> None:
        with pytest.raises(NonComposable):
            check_order_two([GroupHom.identity(Z), GroupHom.identity(Z2)])


class TestHomologyFromBoundaries:
    # chain complex Z --2--> Z, the cellular complex of the projective plane in low degrees
    @pytest.mark.parametrize(
        "coefficients,h0,h1",
        [
            ("Z", "Z/2", "0"),
            ("Z/2", "Z/2", "Z/2"),
            ("Z/3", "0", "0"),
            ("Z/4", "Z/2", "Z/2"),
            ("Z+Z/2", "Z/2 + Z/2", "Z/2"),
        ],
    )
    def test_universal_coefficients(self, coefficients, h0, h1) -> None:
        G = FgAbGroup.parse(coefficients)
        d = mx.int_matrix([[2]])
        assert str(homology_from_boundaries(d, mx.zeros(0, 1), G)) == h0
        assert str(homology_from_boundaries(mx.zeros(1, 0), d, G)) == h1

    def test_nonzero_composite(self) -> None:
        d = mx.int_matrix([[1]])
        with pytest.raises(NonComposable):
            homology_from_boundaries(d, d, Z)


class TestFiniteChainLimit:
    def test_stabilized(self) -> None:
        one = GroupHom.identity(Z)
        report = finite_chain_limit([Z, Z, Z], [one, one], "inverse", 2)
        assert report.limit_group == Z
        assert report.stabilized
        assert report.stable_window == 2
        assert report.describe() == "Z (stabilized)"

    def test_not_stabilized(self) -> None:
        two = GroupHom(Z, Z, mx.int_matrix([[2]]))
        one = GroupHom.identity(Z)
        report = finite_chain_limit([Z, Z, Z], [one, two], "direct", 1)
        assert not report.stabilized
        assert report.stable_window == 0
        assert report.describe() == "Z (not stabilized)"

    def test_window_longer_than_chain(self) -> None:
        one = GroupHom.identity(Z)
        report = finite_chain_limit([Z, Z, Z], [one, one], "inverse", 3)
        assert report.stable_window == 2
        assert not report.stabilized

    def test_wrong_direction(self) -> None:
        Z2_free = FgAbGroup.integers(2)
        h = GroupHom.zero(Z2_free, Z)
        with pytest.raises(ShapeMismatch):
            finite_chain_limit([Z, Z2_free], [h], "direct", 1)
        finite_chain_limit([Z, Z2_free], [h], "inverse", 1)

    @pytest.mark.parametrize("window", [0, -1])
    def test_invalid_window(self, window) -> None:
        with pytest.raises(ValueError):
            finite_chain_limit([Z], [], "inverse", window)

    def test_single_stage(self) -> None:
        report = finite_chain_limit([Z2], [], "direct", 1)
        assert report.limit_group == Z2
        assert report.stable_window == 0
        assert not report.stabilized
