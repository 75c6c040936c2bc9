import itertools
import random

import numpy as np
import pytest
from fcechlib import _matrix as mx
from fcechlib.abelian import FgAbGroup, check_exact, check_order_two
from fcechlib.errors import NotPairMap, NotSimplicial
from fcechlib.simplicial import (
    Complex,
    SimplicialMap,
    SimplicialPair,
    boundary_matrix,
    check_chain_complex,
    cohomology,
    compose,
    connecting_delta,
    contiguous,
    homology,
    hollow_polygon,
    induced,
    oriented,
    ordered_cohomology,
    ordered_homology,
    pair_long_sequence,
    pair_sequence_labels,
    path,
    permutation_sign,
    projective_plane,
    relative_chain_complex,
    simplex_boundary,
    vertex_key,
    wedge_of_triangles,
)

Z = FgAbGroup.integers()
Z2 = FgAbGroup.cyclic(2)
Z3 = FgAbGroup.cyclic(3)
Z6 = FgAbGroup.cyclic(6)

COEFFICIENTS = [Z, Z2, Z6, FgAbGroup.parse("Z+Z/2")]


def edge_pair() -> SimplicialPair:
    return SimplicialPair(Complex.generated_by([(0, 1)]), Complex([(0,), (1,)]))


class TestOrientation:
    def test_vertex_key_order(self) -> None:
        vertices = ["b", 3, "a", (1, 2), 0]
        assert sorted(vertices, key=vertex_key) == [0, 3, "a", "b", (1, 2)]

    @pytest.mark.parametrize(
        "seq,sign",
        [
            ((0, 1, 2), 1),
            ((1, 0, 2), -1),
            ((2, 0, 1), 1),
            ((2, 1, 0), -1),
        ],
    )
    def test_permutation_sign(self, seq, sign) -> None:
        assert permutation_sign(seq) == sign

    def test_oriented_drops_repeats(self) -> None:
        assert oriented([2, 0, 2, 1]) == (0, 1, 2)


class TestComplex:
    def test_missing_face(self) -> None:
        with pytest.raises(NotSimplicial) as excinfo:
            Complex([(0,), (1,), (0, 1, 2)])
        assert "missing" in str(excinfo.value)

    def test_generated_by(self) -> None:
        k = Complex.generated_by([(2, 0, 1)])
        assert len(k) == 7
        assert k.dimension == 2
        assert k.vertices == (0, 1, 2)
        assert (1, 0) in k
        assert k.basis(1) == [(0, 1), (0, 2), (1, 2)]

    def test_empty(self) -> None:
        k = Complex()
        assert k.is_empty()
        assert k.dimension == -1

    def test_restricted(self) -> None:
        k = projective_plane().restricted([0, 1, 2])
        assert k == Complex.generated_by([(0, 1, 2)])

    def test_pair_requires_subcomplex(self) -> None:
        with pytest.raises(NotSimplicial):
            SimplicialPair(path(2), Complex([(5,)]))

    @pytest.mark.parametrize(
        "k",
        [hollow_polygon(5), projective_plane(), simplex_boundary(3), wedge_of_triangles()],
    )
    def test_boundary_squares_to_zero(self, k) -> None:
        assert check_chain_complex(k)
        for n in range(1, k.dimension):
            assert mx.is_zero(mx.matmul(boundary_matrix(k, n), boundary_matrix(k, n + 1)))

    def test_boundary_signs(self) -> None:
        k = Complex.generated_by([(0, 1, 2)])
        np.testing.assert_array_equal(boundary_matrix(k, 2), [[1], [-1], [1]])
        np.testing.assert_array_equal(boundary_matrix(k, 1), [[-1, -1, 0], [1, 0, -1], [0, 1, 1]])

    def test_relative_bases(self) -> None:
        rep = relative_chain_complex(edge_pair())
        assert rep.bases[0] == []
        assert rep.bases[1] == [(0, 1)]


class TestHomology:
    @pytest.mark.parametrize("G", COEFFICIENTS)
    def test_hollow_triangle(self, G) -> None:
        k = hollow_polygon(3)
        assert homology(k, G, 0) == G
        assert homology(k, G, 1) == G
        assert homology(k, G, 2).is_trivial()
        assert cohomology(k, G, 1) == G

    def test_projective_plane_integral(self) -> None:
        k = projective_plane()
        assert str(homology(k, Z, 0)) == "Z"
        assert str(homology(k, Z, 1)) == "Z/2"
        assert str(homology(k, Z, 2)) == "0"
        assert str(cohomology(k, Z, 0)) == "Z"
        assert str(cohomology(k, Z, 1)) == "0"
        assert str(cohomology(k, Z, 2)) == "Z/2"

    @pytest.mark.parametrize(
        "G,h",
        [
            (Z2, ["Z/2", "Z/2", "Z/2"]),
            (Z3, ["Z/3", "0", "0"]),
            (Z6, ["Z/6", "Z/2", "Z/2"]),
        ],
    )
    def test_projective_plane_coefficients(self, G, h) -> None:
        k = projective_plane()
        assert [str(homology(k, G, n)) for n in range(3)] == h
        assert [str(cohomology(k, G, n)) for n in range(3)] == h

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_spheres(self, d) -> None:
        k = simplex_boundary(d)
        for n in range(d + 1):
            expected = Z.power(1 if n in (0, d - 1) else 0)
            if d == 1:
                expected = Z.power(2 if n == 0 else 0)
            assert homology(k, Z, n) == expected

    def test_wedge(self) -> None:
        k = wedge_of_triangles()
        assert str(homology(k, Z, 1)) == "Z^2"
        assert str(cohomology(k, Z6, 1)) == "Z/6 + Z/6"

    @pytest.mark.parametrize("G", COEFFICIENTS)
    def test_relative_edge(self, G) -> None:
        p = edge_pair()
        assert homology(p, G, 0).is_trivial()
        assert homology(p, G, 1) == G
        assert cohomology(p, G, 1) == G

    def test_negative_degree(self) -> None:
        assert homology(path(3), Z, -1).is_trivial()


class TestOrderedReference:
    @pytest.mark.parametrize(
        "k",
        [
            hollow_polygon(3),
            path(3),
            Complex.generated_by([(0, 1)]),
            Complex([(0,), (1,)]),
        ],
    )
    @pytest.mark.parametrize("G", [Z, Z2, Z6])
    def test_matches_oriented(self, k, G) -> None:
        for n in range(k.dimension + 1):
            assert ordered_homology(k, G, n) == homology(k, G, n)
            assert ordered_cohomology(k, G, n) == cohomology(k, G, n)

    def test_matches_oriented_relative(self) -> None:
        p = edge_pair()
        for n in range(2):
            assert ordered_homology(p, Z, n) == homology(p, Z, n)
            assert ordered_cohomology(p, Z2, n) == cohomology(p, Z2, n)

    def test_size_limit(self) -> None:
        with pytest.raises(ValueError) as excinfo:
            ordered_homology(projective_plane(), Z, 1)
        assert "limited" in str(excinfo.value)

    def test_custom_limit(self) -> None:
        k = hollow_polygon(4)
        assert ordered_homology(k, Z, 1, limit=8) == Z


class TestSimplicialMap:
    def test_not_simplicial(self) -> None:
        with pytest.raises(NotSimplicial):
            SimplicialMap(path(3), Complex([(0,), (1,), (2,)]), {0: 0, 1: 1, 2: 2})

    def test_unmapped_vertex(self) -> None:
        with pytest.raises(NotSimplicial):
            SimplicialMap(path(2), path(2), {0: 0})

    def test_chain_matrix_signs(self) -> None:
        k = hollow_polygon(3)
        flip = SimplicialMap(k, k, {0: 1, 1: 0, 2: 2})
        m = flip.chain_matrix(1)
        # (0,1) -> (1,0) = -(0,1); (0,2) -> (1,2); (1,2) -> (0,2)
        np.testing.assert_array_equal(m, [[-1, 0, 0], [0, 0, 1], [0, 1, 0]])

    def test_degenerate_images_vanish(self) -> None:
        f = SimplicialMap(path(2), Complex([(0,)]), {0: 0, 1: 0})
        assert mx.is_zero(f.chain_matrix(1)) and f.chain_matrix(1).shape == (0, 1)

    def test_reflection_degree(self) -> None:
        k = hollow_polygon(3)
        flip = SimplicialMap(k, k, {0: 1, 1: 0, 2: 2})
        np.testing.assert_array_equal(induced(flip, Z, 1).matrix, [[-1]])
        np.testing.assert_array_equal(induced(flip, Z, 0).matrix, [[1]])

    def test_rotation_degree(self) -> None:
        k = hollow_polygon(3)
        rot = SimplicialMap(k, k, {0: 1, 1: 2, 2: 0})
        assert induced(rot, Z, 1).is_isomorphism()
        np.testing.assert_array_equal(induced(rot, Z, 1).matrix, [[1]])

    def test_winding_map(self) -> None:
        # hexagon wraps twice around the triangle
        f = SimplicialMap(hollow_polygon(6), hollow_polygon(3), {k: k % 3 for k in range(6)})
        assert abs(int(induced(f, Z, 1).matrix[0, 0])) == 2
        assert induced(f, Z2, 1).is_zero()

    def test_identity_and_composition(self) -> None:
        k = projective_plane()
        one = SimplicialMap.identity(k)
        assert induced(one, Z, 1) == induced(compose(one, one), Z, 1)
        for G in (Z, Z2):
            for n in range(3):
                assert induced(one, G, n) == type(induced(one, G, n)).identity(homology(k, G, n))

    @pytest.mark.parametrize("seed", range(5))
    def test_functoriality(self, seed) -> None:
        rng = random.Random(seed)
        k = hollow_polygon(6)
        shift_a, shift_b = rng.randrange(6), rng.randrange(6)
        f = SimplicialMap(k, k, {v: (v + shift_a) % 6 for v in range(6)})
        g = SimplicialMap(k, k, {v: (v + shift_b) % 6 for v in range(6)})
        for variance in ("homology", "cohomology"):
            gf = induced(compose(g, f), Z6, 1, variance)
            if variance == "homology":
                assert gf == induced(g, Z6, 1, variance) @ induced(f, Z6, 1, variance)
            else:
                assert gf == induced(f, Z6, 1, variance) @ induced(g, Z6, 1, variance)

    def test_not_pair_map(self) -> None:
        total = Complex.generated_by([(0, 1)])
        source = SimplicialPair(total, Complex([(0,)]))
        target = SimplicialPair(total, Complex([(1,)]))
        f = SimplicialMap(source, target, {0: 0, 1: 1})
        assert not f.is_pair_map()
        with pytest.raises(NotPairMap):
            induced(f, Z, 0)

    def test_contiguous_maps_agree(self) -> None:
        k = Complex.generated_by([(0, 1, 2)])
        f = SimplicialMap(path(2), k, {0: 0, 1: 1})
        g = SimplicialMap(path(2), k, {0: 0, 1: 2})
        assert contiguous(f, g)
        for n in range(2):
            assert induced(f, Z, n) == induced(g, Z, n)

    def test_not_contiguous(self) -> None:
        k = hollow_polygon(3)
        f = SimplicialMap(path(2), k, {0: 0, 1: 0})
        g = SimplicialMap(path(2), k, {0: 1, 1: 2})
        assert not contiguous(f, g)


class TestConnectingMap:
    def test_edge_pair(self) -> None:
        d = connecting_delta(edge_pair(), Z, 1, "homology")
        assert str(d.source) == "Z"
        assert str(d.target) == "Z^2"
        np.testing.assert_array_equal(d.matrix, [[-1], [1]])

    def test_edge_pair_cohomology(self) -> None:
        delta = connecting_delta(edge_pair(), Z, 1, "cohomology")
        assert str(delta.source) == "Z^2"
        assert str(delta.target) == "Z"
        np.testing.assert_array_equal(delta.matrix, [[-1, 1]])

    def test_degree_zero(self) -> None:
        assert connecting_delta(edge_pair(), Z, 0, "homology").target.is_trivial()

    def test_invalid_variance(self) -> None:
        with pytest.raises(ValueError):
            connecting_delta(edge_pair(), Z, 1, "bogus")  # type: ignore


def disk_with_boundary() -> SimplicialPair:
    return SimplicialPair(Complex.generated_by([(0, 1, 2)]), hollow_polygon(3))


class TestPairSequence:
    def test_labels(self) -> None:
        assert pair_sequence_labels(0, 1, "homology") == [
            "d_2", "i_1", "j_1", "d_1", "i_0", "j_0", "d_0",
        ]  # fmt: skip
        assert pair_sequence_labels(0, 0, "cohomology") == ["delta^0", "j^0", "i^0", "delta^1"]

    @pytest.mark.parametrize(
        "p",
        [edge_pair(), disk_with_boundary(), SimplicialPair(projective_plane(), path(3))],
    )
    @pytest.mark.parametrize("G", [Z, Z2, Z6])
    @pytest.mark.parametrize("variance", ["homology", "cohomology"])
    def test_exact(self, p, G, variance) -> None:
        seq = pair_long_sequence(p, G, (0, 2), variance)
        assert len(seq) == len(pair_sequence_labels(0, 2, variance))
        assert check_order_two(seq) == []
        assert check_exact(seq) == []

    def test_invalid_range(self) -> None:
        with pytest.raises(ValueError):
            pair_long_sequence(edge_pair(), Z, (2, 1))

    def test_boundary_of_disk(self) -> None:
        d = connecting_delta(disk_with_boundary(), Z, 2, "homology")
        assert d.is_isomorphism()


class TestContiguityRandom:
    # nerve-level contiguity: two vertex maps into a full simplex are always contiguous
    @pytest.mark.parametrize("seed", range(10))
    def test_maps_into_simplex(self, seed) -> None:
        rng = random.Random(seed)
        target = Complex.generated_by([tuple(range(4))])
        source = hollow_polygon(5)
        f = SimplicialMap(source, target, {v: rng.randrange(4) for v in range(5)})
        g = SimplicialMap(source, target, {v: rng.randrange(4) for v in range(5)})
        assert contiguous(f, g)
        for n in range(2):
            assert induced(f, Z, n, "cohomology") == induced(g, Z, n, "cohomology")

    def test_all_vertex_maps_of_path(self) -> None:
        target = Complex.generated_by([(0, 1, 2)])
        maps = [
            SimplicialMap(path(2), target, {0: a, 1: b})
            for a, b in itertools.product(range(3), repeat=2)
        ]
        for f, g in itertools.combinations(maps, 2):
            assert contiguous(f, g)
