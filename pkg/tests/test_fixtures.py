import pytest
from fcechlib.abelian import FgAbGroup
from fcechlib.cech import CoverSystem
from fcechlib.fixtures import FIXTURES, fixture_names, get_fixture
from fcechlib.simplicial import SimplicialPair, cohomology, homology

Z = FgAbGroup.integers()


class TestFixtures:
    def test_names(self) -> None:
        names = fixture_names()
        assert len(names) >= 6
        for name in ["point", "interval", "circle", "interval_pair", "finite_wedge"]:
            assert name in names

    def test_unknown(self) -> None:
        with pytest.raises(KeyError) as excinfo:
            get_fixture("torus")
        assert "Unknown fixture" in str(excinfo.value)

    @pytest.mark.parametrize("name", [n for n, fx in FIXTURES.items() if fx.kind == "cover_system"])
    def test_build(self, name) -> None:
        fx = get_fixture(name)
        sys = fx.build()
        assert isinstance(sys, CoverSystem)
        assert sys.depth == fx.depth
        assert sys.name == name
        assert fx.build(2).depth == 2

    @pytest.mark.parametrize("name", [n for n, fx in FIXTURES.items() if fx.kind == "cover_system"])
    def test_finest_nerve_matches_table(self, name) -> None:
        fx = get_fixture(name)
        pair = fx.complex()
        for n in range(3):
            assert homology(pair, Z, n) == fx.expected(Z, n, "homology")
            assert cohomology(pair, Z, n) == fx.expected(Z, n, "cohomology")

    def test_expected_power(self) -> None:
        fx = get_fixture("finite_wedge")
        g = FgAbGroup.parse("Z+Z/2")
        assert fx.expected(g, 1, "homology") == g.power(2)
        assert fx.expected(g, 2, "cohomology").is_trivial()

    def test_complex_fixture(self) -> None:
        fx = get_fixture("projective_plane")
        assert fx.kind == "complex"
        assert isinstance(fx.complex(), SimplicialPair)
        assert fx.expected(Z, 1, "homology") == FgAbGroup.cyclic(2)
        assert fx.expected(Z, 1, "cohomology").is_trivial()
        with pytest.raises(ValueError):
            fx.build()
        with pytest.raises(ValueError):
            fx.expected(FgAbGroup.cyclic(2), 1, "homology")

    def test_table(self) -> None:
        assert get_fixture("finite_wedge").table()["homology"] == {0: "G", 1: "G^2"}
        assert get_fixture("interval_pair").table()["cohomology"] == {1: "G"}
        assert get_fixture("projective_plane").table()["cohomology"] == {0: "Z", 2: "Z/2"}

    @pytest.mark.parametrize(
        "name,eta", [("point", 0), ("circle", 1), ("finite_wedge", 1), ("projective_plane", 2)]
    )
    def test_eta(self, name, eta) -> None:
        assert get_fixture(name).eta(Z) == eta

    @pytest.mark.parametrize(
        "coefficients,eta",
        [(Z, 2), (FgAbGroup.cyclic(2), 2), (FgAbGroup.cyclic(3), 0), (FgAbGroup.cyclic(6), 2)],
    )
    def test_eta_depends_on_coefficients(self, coefficients, eta) -> None:
        assert get_fixture("projective_plane").eta(coefficients) == eta

    @pytest.mark.parametrize("name", fixture_names())
    @pytest.mark.parametrize("order", [0, 2, 3, 6])
    def test_eta_matches_complex(self, name, order) -> None:
        coefficients = Z if order == 0 else FgAbGroup.cyclic(order)
        k = get_fixture(name).complex().total
        degrees = [n for n in range(k.dimension + 1) if not cohomology(k, coefficients, n).is_trivial()]
        assert get_fixture(name).eta(coefficients) == max(degrees)

    def test_eta_trivial_coefficients(self) -> None:
        with pytest.raises(ValueError):
            get_fixture("circle").eta(FgAbGroup.trivial())

    def test_inner(self) -> None:
        fx = get_fixture("interval_triple")
        sys = fx.build()
        assert sys.space.contains(sys.space.sub, fx.inner)


def euler_from_cells(pair: SimplicialPair) -> int:
    top = pair.total.dimension
    return sum((-1) ** n * (pair.total.count(n) - pair.sub.count(n)) for n in range(top + 1))


def euler_from_homology(pair: SimplicialPair, coefficients: FgAbGroup) -> int:
    # free rank over Z, dimension over the field Z/2
    total = 0
    for n in range(pair.total.dimension + 1):
        h = homology(pair, coefficients, n)
        total += (-1) ** n * (h.free_rank if coefficients == Z else h.ngens)
    return total


class TestEulerCharacteristic:
    @pytest.mark.parametrize("name", fixture_names())
    @pytest.mark.parametrize("coefficients", [Z, FgAbGroup.cyclic(2)])
    def test_fixture_complexes(self, name, coefficients) -> None:
        fx = get_fixture(name)
        for pair in (fx.complex(), fx.reference_pair()):
            assert euler_from_homology(pair, coefficients) == euler_from_cells(pair)
            absolute = SimplicialPair(pair.total)
            assert euler_from_homology(absolute, coefficients) == euler_from_cells(absolute)

    @pytest.mark.parametrize("name,chi", [("circle", 0), ("point", 1), ("finite_wedge", -1)])
    def test_known_values(self, name, chi) -> None:
        assert euler_from_cells(get_fixture(name).complex()) == chi
