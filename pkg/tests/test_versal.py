import pytest

from config import E6_MAX_ORDER
from exceptions import DomainError, ResourceError, UnsupportedError, UsageError
from versal import (
    EXACT_ISOLATED, EXACT_REGULAR, KrullReport, check_relations, cyclic_link_order, first_order_table,
    krull_dimension, lifting_relations, matrices_disjoint, minimum_hitting_set, normal_form, p_series,
    verify_normal_form_relations, versal_ideal, versal_variables,
)

SMALL_CONE_ORDERS = [
    pytest.param(n, order, marks=pytest.mark.slow) if n == 5 and order > 5 else (n, order)
    for n in (3, 4, 5)
    for order in range(1, 11)
]


class TestPowerSeries:
    def test_first_coefficients(self):
        assert p_series(3).coefficients == (-1, 1, -4, 22)

    def test_solves_functional_equation(self):
        assert not p_series(6).residual()

    def test_negative_order(self):
        with pytest.raises(UsageError):
            p_series(-1)


class TestNormalForms:
    @pytest.mark.parametrize("n,count", [(3, 1), (4, 2), (5, 5), (6, 9)])
    def test_equation_counts(self, n, count):
        assert len(normal_form(n, 2).equations) == count

    @pytest.mark.parametrize("n", [3, 4, 5, 6])
    def test_specializes_to_stanley_reisner_ideal(self, n):
        assert normal_form(n, 2).specializes_to_stanley_reisner()

    def test_first_order_hexagon(self):
        form = normal_form(6, 2, max_superscript=1)
        g = form.space.plain_gens
        assert form.equation(1, 3).plain() == g["y1"] * g["y3"] + g["t2_1"] * g["y2"]
        assert form.equation(1, 4).plain() == g["y1"] * g["y4"] - g["t2_1"] * g["t3_1"]

    def test_hexagon_base_relations(self):
        form = normal_form(6, 2)
        assert len(form.base_relations) == 3
        assert form.space.parameters[:6] == ("t1_1", "t3_1", "t5_1", "t4_1", "t6_1", "t2_1")

    def test_to_dict(self):
        data = normal_form(4, 2).to_dict()
        assert data["n"] == 4
        assert [e["lifts"] for e in data["equations"]] == [[1, 3], [2, 4]]
        assert data["parameters"][:2] == ["u", "v"]

    @pytest.mark.parametrize("n", [2, 7])
    def test_unsupported_sizes(self, n):
        with pytest.raises(UnsupportedError):
            normal_form(n)

    def test_order_must_be_positive(self):
        with pytest.raises(UsageError):
            normal_form(4, 0)


class TestRelationVerification:
    @pytest.mark.parametrize("n,order", SMALL_CONE_ORDERS)
    def test_small_cones_lift(self, n, order):
        report = verify_normal_form_relations(n, order, workers=1)
        assert report.passed
        assert not report.failures()

    def test_pentagon_relation_count(self):
        form = normal_form(5, 2)
        assert len(lifting_relations(form)) == 5

    def test_flipped_sign_is_caught(self):
        form = normal_form(5, 3)
        mutated = lifting_relations(form)[0].with_flipped_sign(0)
        report = check_relations(form, [mutated], workers=1)
        assert not report.passed
        assert report.failures()[0].residual_terms > 0

    def test_report_to_dict(self):
        data = verify_normal_form_relations(4, 2, workers=1).to_dict()
        assert data["passed"] and data["specializes"]
        assert data["relations"][0]["name"] == "koszul"

    def test_hexagon_order_budget(self):
        with pytest.raises(ResourceError):
            verify_normal_form_relations(6, E6_MAX_ORDER + 1)

    @pytest.mark.slow
    def test_hexagon_lifts_to_order_four(self):
        report = verify_normal_form_relations(6, 4)
        assert len(report.checks) == 18
        assert report.passed


class TestVersalVariables:
    def test_link_order_starts_at_smallest_label(self, named):
        assert cyclic_link_order(named("suspension:cycle:6"), 0) == [1, 2, 3, 4, 5, 6]

    @pytest.mark.parametrize("name,count", [
        ("octahedron", 24),
        ("boundary-simplex:3", 22),
        ("suspension:cycle:6", 30),
        ("torus:7", 21),
        ("icosahedron", 30),
    ])
    def test_counts_match_degree_zero_deformations(self, named, name, count):
        assert len(versal_variables(named(name))) == count

    def test_valency_four_aliases(self, named):
        K = named("octahedron")
        registry = versal_variables(K)
        assert len(registry.aliases) == 2 * len(K.support)
        for alias, canonical in registry.aliases.items():
            assert alias in registry
            assert registry.resolve(alias) == canonical

    def test_unknown_variable(self, named):
        with pytest.raises(UsageError):
            versal_variables(named("octahedron")).resolve("t_0_5")

    def test_valency_above_six(self, named):
        with pytest.raises(UnsupportedError):
            versal_variables(named("suspension:cycle:7"))

    def test_requires_surface(self, named):
        with pytest.raises(DomainError):
            versal_variables(named("cyclic4:8"))


class TestVersalIdeal:
    def test_suspended_hexagon(self, named):
        V = versal_ideal(named("suspension:cycle:6"))
        assert len(V.generators) == 6
        assert V.matrices[0] == (("t_0_1", "t_0_3", "t_0_5"), ("t_0_4", "t_0_6", "t_0_2"))
        assert V.matrices[7] == (("t_1_7", "t_3_7", "t_5_7"), ("t_4_7", "t_6_7", "t_2_7"))
        assert V.exactness == EXACT_ISOLATED and V.exact
        assert matrices_disjoint(V)

    def test_torus(self, named):
        V = versal_ideal(named("torus:7"))
        assert len(V.matrices) == 7
        assert len(V.generators) == 21
        assert V.exactness == EXACT_REGULAR
        assert not matrices_disjoint(V)

    def test_icosahedron_has_no_minors(self, named):
        V = versal_ideal(named("icosahedron"))
        assert not V.generators
        assert V.exactness == EXACT_ISOLATED

    def test_to_dict(self, named):
        data = versal_ideal(named("suspension:cycle:6")).to_dict()
        assert data["n_variables"] == 30
        assert data["n_minors"] == 6
        assert data["exact"] is True


class TestFirstOrderTable:
    def test_valency_three_vertices(self, named):
        table = first_order_table(named("boundary-simplex:3"))
        row = table.for_vertex(0)
        assert row["t^(-1)"] == "v_0"
        assert row["t_1^(0)"] == "v_0_1"
        assert row["t_1^(1)"] == "t_0_1"
        assert row["t_1^(2)"] == "v_1_0"
        assert row["t_1^(3)"] == "v_1"

    def test_torus_rows_are_edges(self, named):
        table = first_order_table(named("torus:7"))
        for i, row in table.assignments.items():
            assert len(row) == 6
            for key, value in row.items():
                assert key.endswith("^(1)")
                j = int(key[2:key.index("^")])
                assert value == f"t_{min(i, j)}_{max(i, j)}"

    def test_dataframe(self, named):
        frame = first_order_table(named("octahedron")).to_dataframe()
        assert list(frame.columns) == ["vertex", "parameter", "variable"]
        assert set(frame["vertex"]) == set(range(6))


class TestKrullDimension:
    def test_zero_ideal(self, named):
        report = krull_dimension(versal_ideal(named("icosahedron")))
        assert report.dimension == 30
        assert report.method == "zero-ideal"
        assert report.consistent

    def test_disjoint_matrices(self, named):
        report = krull_dimension(versal_ideal(named("suspension:cycle:6")))
        assert report.dimension == 26
        assert report.method == "disjoint-matrices"
        assert report.coordinate_bound <= 26
        assert report.consistent

    def test_forced_groebner_agrees(self, named):
        report = krull_dimension(versal_ideal(named("suspension:cycle:6")), method="groebner")
        assert report.dimension == 26
        assert report.method == "groebner"
        assert report.basis_size >= 6

    def test_unknown_method(self, named):
        with pytest.raises(UsageError):
            krull_dimension(versal_ideal(named("icosahedron")), method="hilbert")

    def test_inconsistent_report(self):
        report = KrullReport(3, "groebner", 10, 2, coordinate_bound=5, tangent_dimensions=[6])
        assert not report.consistent
        assert report.to_dict()["consistent"] is False

    @pytest.mark.slow
    def test_torus_by_groebner(self, named):
        report = krull_dimension(versal_ideal(named("torus:7")))
        assert report.method == "groebner"
        assert report.consistent


class TestHittingSets:
    def test_path_of_pairs(self):
        family = [frozenset({0, 1}), frozenset({1, 2}), frozenset({2, 3})]
        best = minimum_hitting_set(family)
        assert len(best) == 2
        assert all(best & s for s in family)

    def test_supersets_are_ignored(self):
        assert minimum_hitting_set([frozenset({4}), frozenset({1, 4})]) == frozenset({4})

    def test_empty_family(self):
        assert minimum_hitting_set([]) == frozenset()

    def test_empty_support(self):
        with pytest.raises(UsageError):
            minimum_hitting_set([frozenset()])
