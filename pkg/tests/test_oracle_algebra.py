import itertools

import pytest

from complex_core import Multidegree, VertexSet
from config import ORACLE_MAX_A, ORACLE_MAX_B
from cotangent import degree_zero_totals, t_graded_dim
from exceptions import ResourceError, UsageError
from oracle_algebra import (
    GradedHomSpace, degree_zero_oracle, derivation_module_check, embedded_first_order_dim, graded_oracle,
    minimal_nonfaces, sample_membership, t1_oracle_dim, t2_oracle_dim,
)


def vs(*vertices):
    return VertexSet(vertices)


def degree(a, b):
    return Multidegree.create(a, b)


class TestPresentation:
    def test_triangle_boundary(self, named):
        assert minimal_nonfaces(named("boundary-simplex:2")).generators == (vs(0, 1, 2),)

    def test_square(self, named):
        assert minimal_nonfaces(named("cycle:4")).generators == (vs(0, 2), vs(1, 3))

    def test_hexagon_non_edges(self, named):
        generators = minimal_nonfaces(named("cycle:6")).generators
        assert len(generators) == 9
        assert all(len(p) == 2 for p in generators)

    @pytest.mark.parametrize("name", ["torus:7", "rp2:6", "cyclic4:8", "cone:cycle:5"])
    def test_membership_sampling(self, named, name):
        K = named(name)
        ok, message = sample_membership(minimal_nonfaces(K), K, samples=100)
        assert ok, message

    def test_membership_sampling_detects_wrong_ideal(self, named):
        K = named("cycle:4")
        wrong = minimal_nonfaces(named("cycle:5"))
        wrong = type(wrong)(wrong.generators, K.n_vertices)
        ok, _ = sample_membership(wrong, K, samples=200)
        assert not ok


class TestDerivations:
    @pytest.mark.parametrize("name", ["boundary-simplex:2", "cycle:5", "torus:7", "octahedron", "cyclic4:8"])
    def test_manifolds_are_generated_by_euler_derivations(self, named, name):
        assert derivation_module_check(named(name)).generated_by_euler

    def test_short_path(self, named):
        report = derivation_module_check(named("chain:2"))
        assert not report.generated_by_euler
        assert vs(0) in report.failing_faces

    def test_simplex(self, named):
        assert not derivation_module_check(named("simplex:2")).generated_by_euler

    def test_ideal_generators_of_a_cone_apex(self, named):
        report = derivation_module_check(named("cone:cycle:4"))
        assert report.ideal_generators[4] == [vs()]


class TestGradedOracle:
    def test_pentagon_vertex_direction(self, named):
        assert t1_oracle_dim(named("cycle:5"), degree({0: 2}, [1, 4])) == 1

    def test_icosahedron_link_pair(self, named):
        assert t1_oracle_dim(named("icosahedron"), degree({0: 1}, [1, 3])) == 0

    def test_cyclic4_obstruction(self, named):
        assert t2_oracle_dim(named("cyclic4:8"), degree({0: 3}, [1, 4, 7])) == 1

    def test_square_is_complete_intersection(self, named):
        K = named("cycle:4")
        for size in (1, 2):
            for b in itertools.combinations(range(4), size):
                assert t2_oracle_dim(K, degree({}, b)) == 0

    def test_hexagon_antipodes(self, named):
        assert t2_oracle_dim(named("cycle:6"), degree({}, [0, 3])) == 1

    def test_caps(self, named):
        with pytest.raises(ResourceError):
            t1_oracle_dim(named("cycle:7"), degree({}, [0, 1, 2, 3, 4]))
        with pytest.raises(ResourceError):
            t1_oracle_dim(named("cycle:7"), degree({0: 5}, [1]))

    def test_only_t1_and_t2(self, named):
        with pytest.raises(UsageError):
            graded_oracle(named("cycle:4"), 0, degree({}, [1, 3]))

    def test_degree_length_checked(self, named):
        K = named("cycle:4")
        with pytest.raises(UsageError):
            GradedHomSpace(minimal_nonfaces(K), K, [0, 0, 0])


def _oracle_degrees(K, max_b=ORACLE_MAX_B, max_a=ORACLE_MAX_A):
    """
    Faces a of K, and minimal non-faces where both sides vanish, against
    every b off a with |b| <= max_b; exponents on a are all one, plus one
    vector raised on its smallest vertex to total degree max_a
    """
    candidates = [vs()] + [f for f in K.nonempty_faces() if len(f) <= max_a]
    candidates += [p for p in K.minimal_nonfaces(K.support) if len(p) <= max_a]
    for a in candidates:
        exponents = [{v: 1 for v in a}]
        if a and len(a) < max_a:
            raised = dict(exponents[0])
            raised[min(a)] += max_a - len(a)
            exponents.append(raised)
        rest = [v for v in K.support if v not in a]
        for size in range(1, max_b + 1):
            for b in itertools.combinations(rest, size):
                for a_exponents in exponents:
                    yield a, VertexSet(b), degree(a_exponents, b)


AGREEMENT_CORPUS = ["cycle:4", "cycle:5", "chain:3", "simplex:3", "boundary-simplex:2", "boundary-simplex:3"] + [
    pytest.param(name, marks=pytest.mark.slow)
    for name in (
        "cycle:6", "cycle:7", "cycle:8", "octahedron", "cone:cycle:5", "torus:7", "rp2:6", "cyclic3:6",
        "cyclic3:7", "cyclic4:8", "suspension:cycle:3", "suspension:cycle:4", "suspension:cycle:5",
        "suspension:cycle:6",
    )
]


class TestOracleAgreement:
    @pytest.mark.parametrize("name", AGREEMENT_CORPUS)
    def test_topological_pieces_match_the_algebra(self, named, name):
        K = named(name)
        presentation = minimal_nonfaces(K)
        for a, b, c in _oracle_degrees(K):
            assert t_graded_dim(K, 1, a, b) == t1_oracle_dim(K, c, presentation), (a, b, c)
            assert t_graded_dim(K, 2, a, b) == t2_oracle_dim(K, c, presentation), (a, b, c)

    def test_degrees_stay_within_caps(self, named):
        K = named("octahedron")
        degrees = list(_oracle_degrees(K))
        assert max(len(c.b_set) for _, _, c in degrees) == ORACLE_MAX_B
        assert max(c.a_total for _, _, c in degrees) == ORACLE_MAX_A
        assert any(a not in K for a, _, _ in degrees)
        assert any(a in K and not b <= K.link(a).support for a, b, _ in degrees)

    @pytest.mark.parametrize("a,b", [((0, 5), (1,)), ((0, 5), (1, 3)), ((0,), (5,)), ((0,), (1, 5))])
    def test_vanishing_outside_the_complex(self, named, a, b):
        K = named("octahedron")
        c = degree({v: 1 for v in a}, b)
        for i in (1, 2):
            assert t_graded_dim(K, i, vs(*a), vs(*b)) == 0
            assert graded_oracle(K, i, c) == 0


class TestDegreeZeroOracle:
    def test_octahedron_bookkeeping(self, named):
        K = named("octahedron")
        oracle = degree_zero_oracle(K, workers=2)
        assert oracle.t1 == degree_zero_totals(K).t1_total
        assert oracle.hom == embedded_first_order_dim(K)
        assert oracle.hom == oracle.t1 + oracle.derivation_rank

    def test_tetrahedron(self, named):
        assert degree_zero_oracle(named("boundary-simplex:3")).t1 == 22

    def test_triangle_boundary_embedded(self, named):
        assert embedded_first_order_dim(named("boundary-simplex:2")) == 9

    def test_simplex_has_no_ideal(self, named):
        assert embedded_first_order_dim(named("simplex:3")) == 0
