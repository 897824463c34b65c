import pytest

from complex_core import SimplicialComplex, VertexSet
from cotangent import u_families
from exceptions import DomainError, UnsupportedError
from topology import (
    BettiVector, ChainComplex, UpClosedFamily, euler_characteristic_from_homology, homology_dims,
    is_orientable, local_cohomology_dim, order_chains, order_complex, pair_cohomology_dims,
    poincare_duality_holds, twisted_structure_sheaf_cohomology,
)

CORPUS = [
    "boundary-simplex:1", "boundary-simplex:2", "boundary-simplex:3", "boundary-simplex:4",
    "cycle:4", "cycle:7", "chain:3", "simplex:3", "cyclic3:6", "cyclic3:7", "cyclic4:8",
    "torus:7", "rp2:6", "octahedron", "icosahedron", "suspension:cycle:3", "suspension:cycle:4",
    "suspension:cycle:5", "suspension:cycle:6", "cone:cycle:5", "suspension:boundary-simplex:2",
]


class TestBettiVector:
    def test_out_of_range_is_zero(self):
        betti = BettiVector(-1, (0, 1))
        assert betti[0] == 1
        assert betti[5] == 0 and betti[-3] == 0
        assert list(betti.degrees()) == [-1, 0]


class TestHomology:
    def test_torus(self, named):
        betti = homology_dims(named("torus:7"), reduced=True)
        assert (betti[-1], betti[0], betti[1], betti[2]) == (0, 0, 2, 1)

    def test_void_complex(self):
        assert homology_dims(SimplicialComplex.void(), reduced=True)[-1] == 1

    def test_two_points(self, named):
        betti = homology_dims(named("boundary-simplex:1"), reduced=False)
        assert betti[0] == 2

    def test_rational_projective_plane_is_acyclic(self, named):
        betti = homology_dims(named("rp2:6"), reduced=True)
        assert all(betti[d] == 0 for d in betti.degrees())

    @pytest.mark.parametrize("name", CORPUS)
    def test_euler_characteristic_agrees(self, named, name):
        K = named(name)
        assert euler_characteristic_from_homology(K) == K.euler_characteristic()

    @pytest.mark.parametrize("name", ["torus:7", "cyclic4:8", "icosahedron"])
    def test_boundary_maps_square_to_zero(self, named, name):
        ChainComplex(named(name), reduced=True, verify=True).verify_boundary_squares()


class TestOrderComplex:
    @pytest.mark.parametrize("name", ["torus:7", "rp2:6", "octahedron", "cycle:5"])
    def test_barycentric_subdivision_keeps_homology(self, named, name):
        K = named(name)
        Y = UpClosedFamily.create(K, K.nonempty_faces())
        subdivision = order_complex(Y)
        assert subdivision.n_vertices == len(K.nonempty_faces())
        assert homology_dims(subdivision).dims == homology_dims(K).dims

    def test_family_with_empty_face_is_a_cone(self, named):
        K = named("cycle:5")
        Y = UpClosedFamily.create(K, K.faces)
        betti = homology_dims(order_complex(Y), reduced=True)
        assert all(betti[d] == 0 for d in betti.degrees())

    def test_empty_family(self, named):
        assert order_complex(UpClosedFamily.create(named("cycle:4"), [])).is_void

    def test_not_up_closed(self, named):
        with pytest.raises(DomainError):
            UpClosedFamily.create(named("cycle:4"), [VertexSet((0,))])


class TestPairCohomology:
    def test_square_diagonal(self, named):
        U, V = u_families(named("cycle:4"), VertexSet((1, 3)))
        assert VertexSet() in U and not V.members
        assert pair_cohomology_dims(U, V)[0] == 1

    def test_requires_nested_families(self, named):
        K = named("cycle:4")
        U, V = u_families(K, VertexSet((1, 3)))
        with pytest.raises(DomainError):
            pair_cohomology_dims(V, U)

    def test_relative_to_full_family_vanishes(self, named):
        K = named("octahedron")
        Y = UpClosedFamily.create(K, K.nonempty_faces())
        betti = pair_cohomology_dims(Y, Y)
        assert all(betti[d] == 0 for d in betti.degrees())

    def test_family_beyond_vertex_capacity(self, named):
        K = named("cycle:100")
        Y = UpClosedFamily.create(K, K.nonempty_faces())
        assert len(Y) == 200
        assert pair_cohomology_dims(Y, UpClosedFamily.create(K, [])).dims[:2] == (1, 1)
        assert pair_cohomology_dims(Y, UpClosedFamily.create(K, []), reduced=True)[1] == 1

    def test_large_pair(self, named):
        U, V = u_families(named("cycle:100"), VertexSet((0, 50)))
        assert len(U) > 128
        assert pair_cohomology_dims(U, V)[1] == 1


class TestOrderChains:
    def test_chains_of_an_edge(self, named):
        K = named("chain:1")
        members, chains = order_chains(UpClosedFamily.create(K, K.nonempty_faces()))
        assert members == [VertexSet((0,)), VertexSet((1,)), VertexSet((0, 1))]
        assert chains[-1] == [()]
        assert sorted(chains[0]) == [(0,), (1,), (2,)]
        assert sorted(chains[1]) == [(0, 2), (1, 2)]
        assert 2 not in chains

    def test_chains_match_order_complex(self, named):
        K = named("octahedron")
        Y = UpClosedFamily.create(K, K.nonempty_faces())
        _, chains = order_chains(Y)
        subdivision = order_complex(Y)
        for d in range(subdivision.dim + 1):
            assert len(chains[d]) == len(subdivision.faces_of_dim(d))

    def test_chain_complex_from_tuples(self):
        triangle = {-1: [()], 0: [(0,), (1,), (2,)], 1: [(0, 1), (0, 2), (1, 2)]}
        complex_ = ChainComplex.from_faces(triangle, reduced=True)
        assert complex_.homology_dims()[1] == 1
        assert complex_.homology_dims()[0] == 0


class TestManifoldHelpers:
    @pytest.mark.parametrize("name,expected", [
        ("torus:7", True), ("rp2:6", False), ("icosahedron", True), ("boundary-simplex:4", True),
    ])
    def test_orientability(self, named, name, expected):
        assert is_orientable(named(name)) is expected

    @pytest.mark.parametrize("name", ["torus:7", "octahedron", "boundary-simplex:4", "cyclic4:8"])
    def test_poincare_duality(self, named, name):
        assert poincare_duality_holds(named(name))


class TestLocalCohomology:
    def test_two_points(self, named):
        assert local_cohomology_dim(named("boundary-simplex:1"), 1, [-1, 0]) == 1

    def test_square_in_degree_zero(self, named):
        assert local_cohomology_dim(named("cycle:4"), 1, [0, 0, 0, 0]) == 0
        assert local_cohomology_dim(named("cycle:4"), 2, [0, 0, 0, 0]) == 1

    def test_positive_entries_vanish(self, named):
        assert local_cohomology_dim(named("cycle:4"), 1, [1, 0, 0, 0]) == 0

    def test_negative_support_must_be_a_face(self, named):
        assert local_cohomology_dim(named("cycle:4"), 2, [-1, 0, -1, 0]) == 0

    def test_wrong_length(self, named):
        with pytest.raises(DomainError):
            local_cohomology_dim(named("cycle:4"), 1, [0, 0])


class TestSheafCohomology:
    def test_untwisted_square(self, named):
        dims = twisted_structure_sheaf_cohomology(named("cycle:4"), 0)
        assert (dims[0], dims[1]) == (1, 1)

    def test_linear_forms(self, named):
        dims = twisted_structure_sheaf_cohomology(named("cycle:4"), 1)
        assert (dims[0], dims[1]) == (4, 0)

    def test_quadrics_on_triangle(self, named):
        assert twisted_structure_sheaf_cohomology(named("boundary-simplex:2"), 2)[0] == 6

    def test_negative_twist(self, named):
        with pytest.raises(UnsupportedError):
            twisted_structure_sheaf_cohomology(named("cycle:4"), -1)
