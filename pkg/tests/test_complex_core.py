import pytest

from complex_core import (
    Multidegree, SimplicialComplex, VertexSet, build_from_facets, cone, f_vector_and_counts, flip,
    is_closed_manifold, is_isomorphic, is_named_complex, is_sphere_low_dim, join, load_facet_file,
    named_complex, parse_facet_text, require_closed_manifold, stellar_subdivision, suspension,
    write_facet_text,
)
from exceptions import CapacityError, DomainError, ParseError, UnsupportedError, UsageError


def vs(*vertices):
    return VertexSet(vertices)


class TestVertexSet:
    def test_iteration_is_sorted(self):
        assert list(vs(5, 0, 3)) == [0, 3, 5]

    def test_set_operations(self):
        a, b = vs(0, 1, 2), vs(1, 2, 3)
        assert (a | b) == vs(0, 1, 2, 3)
        assert (a & b) == vs(1, 2)
        assert (a - b) == vs(0)
        assert vs(1, 2) <= a and not b <= a

    def test_subsets_include_empty_and_self(self):
        subsets = list(vs(0, 1, 2).subsets())
        assert len(subsets) == 8
        assert vs() in subsets and vs(0, 1, 2) in subsets

    def test_capacity_guard(self):
        VertexSet((127,))
        with pytest.raises(CapacityError):
            VertexSet((128,))

    def test_negative_label_rejected(self):
        with pytest.raises(DomainError):
            VertexSet((-1,))


class TestNormalization:
    def test_duplicates_and_nonmaximal_are_reported(self):
        K = SimplicialComplex([vs(0, 1, 2), vs(1, 2), vs(0, 1, 2), vs(2, 3)])
        assert set(K.facets) == {vs(0, 1, 2), vs(2, 3)}
        assert K.normalization.merged_duplicates == 1
        assert K.normalization.dropped_nonmaximal == [[1, 2]]

    def test_empty_input_gives_void_complex(self):
        K = SimplicialComplex([])
        assert K.is_void
        assert K.normalization.void
        assert K.dim == -1

    def test_void_and_empty_differ(self):
        assert SimplicialComplex.void().faces == frozenset({vs()})
        assert SimplicialComplex.empty().faces == frozenset()

    def test_build_from_facets_logs_dropped_faces(self, caplog):
        build_from_facets([[0, 1, 2], [1, 2]])
        assert any("non-maximal" in record.getMessage() for record in caplog.records)

    def test_faces_are_closed_under_subsets(self, named):
        K = named("torus:7")
        for face in K.faces:
            for v in face:
                assert face.remove(v) in K

    def test_ghost_vertices(self):
        K = SimplicialComplex([vs(0, 2)], n_vertices=4)
        assert K.ghost_vertices == [1, 3]

    def test_facet_outside_universe(self):
        with pytest.raises(DomainError):
            SimplicialComplex([vs(0, 5)], n_vertices=3)


class TestLocalStructure:
    def test_link_of_torus_vertex_is_hexagon(self, named):
        K = named("torus:7")
        L = K.link(vs(0))
        assert L.support == vs(1, 2, 3, 4, 5, 6)
        assert is_isomorphic(L, named("cycle:6"))

    def test_link_of_cyclic_polytope_vertex(self, named):
        K = named("cyclic4:8")
        L = K.link(vs(0))
        assert L.f_vector() == (7, 15, 10)
        assert is_closed_manifold(L) == (True, 2)

    def test_link_of_non_face(self, named):
        with pytest.raises(DomainError):
            named("cycle:4").link(vs(0, 2))

    def test_stars(self, named):
        K = named("octahedron")
        star = K.closed_star(vs(0))
        assert len(star.facets) == 4
        assert all(vs(0) <= g for g in K.open_star(vs(0)))

    def test_valency_is_link_vertex_count(self, named):
        K = named("icosahedron")
        for v in K.support:
            assert K.valency(vs(v)) == len(K.link(vs(v)).support) == 5

    def test_join_and_cone(self, named):
        J = join(named("cycle:3"), named("boundary-simplex:1"))
        assert J.f_vector() == (5, 9, 6)
        C = cone(named("cycle:4"))
        assert C.f_vector() == (5, 8, 4)

    def test_suspension_places_apices_at_ends(self, named):
        S = suspension(named("cycle:6"))
        assert S.n_vertices == 8
        assert S.link(vs(0)).support == vs(1, 2, 3, 4, 5, 6)
        assert S.link(vs(7)).support == vs(1, 2, 3, 4, 5, 6)


def _relabel(L):
    mapping = {v: i for i, v in enumerate(L.support)}
    return SimplicialComplex(VertexSet(mapping[v] for v in F) for F in L.facets)


class TestNamedComplexes:
    @pytest.mark.parametrize("name,f_vector", [
        ("simplex:2", (3, 3, 1)),
        ("boundary-simplex:3", (4, 6, 4)),
        ("cycle:5", (5, 5)),
        ("chain:3", (4, 3)),
        ("cyclic3:7", (7, 15, 10)),
        ("cyclic4:8", (8, 28, 40, 20)),
        ("torus:7", (7, 21, 14)),
        ("rp2:6", (6, 15, 10)),
        ("octahedron", (6, 12, 8)),
        ("icosahedron", (12, 30, 20)),
        ("suspension:cycle:6", (8, 18, 12)),
        ("cone:cycle:4", (5, 8, 4)),
    ])
    def test_f_vectors(self, named, name, f_vector):
        assert named(name).f_vector() == f_vector

    @pytest.mark.parametrize("name,chi", [
        ("torus:7", 0), ("rp2:6", 1), ("icosahedron", 2), ("boundary-simplex:4", 0), ("cyclic4:8", 0),
    ])
    def test_euler_characteristic(self, named, name, chi):
        assert named(name).euler_characteristic() == chi

    def test_cyclic3_apex_link_is_a_cycle(self, named):
        K = named("cyclic3:7")
        assert K.normalization.merged_duplicates == 0
        assert is_isomorphic(_relabel(K.link(vs(0))), named("cycle:6"))

    def test_cyclic4_vertex_links_are_cyclic3(self, named):
        K = named("cyclic4:8")
        for v in K.support:
            assert is_isomorphic(_relabel(K.link(vs(v))), named("cyclic3:7"))

    @pytest.mark.parametrize("name", ["torus:3", "cyclic4:9", "bogus", "octahedron:2", "cycle:x"])
    def test_bad_identifiers(self, name):
        with pytest.raises(UsageError):
            named_complex(name)

    def test_is_named_complex(self):
        assert is_named_complex("suspension:cycle:6")
        assert not is_named_complex("tests/fixtures/rp2_6.txt")

    @pytest.mark.slow
    def test_cell600(self, named):
        K = named("cell600")
        assert K.f_vector() == (120, 720, 1200, 600)
        assert is_closed_manifold(K) == (True, 3)


class TestFaceCounts:
    def test_icosahedron_valencies(self, named):
        counts = f_vector_and_counts(named("icosahedron"))
        assert counts.f_vector == (12, 30, 20)
        assert counts.euler_characteristic == 2
        assert set(counts.vertex_valencies().values()) == {5}
        assert counts.count(0, 5) == 12
        assert counts.count(1, 2) == 30

    def test_torus_valencies(self, named):
        counts = f_vector_and_counts(named("torus:7"))
        assert counts.count(0, 6) == 7

    def test_cyclic4_edge_valencies(self, named):
        counts = f_vector_and_counts(named("cyclic4:8"))
        assert counts.count(1, 3) == 8
        assert counts.count(1, 4) == 12

    def test_dataframe(self, named):
        frame = f_vector_and_counts(named("octahedron")).to_dataframe()
        assert list(frame.columns) == ["dim", "valency", "count"]
        assert frame["count"].sum() == 6 + 12 + 8


class TestManifolds:
    @pytest.mark.parametrize("name,expected", [
        ("boundary-simplex:1", (True, 0)),
        ("cycle:5", (True, 1)),
        ("chain:3", (False, 1)),
        ("torus:7", (True, 2)),
        ("rp2:6", (True, 2)),
        ("cone:cycle:4", (False, 2)),
        ("boundary-simplex:4", (True, 3)),
        ("cyclic4:8", (True, 3)),
    ])
    def test_is_closed_manifold(self, named, name, expected):
        assert is_closed_manifold(named(name)) == expected

    def test_dimension_four_unsupported(self, named):
        with pytest.raises(UnsupportedError):
            is_closed_manifold(named("boundary-simplex:5"))

    def test_require_closed_manifold(self, named):
        assert require_closed_manifold(named("octahedron"), 2) == 2
        with pytest.raises(DomainError):
            require_closed_manifold(named("chain:2"))
        with pytest.raises(DomainError):
            require_closed_manifold(named("octahedron"), 3)

    @pytest.mark.parametrize("name,expected", [
        ("boundary-simplex:1", True), ("cycle:4", True), ("octahedron", True), ("torus:7", False),
        ("chain:2", False),
    ])
    def test_low_dimensional_spheres(self, named, name, expected):
        assert is_sphere_low_dim(named(name)) is expected

    def test_void_complex_is_sphere(self):
        assert is_sphere_low_dim(SimplicialComplex.void())


class TestFlips:
    def test_stellar_subdivision_of_triangle(self, named):
        K = named("boundary-simplex:3")
        S = stellar_subdivision(K, vs(0, 1, 2))
        assert S.f_vector()[2] == K.f_vector()[2] + 2
        assert S.n_vertices == 5
        assert is_closed_manifold(S) == (True, 2)

    def test_edge_flip_on_octahedron(self, named):
        K = named("octahedron")
        flipped = flip(K, vs(0, 1), vs(2, 4))
        assert flipped.f_vector() == K.f_vector()
        assert vs(0, 1) not in flipped and vs(2, 4) in flipped
        assert is_closed_manifold(flipped) == (True, 2)

    def test_flip_requires_boundary_link(self, named):
        with pytest.raises(DomainError):
            flip(named("octahedron"), vs(0), vs(1, 2, 3))

    def test_flip_rejects_existing_face(self, named):
        with pytest.raises(DomainError):
            flip(named("octahedron"), vs(0, 1), vs(2))

    def test_flip_back_restores_complex(self, named):
        K = named("octahedron")
        assert flip(flip(K, vs(0, 1), vs(2, 4)), vs(2, 4), vs(0, 1)) == K


class TestFacetFiles:
    def test_parse_with_comments_and_commas(self):
        facets = parse_facet_text("# title\n0 1 2\n\n1,2,3  # trailing\n")
        assert facets == [vs(0, 1, 2), vs(1, 2, 3)]

    def test_malformed_line_number(self):
        with pytest.raises(ParseError) as info:
            parse_facet_text("0 1 2\n0 x 3\n")
        assert info.value.line_number == 2

    def test_load_fixture(self, rp2_path, named):
        K = load_facet_file(rp2_path)
        assert K == named("rp2:6")
        assert not K.normalization.has_changes

    def test_load_reports_dropped_facets(self, facet_file):
        K = load_facet_file(facet_file(["0 1 2", "1 2"]))
        assert K.normalization.dropped_nonmaximal == [[1, 2]]

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(UsageError):
            load_facet_file(tmp_path / "missing.txt")

    def test_written_text_reloads(self, named, facet_file):
        K = named("torus:7")
        text = write_facet_text(K, "torus")
        assert text.startswith("# torus\n")
        reloaded = load_facet_file(facet_file(text.splitlines()))
        assert reloaded == K


class TestMultidegree:
    def test_parse_and_vector(self):
        degree = Multidegree.parse("0:2,3", "1,4")
        assert degree.a_total == 3
        assert degree.total_degree == 1
        assert degree.to_vector(5) == [2, -1, 0, 1, -1]

    def test_supports_must_be_disjoint(self):
        with pytest.raises(DomainError):
            Multidegree.parse("1", "1,2")

    def test_dict_round_trip(self):
        degree = Multidegree.parse("0:3", "1,4,7")
        assert Multidegree.from_dict(degree.to_dict()) == degree

    def test_bad_multiplicity(self):
        with pytest.raises(ParseError):
            Multidegree.parse("0:-1", "")
