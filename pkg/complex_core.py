"""
Abstract simplicial complexes, named families and facet files
"""
import itertools
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from config import HARD_VERTEX_CAPACITY, effective_vertex_capacity
from exceptions import CapacityError, DomainError, ParseError, UnsupportedError, UsageError
from logger import get_logger, log_function_call
from utils import format_vertices, parse_multiplicity_list, parse_vertex_list, split_tokens, validate_vertex_token

logger = get_logger(__name__)


class VertexSet:
    """A finite set of vertex labels in 0..127 stored as a bit mask"""

    __slots__ = ("bits",)

    def __init__(self, vertices: Iterable[int] = ()):
        bits = 0
        for v in vertices:
            if v < 0:
                raise DomainError(f"Negative vertex label {v}")
            if v >= HARD_VERTEX_CAPACITY:
                raise CapacityError(f"Vertex {v} exceeds capacity {HARD_VERTEX_CAPACITY}")
            bits |= 1 << v
        self.bits = bits

    @classmethod
    def from_bits(cls, bits: int) -> "VertexSet":
        obj = cls.__new__(cls)
        obj.bits = bits
        return obj

    def __iter__(self) -> Iterator[int]:
        bits = self.bits
        while bits:
            low = bits & -bits
            yield low.bit_length() - 1
            bits ^= low

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __bool__(self) -> bool:
        return self.bits != 0

    def __contains__(self, v: int) -> bool:
        return v >= 0 and (self.bits >> v) & 1 == 1

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_bits(self.bits | other.bits)

    def __and__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_bits(self.bits & other.bits)

    def __sub__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet.from_bits(self.bits & ~other.bits)

    def __le__(self, other: "VertexSet") -> bool:
        return self.bits & ~other.bits == 0

    def __ge__(self, other: "VertexSet") -> bool:
        return other.bits & ~self.bits == 0

    def __eq__(self, other) -> bool:
        return isinstance(other, VertexSet) and self.bits == other.bits

    def __hash__(self) -> int:
        return hash(self.bits)

    def __repr__(self) -> str:
        return f"VertexSet({format_vertices(self)})"

    def issubset(self, other: "VertexSet") -> bool:
        return self <= other

    def isdisjoint(self, other: "VertexSet") -> bool:
        return self.bits & other.bits == 0

    def sort_key(self) -> Tuple[int, Tuple[int, ...]]:
        return len(self), tuple(self)

    def to_list(self) -> List[int]:
        return list(self)

    def max_vertex(self) -> int:
        """Largest vertex, -1 for the empty set"""
        return self.bits.bit_length() - 1

    def add(self, v: int) -> "VertexSet":
        return self | VertexSet((v,))

    def remove(self, v: int) -> "VertexSet":
        return VertexSet.from_bits(self.bits & ~(1 << v))

    def shifted(self, offset: int) -> "VertexSet":
        if self.bits and self.max_vertex() + offset >= HARD_VERTEX_CAPACITY:
            raise CapacityError(f"Shifting {self} by {offset} exceeds capacity {HARD_VERTEX_CAPACITY}")
        return VertexSet.from_bits(self.bits << offset)

    def subsets(self) -> Iterator["VertexSet"]:
        """All subsets, the empty set and the set itself included"""
        bits = self.bits
        sub = bits
        while True:
            yield VertexSet.from_bits(sub)
            if sub == 0:
                break
            sub = (sub - 1) & bits

    def facets_of_boundary(self) -> List["VertexSet"]:
        """The sets obtained by removing one vertex; [{}] for a singleton"""
        return [self.remove(v) for v in self]


EMPTY = VertexSet()


def sorted_faces(faces: Iterable[VertexSet]) -> List[VertexSet]:
    return sorted(faces, key=VertexSet.sort_key)


@dataclass
class NormalizationReport:
    """What build_from_facets changed in its input"""
    input_count: int = 0
    merged_duplicates: int = 0
    dropped_nonmaximal: List[List[int]] = field(default_factory=list)
    void: bool = False

    @property
    def has_changes(self) -> bool:
        return bool(self.merged_duplicates or self.dropped_nonmaximal or self.void)

    def to_dict(self):
        return {
            "input_count": self.input_count,
            "merged_duplicates": self.merged_duplicates,
            "dropped_nonmaximal": self.dropped_nonmaximal,
            "void": self.void,
        }


class SimplicialComplex:
    """
    Facet-defined abstract simplicial complex on the vertex universe 0..n_vertices-1

    Complexes are immutable; the face enumeration is built once on first use.
    Equality compares faces, so ghost vertices do not affect it.
    """

    def __init__(self, facets: Iterable[VertexSet], n_vertices: Optional[int] = None):
        facets = list(facets)
        report = NormalizationReport(input_count=len(facets))

        unique = set(facets)
        report.merged_duplicates = len(facets) - len(unique)

        if not unique:
            report.void = True
            unique = {EMPTY}

        maximal: List[VertexSet] = []
        for candidate in sorted(unique, key=lambda f: -len(f)):
            if any(len(kept) > len(candidate) and candidate <= kept for kept in maximal):
                report.dropped_nonmaximal.append(candidate.to_list())
            else:
                maximal.append(candidate)
        report.dropped_nonmaximal.sort(key=lambda f: (len(f), f))

        self._init_trusted(maximal, n_vertices)
        self.normalization = report

    @classmethod
    def _trusted(cls, facets: Iterable[VertexSet], n_vertices: int) -> "SimplicialComplex":
        """Build from facets already known to be distinct and pairwise non-nested"""
        obj = cls.__new__(cls)
        obj._init_trusted(list(facets), n_vertices)
        obj.normalization = NormalizationReport(input_count=len(obj._facets))
        return obj

    def _init_trusted(self, facets: List[VertexSet], n_vertices: Optional[int]):
        support_bits = 0
        for facet in facets:
            support_bits |= facet.bits
        needed = support_bits.bit_length()
        if n_vertices is None:
            n_vertices = needed
        if n_vertices < needed:
            raise DomainError(f"Facet vertex {needed - 1} outside the universe 0..{n_vertices - 1}")
        capacity = effective_vertex_capacity()
        if n_vertices > capacity:
            raise CapacityError(f"{n_vertices} vertices exceed the capacity guard of {capacity}")

        self._facets: Tuple[VertexSet, ...] = tuple(sorted_faces(facets))
        self._n_vertices = n_vertices
        self._support = VertexSet.from_bits(support_bits)
        self._faces: Optional[FrozenSet[VertexSet]] = None
        self._faces_by_dim: Optional[Dict[int, Tuple[VertexSet, ...]]] = None
        self._lock = threading.Lock()

    @classmethod
    def empty(cls, n_vertices: int = 0) -> "SimplicialComplex":
        """The complex with no faces at all (not even the empty face)"""
        return cls._trusted((), n_vertices)

    @classmethod
    def void(cls, n_vertices: int = 0) -> "SimplicialComplex":
        """The complex {∅}"""
        return cls._trusted((EMPTY,), n_vertices)

    @classmethod
    def from_faces(cls, faces: Iterable[VertexSet], n_vertices: Optional[int] = None) -> "SimplicialComplex":
        """Complex generated by the maximal members of a face collection"""
        faces = set(faces)
        if not faces:
            return cls.empty(n_vertices or 0)
        covered = set()
        for face in faces:
            for v in face:
                covered.add(face.remove(v))
        return cls._trusted((f for f in faces if f not in covered), n_vertices)

    # -- basic data -----------------------------------------------------------

    @property
    def facets(self) -> Tuple[VertexSet, ...]:
        return self._facets

    @property
    def n_vertices(self) -> int:
        return self._n_vertices

    @property
    def support(self) -> VertexSet:
        return self._support

    @property
    def ghost_vertices(self) -> List[int]:
        return [v for v in range(self._n_vertices) if v not in self._support]

    @property
    def is_empty(self) -> bool:
        return not self._facets

    @property
    def is_void(self) -> bool:
        return self._facets == (EMPTY,)

    @property
    def dim(self) -> int:
        if not self._facets:
            return -1
        return max(len(f) for f in self._facets) - 1

    @property
    def is_pure(self) -> bool:
        return len({len(f) for f in self._facets}) <= 1

    @property
    def faces(self) -> FrozenSet[VertexSet]:
        if self._faces is None:
            with self._lock:
                if self._faces is None:
                    faces = set()
                    for facet in self._facets:
                        faces.update(facet.subsets())
                    self._faces = frozenset(faces)
        return self._faces

    @property
    def faces_by_dim(self) -> Dict[int, Tuple[VertexSet, ...]]:
        if self._faces_by_dim is None:
            faces = self.faces
            with self._lock:
                if self._faces_by_dim is None:
                    grouped: Dict[int, List[VertexSet]] = {}
                    for face in faces:
                        grouped.setdefault(len(face) - 1, []).append(face)
                    self._faces_by_dim = {d: tuple(sorted_faces(fs)) for d, fs in sorted(grouped.items())}
        return self._faces_by_dim

    def faces_of_dim(self, d: int) -> Tuple[VertexSet, ...]:
        return self.faces_by_dim.get(d, ())

    def nonempty_faces(self) -> List[VertexSet]:
        return [f for d, fs in self.faces_by_dim.items() if d >= 0 for f in fs]

    def __contains__(self, face: VertexSet) -> bool:
        return face in self.faces

    def __eq__(self, other) -> bool:
        return isinstance(other, SimplicialComplex) and set(self._facets) == set(other._facets)

    def __hash__(self) -> int:
        return hash(frozenset(f.bits for f in self._facets))

    def __repr__(self) -> str:
        return f"SimplicialComplex(n_vertices={self._n_vertices}, facets={len(self._facets)}, dim={self.dim})"

    def to_dict(self):
        return {
            "n_vertices": self._n_vertices,
            "facets": [f.to_list() for f in self._facets],
            "ghost_vertices": self.ghost_vertices,
        }

    # -- local structure ------------------------------------------------------

    def _require_face(self, face: VertexSet):
        if face not in self:
            raise DomainError(f"{format_vertices(face)} is not a face of the complex")

    def link(self, face: VertexSet) -> "SimplicialComplex":
        self._require_face(face)
        return SimplicialComplex._trusted(
            (F - face for F in self._facets if face <= F), self._n_vertices
        )

    def closed_star(self, face: VertexSet) -> "SimplicialComplex":
        self._require_face(face)
        return SimplicialComplex._trusted((F for F in self._facets if face <= F), self._n_vertices)

    def open_star(self, face: VertexSet) -> FrozenSet[VertexSet]:
        self._require_face(face)
        return frozenset(g for g in self.faces if face <= g)

    def valency(self, face: VertexSet) -> int:
        """Number of faces with one more vertex containing the face"""
        self._require_face(face)
        return sum(1 for v in range(self._n_vertices) if v not in face and face.add(v) in self)

    def edges(self) -> Tuple[VertexSet, ...]:
        return self.faces_of_dim(1)

    def adjacency(self) -> Dict[int, set]:
        adjacency = {v: set() for v in self._support}
        for edge in self.edges():
            u, w = edge
            adjacency[u].add(w)
            adjacency[w].add(u)
        return adjacency

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(fs) for d, fs in self.faces_by_dim.items() if d >= 0)

    def f_vector(self) -> Tuple[int, ...]:
        return tuple(len(self.faces_of_dim(d)) for d in range(self.dim + 1))

    def minimal_nonfaces(self, within: Optional[VertexSet] = None) -> List[VertexSet]:
        """Non-faces all of whose proper subsets are faces, optionally restricted to a vertex set"""
        faces = self.faces
        vertices = list(within) if within is not None else range(self._n_vertices)
        found = set()
        for face in faces:
            for v in vertices:
                if v in face:
                    continue
                candidate = face.add(v)
                if candidate in faces or candidate in found:
                    continue
                if all(candidate.remove(w) in faces for w in face):
                    found.add(candidate)
        return sorted_faces(found)

    def connected_components(self) -> List[VertexSet]:
        parent = {v: v for v in self._support}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for facet in self._facets:
            vertices = list(facet)
            for u in vertices[1:]:
                ru, rv = find(u), find(vertices[0])
                if ru != rv:
                    parent[ru] = rv

        groups: Dict[int, List[int]] = {}
        for v in self._support:
            groups.setdefault(find(v), []).append(v)
        return sorted_faces(VertexSet(vs) for vs in groups.values())


# -- face counts ------------------------------------------------------------

@dataclass
class FaceCounts:
    """f-vector, Euler characteristic, valencies and the counts f_i^(k)"""
    f_vector: Tuple[int, ...]
    euler_characteristic: int
    valencies: Dict[VertexSet, int]
    counts: Dict[Tuple[int, int], int]

    def count(self, i: int, k: int) -> int:
        """f_i^(k): number of i-faces of valency k"""
        return self.counts.get((i, k), 0)

    def vertex_valencies(self) -> Dict[int, int]:
        return {next(iter(f)): k for f, k in self.valencies.items() if len(f) == 1}

    def to_dataframe(self) -> pd.DataFrame:
        rows = [{"dim": i, "valency": k, "count": c} for (i, k), c in sorted(self.counts.items())]
        return pd.DataFrame(rows, columns=["dim", "valency", "count"])

    def to_dict(self):
        return {
            "f_vector": list(self.f_vector),
            "euler_characteristic": self.euler_characteristic,
            "vertex_valencies": {str(v): k for v, k in sorted(self.vertex_valencies().items())},
            "counts": [{"dim": i, "valency": k, "count": c} for (i, k), c in sorted(self.counts.items())],
        }


def f_vector_and_counts(K: SimplicialComplex) -> FaceCounts:
    valencies: Dict[VertexSet, int] = {f: 0 for f in K.nonempty_faces()}
    for face in K.faces:
        if len(face) >= 2:
            for v in face:
                valencies[face.remove(v)] += 1
    counts: Dict[Tuple[int, int], int] = {}
    for face, k in valencies.items():
        key = (len(face) - 1, k)
        counts[key] = counts.get(key, 0) + 1
    return FaceCounts(
        f_vector=K.f_vector(),
        euler_characteristic=K.euler_characteristic(),
        valencies=valencies,
        counts=counts,
    )


# -- manifold and sphere recognition ----------------------------------------

def _is_cycle(L: SimplicialComplex) -> bool:
    if L.dim != 1 or not L.is_pure or len(L.support) < 3:
        return False
    degree = {v: 0 for v in L.support}
    for edge in L.facets:
        for v in edge:
            degree[v] += 1
    return all(d == 2 for d in degree.values()) and len(L.connected_components()) == 1


def _vertex_links(K: SimplicialComplex) -> Iterator[Tuple[int, SimplicialComplex]]:
    incident: Dict[int, List[VertexSet]] = {v: [] for v in K.support}
    for facet in K.facets:
        for v in facet:
            incident[v].append(facet)
    for v in sorted(incident):
        single = VertexSet((v,))
        yield v, SimplicialComplex._trusted((F - single for F in incident[v]), K.n_vertices)


def _is_closed_surface(K: SimplicialComplex) -> bool:
    if K.dim != 2 or not K.is_pure:
        return False
    return all(_is_cycle(L) for _, L in _vertex_links(K))


def is_sphere_low_dim(K: SimplicialComplex) -> Optional[bool]:
    """Sphere recognition for dimensions -1..2; None when the dimension is higher"""
    if K.is_empty:
        return False
    d = K.dim
    if d == -1:
        return True
    if d == 0:
        return len(K.support) == 2
    if d == 1:
        return _is_cycle(K)
    if d == 2:
        return _is_closed_surface(K) and len(K.connected_components()) == 1 and K.euler_characteristic() == 2
    return None


@log_function_call
def is_closed_manifold(K: SimplicialComplex) -> Tuple[bool, int]:
    """
    Check the combinatorial closed manifold property

    Returns:
        Tuple of (is_manifold, dimension)
    """
    d = K.dim
    if d >= 4:
        raise UnsupportedError(f"Manifold recognition is limited to dimension 3, got {d}")
    if K.is_empty or K.is_void or not K.is_pure:
        return False, d
    if d == 0:
        return True, 0
    if d == 1:
        return all(len(L.support) == 2 and L.dim == 0 for _, L in _vertex_links(K)), 1
    if d == 2:
        return _is_closed_surface(K), 2

    for _, L in _vertex_links(K):
        if not (_is_closed_surface(L) and len(L.connected_components()) == 1 and L.euler_characteristic() == 2):
            return False, 3
    for edge in K.edges():
        if not _is_cycle(K.link(edge)):
            return False, 3
    return True, 3


def require_closed_manifold(K: SimplicialComplex, dimension: Optional[int] = None) -> int:
    """Raise DomainError unless K is a closed manifold (of the given dimension)"""
    ok, d = is_closed_manifold(K)
    if not ok:
        raise DomainError("The complex is not a closed combinatorial manifold")
    if dimension is not None and d != dimension:
        raise DomainError(f"Expected a closed {dimension}-manifold, got dimension {d}")
    return d


def is_isomorphic(K: SimplicialComplex, L: SimplicialComplex) -> bool:
    """Backtracking isomorphism test on supports, refined by vertex degree"""
    if K.f_vector() != L.f_vector():
        return False
    adj_k, adj_l = K.adjacency(), L.adjacency()
    if sorted(len(n) for n in adj_k.values()) != sorted(len(n) for n in adj_l.values()):
        return False

    # breadth-first order keeps every new vertex adjacent to a mapped one
    order: List[int] = []
    seen = set()
    for start in sorted(adj_k, key=lambda v: (-len(adj_k[v]), v)):
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(adj_k[v]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)

    target = set(L.facets)
    mapping: Dict[int, int] = {}
    used = set()

    def extend(index: int) -> bool:
        if index == len(order):
            image = {VertexSet(mapping[v] for v in F) for F in K.facets}
            return image == target
        v = order[index]
        for w in adj_l:
            if w in used or len(adj_l[w]) != len(adj_k[v]):
                continue
            if any((u in adj_k[v]) != (mapping[u] in adj_l[w]) for u in mapping):
                continue
            mapping[v] = w
            used.add(w)
            if extend(index + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return extend(0)


# -- constructions ----------------------------------------------------------

def build_from_facets(facet_list: Iterable[Union[VertexSet, Iterable[int]]],
                      n_vertices: Optional[int] = None) -> SimplicialComplex:
    """Normalize a facet list into a complex, logging what was merged or dropped"""
    facets = [f if isinstance(f, VertexSet) else VertexSet(f) for f in facet_list]
    K = SimplicialComplex(facets, n_vertices)
    report = K.normalization
    if report.void:
        logger.warning("Empty facet list: producing the void complex {∅}")
    if report.merged_duplicates:
        logger.warning(f"Merged {report.merged_duplicates} duplicate facet(s)")
    for dropped in report.dropped_nonmaximal:
        logger.warning(f"Dropped non-maximal facet {format_vertices(dropped)}")
    return K


def link(K: SimplicialComplex, f: VertexSet) -> SimplicialComplex:
    return K.link(f)


def closed_star(K: SimplicialComplex, f: VertexSet) -> SimplicialComplex:
    return K.closed_star(f)


def open_star(K: SimplicialComplex, f: VertexSet) -> FrozenSet[VertexSet]:
    return K.open_star(f)


def join(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    """Join with the vertices of L re-indexed above those of K"""
    total = K.n_vertices + L.n_vertices
    if total > effective_vertex_capacity():
        raise CapacityError(f"Join needs {total} vertices, capacity is {effective_vertex_capacity()}")
    if K.is_empty or L.is_empty:
        return SimplicialComplex.empty(total)
    offset = K.n_vertices
    return SimplicialComplex._trusted(
        (F | G.shifted(offset) for F in K.facets for G in L.facets), total
    )


def cone(K: SimplicialComplex) -> SimplicialComplex:
    """Cone with apex K.n_vertices"""
    return join(K, simplex(0))


def suspension(K: SimplicialComplex) -> SimplicialComplex:
    """Suspension with apices 0 and K.n_vertices + 1, K shifted to 1..n"""
    total = K.n_vertices + 2
    if total > effective_vertex_capacity():
        raise CapacityError(f"Suspension needs {total} vertices, capacity is {effective_vertex_capacity()}")
    south, north = VertexSet((0,)), VertexSet((K.n_vertices + 1,))
    facets = [F.shifted(1) | apex for F in K.facets for apex in (south, north)]
    return SimplicialComplex._trusted(facets, total)


@log_function_call
def flip(K: SimplicialComplex, a: VertexSet, b: VertexSet) -> SimplicialComplex:
    """
    Stellar exchange: replace ā ∗ ∂b ∗ L by ∂a ∗ b̄ ∗ L

    Args:
        K: the complex
        a: a nonempty face whose link decomposes as ∂b ∗ L
        b: a vertex set disjoint from a and not a face of link(a)

    Returns:
        The flipped complex; |b| = 1 with a new vertex gives the stellar subdivision of a
    """
    if not a or a not in K:
        raise DomainError(f"{format_vertices(a)} must be a nonempty face")
    if not b or not a.isdisjoint(b):
        raise DomainError("b must be nonempty and disjoint from a")
    L_a = K.link(a)
    if b in L_a:
        raise DomainError(f"{format_vertices(b)} is already a face of the link")

    boundary_facets = b.facets_of_boundary()
    L_faces = {g for g in L_a.faces if g.isdisjoint(b) and all((g | h) in L_a for h in boundary_facets)}
    proper_b = [h for h in b.subsets() if h != b]
    expected = {g | h for g in L_faces for h in proper_b}
    if not L_faces or expected != set(L_a.faces):
        raise DomainError(
            f"link of {format_vertices(a)} is not of the form ∂{format_vertices(b)} ∗ L"
        )

    all_a = list(a.subsets())
    removed = {x | h | g for x in all_a for h in proper_b for g in L_faces}
    added = {x | h | g for x in all_a if x != a for h in b.subsets() for g in L_faces}
    n_vertices = max(K.n_vertices, b.max_vertex() + 1)
    return SimplicialComplex.from_faces((set(K.faces) - removed) | added, n_vertices)


def stellar_subdivision(K: SimplicialComplex, a: VertexSet) -> SimplicialComplex:
    """Star the face a at the new vertex K.n_vertices"""
    return flip(K, a, VertexSet((K.n_vertices,)))


# -- named complexes --------------------------------------------------------

def simplex(n: int) -> SimplicialComplex:
    return SimplicialComplex._trusted([VertexSet(range(n + 1))], n + 1)


def boundary_simplex(n: int) -> SimplicialComplex:
    full = VertexSet(range(n + 1))
    return SimplicialComplex._trusted(full.facets_of_boundary(), n + 1)


def cycle(n: int) -> SimplicialComplex:
    return SimplicialComplex._trusted((VertexSet((i, (i + 1) % n)) for i in range(n)), n)


def chain(n: int) -> SimplicialComplex:
    return SimplicialComplex._trusted((VertexSet((i, i + 1)) for i in range(n)), n + 1)


def cyclic3(n: int) -> SimplicialComplex:
    """∂C(n,3) = ∂Δ₁∗C_{n−3} ∪ ∂C_{n−3}∗Δ₁ with apex pair {0, n−1} and chain 1..n−2"""
    facets = []
    for i in range(1, n - 2):
        facets.append(VertexSet((0, i, i + 1)))
        facets.append(VertexSet((n - 1, i, i + 1)))
    facets.append(VertexSet((0, 1, n - 1)))
    facets.append(VertexSet((0, n - 2, n - 1)))
    return SimplicialComplex(facets, n)


def cyclic4_8() -> SimplicialComplex:
    facets = set()
    for i in range(8):
        facets.add(VertexSet(((i + k) % 8 for k in (0, 1, 2, 3))))
        facets.add(VertexSet(((i + k) % 8 for k in (0, 1, 3, 4))))
    for i in range(4):
        facets.add(VertexSet(((i + k) % 8 for k in (0, 1, 4, 5))))
    return SimplicialComplex._trusted(facets, 8)


def torus(n: int) -> SimplicialComplex:
    facets = []
    for i in range(n):
        facets.append(VertexSet((i, (i + 2) % n, (i + 3) % n)))
        facets.append(VertexSet((i, (i + 1) % n, (i + 3) % n)))
    return SimplicialComplex(facets, n)


def octahedron() -> SimplicialComplex:
    return suspension(cycle(4))


def icosahedron() -> SimplicialComplex:
    # apex 0, upper ring 1..5, lower ring 6..10, apex 11
    facets = []
    for k in range(5):
        u, u_next = 1 + k, 1 + (k + 1) % 5
        l, l_next = 6 + k, 6 + (k + 1) % 5
        facets.append(VertexSet((0, u, u_next)))
        facets.append(VertexSet((11, l, l_next)))
        facets.append(VertexSet((u, u_next, l)))
        facets.append(VertexSet((u_next, l, l_next)))
    return SimplicialComplex._trusted(facets, 12)


_RP2_6 = [(0, 1, 3), (0, 1, 5), (0, 2, 4), (0, 2, 5), (0, 3, 4),
          (1, 2, 3), (1, 2, 4), (1, 4, 5), (2, 3, 5), (3, 4, 5)]


def rp2_6() -> SimplicialComplex:
    return SimplicialComplex._trusted((VertexSet(f) for f in _RP2_6), 6)


def _is_even_permutation(perm: Sequence[int]) -> bool:
    inversions = sum(1 for i, j in itertools.combinations(range(len(perm)), 2) if perm[i] > perm[j])
    return inversions % 2 == 0


def cell600() -> SimplicialComplex:
    """Boundary of the 600-cell from the 120 unit quaternions of the binary icosahedral group"""
    phi = (1 + np.sqrt(5)) / 2
    points = []
    for axis in range(4):
        for sign in (1.0, -1.0):
            point = np.zeros(4)
            point[axis] = sign
            points.append(point)
    points.extend(np.array(signs) for signs in itertools.product((0.5, -0.5), repeat=4))
    base = np.array([phi / 2, 0.5, 1 / (2 * phi), 0.0])
    for perm in itertools.permutations(range(4)):
        if not _is_even_permutation(perm):
            continue
        for signs in itertools.product((1.0, -1.0), repeat=3):
            point = np.zeros(4)
            point[list(perm)] = base * np.array(signs + (1.0,))
            points.append(point)

    vertices = np.unique(np.round(np.array(points), 9), axis=0)
    gram = vertices @ vertices.T
    adjacent = np.isclose(gram, phi / 2, atol=1e-6)
    neighbors = [set(np.flatnonzero(row).tolist()) for row in adjacent]

    facets = []
    for i in range(len(vertices)):
        for j in sorted(w for w in neighbors[i] if w > i):
            common = neighbors[i] & neighbors[j]
            for k in sorted(w for w in common if w > j):
                for l in sorted(w for w in common & neighbors[k] if w > k):
                    facets.append(VertexSet((i, j, k, l)))

    if len(vertices) != 120 or len(facets) != 600:
        raise RuntimeError(f"600-cell construction produced {len(vertices)} vertices, {len(facets)} facets")
    return SimplicialComplex._trusted(facets, 120)


def _parameter(name: str, raw: str, minimum: int) -> int:
    if not raw.isdigit():
        raise UsageError(f"'{name}' needs an integer parameter, got '{raw}'")
    value = int(raw)
    if value < minimum:
        raise UsageError(f"'{name}' needs a parameter >= {minimum}, got {value}")
    return value


_PARAMETRIZED = {
    "simplex": (simplex, 0),
    "boundary-simplex": (boundary_simplex, 1),
    "cycle": (cycle, 3),
    "chain": (chain, 1),
    "cyclic3": (cyclic3, 5),
    "torus": (torus, 7),
}

_FIXED = {
    "octahedron": octahedron,
    "icosahedron": icosahedron,
    "cell600": cell600,
}


def named_complex(name: str) -> SimplicialComplex:
    """
    Build a complex from its identifier

    Grammar: simplex:n, boundary-simplex:n, cycle:n, chain:n, cyclic3:n,
    cyclic4:8, torus:n, rp2:6, octahedron, icosahedron, cell600,
    suspension:<name>, cone:<name>.
    """
    kind, _, rest = name.strip().partition(":")
    if kind == "suspension":
        return suspension(named_complex(rest))
    if kind == "cone":
        return cone(named_complex(rest))
    if kind in _FIXED:
        if rest:
            raise UsageError(f"'{kind}' takes no parameter")
        return _FIXED[kind]()
    if kind == "cyclic4":
        if rest != "8":
            raise UsageError("cyclic4 is only available for 8 vertices (cyclic4:8)")
        return cyclic4_8()
    if kind == "rp2":
        if rest != "6":
            raise UsageError("rp2 is only available for 6 vertices (rp2:6)")
        return rp2_6()
    if kind in _PARAMETRIZED:
        builder, minimum = _PARAMETRIZED[kind]
        return builder(_parameter(kind, rest, minimum))
    raise UsageError(f"Unknown complex identifier '{name}'")


def is_named_complex(spec: str) -> bool:
    kind = spec.strip().partition(":")[0]
    return kind in _PARAMETRIZED or kind in _FIXED or kind in ("suspension", "cone", "cyclic4", "rp2")


# -- facet files ------------------------------------------------------------

def parse_facet_text(text: str) -> List[VertexSet]:
    """One facet per line, vertices separated by spaces or commas, '#' comments"""
    facets = []
    for line_number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0].strip()
        if not content:
            continue
        vertices = []
        for token in split_tokens(content):
            ok, message = validate_vertex_token(token)
            if not ok:
                raise ParseError(message, line_number)
            vertices.append(int(token))
        try:
            facets.append(VertexSet(vertices))
        except CapacityError as exc:
            raise ParseError(str(exc), line_number) from exc
    return facets


def load_facet_file(path: Union[str, Path], n_vertices: Optional[int] = None) -> SimplicialComplex:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"Cannot read facet file {path}: {exc}") from exc
    facets = parse_facet_text(text)
    logger.info(f"Read {len(facets)} facet line(s) from {path}")
    return build_from_facets(facets, n_vertices)


def write_facet_text(K: SimplicialComplex, title: str = "") -> str:
    lines = []
    if title:
        lines.append(f"# {title}")
    lines.append(f"# vertices: {K.n_vertices}, facets: {len(K.facets)}")
    lines.extend(" ".join(str(v) for v in facet) for facet in K.facets)
    return "\n".join(lines) + "\n"


# -- multidegrees -----------------------------------------------------------

@dataclass(frozen=True)
class Multidegree:
    """c = a − b with a supported on a face and b squarefree, disjoint from a"""
    a_exponents: Tuple[Tuple[int, int], ...]
    b_set: VertexSet

    def __post_init__(self):
        if any(e <= 0 for _, e in self.a_exponents):
            raise DomainError("Exponents of a must be positive on its support")
        if not self.a_support.isdisjoint(self.b_set):
            raise DomainError("The supports of a and b must be disjoint")

    @classmethod
    def create(cls, a: Union[Mapping[int, int], VertexSet, Iterable[int]], b: Union[VertexSet, Iterable[int]]):
        if isinstance(a, Mapping):
            exponents = tuple(sorted((int(v), int(e)) for v, e in a.items() if e))
        else:
            exponents = tuple((v, 1) for v in (a if isinstance(a, VertexSet) else sorted(set(a))))
        b_set = b if isinstance(b, VertexSet) else VertexSet(b)
        return cls(exponents, b_set)

    @classmethod
    def parse(cls, a_text: str, b_text: str) -> "Multidegree":
        return cls.create(parse_multiplicity_list(a_text or ""), parse_vertex_list(b_text or ""))

    @property
    def a_support(self) -> VertexSet:
        return VertexSet(v for v, _ in self.a_exponents)

    @property
    def a_total(self) -> int:
        return sum(e for _, e in self.a_exponents)

    @property
    def total_degree(self) -> int:
        return self.a_total - len(self.b_set)

    def to_vector(self, n: int) -> List[int]:
        vector = [0] * n
        for v, e in self.a_exponents:
            vector[v] += e
        for v in self.b_set:
            vector[v] -= 1
        return vector

    def to_dict(self):
        return {
            "a": {str(v): e for v, e in self.a_exponents},
            "b": self.b_set.to_list(),
            "total_degree": self.total_degree,
        }

    @classmethod
    def from_dict(cls, data) -> "Multidegree":
        return cls.create({int(v): int(e) for v, e in data["a"].items()}, data["b"])

    def __str__(self) -> str:
        a_part = "·".join(f"x{v}^{e}" if e > 1 else f"x{v}" for v, e in self.a_exponents) or "1"
        return f"{a_part} / x^{format_vertices(self.b_set)}"
