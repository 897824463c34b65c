"""
Rational (co)homology of complexes and of pairs of up-closed face families
"""
from dataclasses import dataclass
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from complex_core import SimplicialComplex, VertexSet, require_closed_manifold, sorted_faces
from config import VERIFY_BOUNDARY_SQUARES, effective_vertex_capacity
from exceptions import CapacityError, DomainError, UnsupportedError, VerificationFailure
from logger import get_logger
from utils import exact_rank, format_vertices

logger = get_logger(__name__)


@dataclass(frozen=True)
class BettiVector:
    """Dimensions indexed by degree, starting at `start` (-1 for reduced groups)"""
    start: int
    dims: Tuple[int, ...]

    def __getitem__(self, degree: int) -> int:
        index = degree - self.start
        if 0 <= index < len(self.dims):
            return self.dims[index]
        return 0

    def degrees(self) -> range:
        return range(self.start, self.start + len(self.dims))

    def alternating_sum(self) -> int:
        return sum((-1) ** d * self[d] for d in self.degrees())

    def to_dict(self):
        return {"start": self.start, "dims": list(self.dims)}


Face = Tuple[int, ...]


class ChainComplex:
    """
    Simplicial chain complex, optionally augmented and optionally relative
    to the full subcomplex spanned by `relative_to`.

    Faces are sorted vertex tuples; bases are the faces of each dimension in
    the given order and boundary matrices are sparse {(row, col): ±1} maps
    from dimension d to d-1.
    """

    def __init__(self, K: SimplicialComplex, reduced: bool = False,
                 relative_to: Optional[VertexSet] = None, verify: bool = VERIFY_BOUNDARY_SQUARES):
        faces = {d: [tuple(f) for f in fs] for d, fs in K.faces_by_dim.items()}
        mask = frozenset(relative_to) if relative_to is not None else None
        self._build(faces, reduced, mask, verify)

    @classmethod
    def from_faces(cls, faces_by_dim: Dict[int, Sequence[Face]], reduced: bool = False,
                   relative_to: Optional[FrozenSet[int]] = None,
                   verify: bool = VERIFY_BOUNDARY_SQUARES) -> "ChainComplex":
        """Chain complex of any face list closed under deletion, with no vertex capacity"""
        complex_ = cls.__new__(cls)
        complex_._build(faces_by_dim, reduced, relative_to, verify)
        return complex_

    def _build(self, faces_by_dim: Dict[int, Sequence[Face]], reduced: bool,
               relative_to: Optional[FrozenSet[int]], verify: bool):
        self.reduced = reduced
        self.relative_to = relative_to

        low = -1 if reduced and relative_to is None else 0
        self.bases: Dict[int, Tuple[Face, ...]] = {}
        for d, faces in faces_by_dim.items():
            if d < low:
                continue
            if relative_to is not None:
                faces = [f for f in faces if not relative_to.issuperset(f)]
            if faces:
                self.bases[d] = tuple(faces)
        self.low = low
        self.top = max([d for d, faces in faces_by_dim.items() if faces] + [-1])

        self._index = {d: {f: i for i, f in enumerate(fs)} for d, fs in self.bases.items()}
        self.boundaries = {d: self._boundary(d) for d in range(low + 1, self.top + 1)}

        if verify:
            self.verify_boundary_squares()

    def _boundary(self, d: int) -> Dict[Tuple[int, int], int]:
        entries: Dict[Tuple[int, int], int] = {}
        rows = self._index.get(d - 1, {})
        for col, face in enumerate(self.bases.get(d, ())):
            for position in range(len(face)):
                row = rows.get(face[:position] + face[position + 1:])
                if row is not None:
                    entries[(row, col)] = -1 if position % 2 else 1
        return entries

    def rank(self, d: int) -> int:
        """Rank of the boundary map out of dimension d"""
        if d not in self.boundaries:
            return 0
        return exact_rank(self.boundaries[d], (self.size(d - 1), self.size(d)))

    def size(self, d: int) -> int:
        return len(self.bases.get(d, ()))

    def _integer_matrix(self, d: int) -> DomainMatrix:
        sparse: Dict[int, Dict[int, object]] = {}
        for (i, j), value in self.boundaries[d].items():
            sparse.setdefault(i, {})[j] = ZZ(value)
        return DomainMatrix(sparse, (self.size(d - 1), self.size(d)), ZZ)

    def verify_boundary_squares(self):
        for d in range(self.low + 2, self.top + 1):
            if not self.size(d) or not self.size(d - 2):
                continue
            product = self._integer_matrix(d - 1) * self._integer_matrix(d)
            if not product.is_zero_matrix:
                raise VerificationFailure(f"Boundary maps do not compose to zero in dimension {d}")

    def homology_dims(self) -> BettiVector:
        ranks = {d: self.rank(d) for d in range(self.low, self.top + 2)}
        dims = tuple(
            self.size(d) - ranks.get(d, 0) - ranks.get(d + 1, 0)
            for d in range(self.low, self.top + 1)
        )
        return BettiVector(self.low, dims)


def homology_dims(K: SimplicialComplex, reduced: bool = True) -> BettiVector:
    """
    Rational homology dimensions for degrees -1..dim K (reduced) or 0..dim K

    The void complex {∅} has H̃_{-1} = 1; over a field cohomology has the
    same dimensions.
    """
    return ChainComplex(K, reduced=reduced).homology_dims()


cohomology_dims = homology_dims


def euler_characteristic_from_homology(K: SimplicialComplex) -> int:
    return homology_dims(K, reduced=False).alternating_sum()


# -- up-closed families -----------------------------------------------------

@dataclass(frozen=True)
class UpClosedFamily:
    """Faces of an ambient complex closed under passing to larger faces"""
    ambient: SimplicialComplex
    members: FrozenSet[VertexSet]

    @classmethod
    def create(cls, ambient: SimplicialComplex, members: Iterable[VertexSet]) -> "UpClosedFamily":
        members = frozenset(members)
        for face in members:
            if face not in ambient:
                raise DomainError(f"{format_vertices(face)} is not a face of the ambient complex")
            for v in range(ambient.n_vertices):
                if v not in face:
                    larger = face.add(v)
                    if larger in ambient and larger not in members:
                        raise DomainError(
                            f"Family is not up-closed: {format_vertices(face)} ⊂ {format_vertices(larger)}"
                        )
        return cls(ambient, members)

    @property
    def contains_empty(self) -> bool:
        return VertexSet() in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, face: VertexSet) -> bool:
        return face in self.members

    def issubset(self, other: "UpClosedFamily") -> bool:
        return self.members <= other.members


def order_complex(Y: UpClosedFamily) -> SimplicialComplex:
    """
    Nerve of the inclusion poset of Y; vertex i is the i-th member in sorted order

    When ∅ ∈ Y it is the unique minimal element, so the result is a cone.
    An empty family gives the void complex.
    """
    members = sorted_faces(Y.members)
    if len(members) > effective_vertex_capacity():
        raise CapacityError(
            f"Order complex needs {len(members)} vertices, capacity is {effective_vertex_capacity()}"
        )
    if not members:
        return SimplicialComplex.void(0)

    index = {face: i for i, face in enumerate(members)}
    n = Y.ambient.n_vertices
    covers = {
        face: [index[face.add(v)] for v in range(n) if v not in face and face.add(v) in Y.members]
        for face in members
    }
    minimal = [face for face in members if not any(face.remove(v) in Y.members for v in face)]

    chains: List[VertexSet] = []

    def walk(face: VertexSet, bits: int):
        ups = covers[face]
        if not ups:
            chains.append(VertexSet.from_bits(bits))
            return
        for j in ups:
            walk(members[j], bits | (1 << j))

    for face in minimal:
        walk(face, 1 << index[face])
    return SimplicialComplex(chains, len(members))


def order_chains(Y: UpClosedFamily) -> Tuple[List[VertexSet], Dict[int, List[Face]]]:
    """
    All chains of the inclusion poset of Y as increasing tuples of member
    indices, grouped by dimension (the empty chain sits in dimension -1)

    Members are indexed in sorted order, so a strictly larger face always
    has a larger index. No vertex capacity applies.
    """
    members = sorted_faces(Y.members)
    index = {face: i for i, face in enumerate(members)}
    n = Y.ambient.n_vertices
    above: List[FrozenSet[int]] = [frozenset()] * len(members)
    for i in reversed(range(len(members))):
        face = members[i]
        covers = [index[face.add(v)] for v in range(n) if v not in face and face.add(v) in index]
        above[i] = frozenset(covers).union(*(above[j] for j in covers))

    chains: Dict[int, List[Face]] = {-1: [()]}

    def extend(chain: Face):
        chains.setdefault(len(chain) - 1, []).append(chain)
        for j in sorted(above[chain[-1]]):
            extend(chain + (j,))

    for i in range(len(members)):
        extend((i,))
    return members, chains


def pair_cohomology_dims(U: UpClosedFamily, V: UpClosedFamily, reduced: bool = False) -> BettiVector:
    """
    Dimensions of H^i(⟨U⟩, ⟨V⟩; Q), computed on the chains of U

    With V empty and reduced set, the reduced cohomology of ⟨U⟩ is returned.
    """
    if not V.issubset(U):
        raise DomainError("The second family must be contained in the first")
    if U.ambient != V.ambient:
        raise DomainError("Both families must live in the same ambient complex")

    members, chains = order_chains(U)
    if not V.members:
        return ChainComplex.from_faces(chains, reduced=reduced).homology_dims()

    mask = frozenset(i for i, face in enumerate(members) if face in V.members)
    return ChainComplex.from_faces(chains, relative_to=mask).homology_dims()


# -- manifolds and sheaf cohomology -----------------------------------------

def is_orientable(K: SimplicialComplex) -> bool:
    """A closed n-manifold is orientable iff H_n has one generator per component"""
    d = require_closed_manifold(K)
    top = homology_dims(K, reduced=False)[d]
    return top == len(K.connected_components())


def poincare_duality_holds(K: SimplicialComplex) -> bool:
    d = require_closed_manifold(K)
    betti = homology_dims(K, reduced=False)
    return all(betti[i] == betti[d - i] for i in range(d + 1))


def local_cohomology_dim(K: SimplicialComplex, i: int, c: Sequence[int]) -> int:
    """dim H^i_m(A_K)_c: zero unless c <= 0 with support b a face, else dim H̃^{i-|b|-1}(link b)"""
    if len(c) != K.n_vertices:
        raise DomainError(f"Degree vector has {len(c)} entries, expected {K.n_vertices}")
    if any(entry > 0 for entry in c):
        return 0
    b = VertexSet(v for v, entry in enumerate(c) if entry < 0)
    if b not in K:
        return 0
    return homology_dims(K.link(b), reduced=True)[i - len(b) - 1]


def twisted_structure_sheaf_cohomology(K: SimplicialComplex, m: int) -> BettiVector:
    """H^p(P(K), O(m)) for p = 0..dim K"""
    if m < 0:
        raise UnsupportedError("Negative twists are not supported")
    if m == 0:
        return homology_dims(K, reduced=False)
    h0 = sum(comb(m - 1, len(f) - 1) for f in K.nonempty_faces())
    return BettiVector(0, (h0,) + (0,) * max(K.dim, 0))
