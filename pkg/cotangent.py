"""
Graded cotangent cohomology T^1, T^2 of Stanley-Reisner rings and the
projective invariants of combinatorial manifolds built from them
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Dict, List, Optional, Tuple

import pandas as pd

from complex_core import (
    FaceCounts, Multidegree, SimplicialComplex, VertexSet, boundary_simplex, cycle, cyclic3,
    f_vector_and_counts, is_closed_manifold, is_isomorphic, is_sphere_low_dim,
    require_closed_manifold, sorted_faces, suspension,
)
from config import PARALLEL_WORKERS
from exceptions import DomainError, UnsupportedError, UsageError, VerificationFailure
from logger import get_logger, log_function_call
from topology import UpClosedFamily, homology_dims, is_orientable, pair_cohomology_dims
from utils import format_vertices

logger = get_logger(__name__)

BASIS_RULE = "x_p ↦ x^a·x_{p∖b} if b ⊆ p, else 0"

METHOD_GENERAL = "general-topological"
METHOD_FAST_PATH = "manifold-fast-path"
METHOD_ORACLE = "oracle"


# -- U families and B(K) ----------------------------------------------------

def u_families(K: SimplicialComplex, b: VertexSet) -> Tuple[UpClosedFamily, UpClosedFamily]:
    """
    U_b = {f : f ∪ b ∉ K} and Ũ_b = {f : (f ∪ b) ∖ {v} ∉ K for some v ∈ b}

    Both are up-closed and Ũ_b ⊆ U_b; they equal K unless ∂b ⊆ K.
    """
    if not b:
        raise DomainError("b must be nonempty")
    if b.max_vertex() >= K.n_vertices:
        raise DomainError(f"{format_vertices(b)} is outside the vertex universe")

    faces = K.faces
    u_members = set()
    tilde_members = set()
    for f in faces:
        union = f | b
        if union not in faces:
            u_members.add(f)
        if any(union.remove(v) not in faces for v in b):
            tilde_members.add(f)
    return UpClosedFamily(K, frozenset(u_members)), UpClosedFamily(K, frozenset(tilde_members))


def tilde_u_is_empty(K: SimplicialComplex, b: VertexSet) -> bool:
    """Ũ_b = ∅, tested on facets only"""
    faces = K.faces
    if not faces:
        return True
    for F in K.facets:
        union = F | b
        if any(union.remove(v) not in faces for v in b):
            return False
    return True


def _boundary_in(K: SimplicialComplex, b: VertexSet) -> bool:
    return all(face in K for face in b.facets_of_boundary())


def b_set(K: SimplicialComplex) -> List[VertexSet]:
    """All b ⊆ [K] with |b| ≥ 2 and Ũ_b(K) = ∅ (K a closed manifold)"""
    require_closed_manifold(K)
    return _b_set_unchecked(K)


def _b_set_unchecked(K: SimplicialComplex) -> List[VertexSet]:
    candidates = [f for f in K.faces if len(f) >= 2]
    candidates.extend(p for p in K.minimal_nonfaces(K.support) if len(p) >= 2 and p <= K.support)
    return sorted_faces(b for b in candidates if tilde_u_is_empty(K, b))


# -- graded pieces ----------------------------------------------------------

def _in_range(K: SimplicialComplex, a: VertexSet, b: VertexSet) -> Optional[SimplicialComplex]:
    """link(a) when the degree a - b can be nonzero, else None"""
    if not b or a not in K or not a.isdisjoint(b):
        return None
    L = K.link(a)
    if not b <= L.support:
        return None
    return L


def t_graded_dim(K: SimplicialComplex, i: int, a: VertexSet, b: VertexSet) -> int:
    """
    dim T^i in degree a - b for i = 1, 2, from the pair cohomology
    H^{i-1}(⟨U_b(L)⟩, ⟨Ũ_b(L)⟩) with L = link(a), reduced when |b| = 1
    """
    if i not in (1, 2):
        raise UsageError(f"Only T^1 and T^2 are available, got i = {i}")
    L = _in_range(K, a, b)
    if L is None:
        return 0
    U, U_tilde = u_families(L, b)
    dims = pair_cohomology_dims(U, U_tilde, reduced=len(b) == 1)
    logger.debug(f"T^{i} at {format_vertices(a)} - {format_vertices(b)}: pair cohomology {dims.dims}")
    return dims[i - 1]


def t1_manifold_dim(K: SimplicialComplex, a: VertexSet, b: VertexSet) -> int:
    """1 iff b ∈ B(link(a, K)) (K a closed manifold); basis given by BASIS_RULE"""
    require_closed_manifold(K)
    return _t1_fast(K, a, b)


def _t1_fast(K: SimplicialComplex, a: VertexSet, b: VertexSet) -> int:
    L = _in_range(K, a, b)
    if L is None or len(b) < 2:
        return 0
    return 1 if tilde_u_is_empty(L, b) else 0


def l_b(L: SimplicialComplex, b: VertexSet) -> SimplicialComplex:
    """L_b: intersection of link(b', L) over proper nonempty b' ⊂ b"""
    common = None
    for sub in b.subsets():
        if not sub or sub == b:
            continue
        faces = set(L.link(sub).faces)
        common = faces if common is None else common & faces
    if common is None:
        return L
    return SimplicialComplex.from_faces(common, L.n_vertices)


def t2_manifold_dim(K: SimplicialComplex, a: VertexSet, b: VertexSet,
                    oriented: Optional[bool] = None) -> int:
    """
    dim T^2 in degree a - b on a closed manifold

    Spheres and oriented contexts use the homological shortcuts; other
    cases fall back to the pair cohomology formula.
    """
    require_closed_manifold(K)
    if not a and oriented is None:
        oriented = is_orientable(K)
    return _t2_fast(K, a, b, oriented)


def _t2_fast(K: SimplicialComplex, a: VertexSet, b: VertexSet, oriented_k: Optional[bool]) -> int:
    L = _in_range(K, a, b)
    if L is None or not _boundary_in(L, b):
        return 0

    n = L.dim
    # links of nonempty faces in a combinatorial manifold are spheres
    sphere = bool(a) or bool(is_sphere_low_dim(L))
    oriented = True if a else bool(oriented_k)

    if b not in L:
        if sphere:
            return homology_dims(l_b(L, b), reduced=True)[n - len(b)]
        return t_graded_dim(K, 2, a, b)

    if not oriented:
        return t_graded_dim(K, 2, a, b)
    if len(b) == 1:
        return homology_dims(L, reduced=True)[n - 1]
    if tilde_u_is_empty(L, b):
        return 0
    return max(homology_dims(l_b(L, b), reduced=True)[n - len(b)] - 1, 0)


@dataclass
class GradedPieceReport:
    """One graded piece T^i_{a-b}"""
    i: int
    degree: Multidegree
    dimension: int
    method: str
    basis: Optional[str] = None

    def to_dict(self):
        data = {"i": self.i, "dim": self.dimension, "method": self.method, "basis": self.basis}
        degree = self.degree.to_dict()
        data["a"] = degree["a"]
        data["b"] = degree["b"]
        return data


def graded_piece(K: SimplicialComplex, i: int, degree: Multidegree, use_oracle: bool = False) -> GradedPieceReport:
    """Compute T^i in one multidegree, using the fastest applicable method"""
    a, b = degree.a_support, degree.b_set
    if use_oracle:
        from oracle_algebra import graded_oracle
        return GradedPieceReport(i, degree, graded_oracle(K, i, degree), METHOD_ORACLE)

    try:
        manifold, _ = is_closed_manifold(K)
    except UnsupportedError:
        manifold = False

    if not manifold:
        return GradedPieceReport(i, degree, t_graded_dim(K, i, a, b), METHOD_GENERAL)

    if i == 1:
        dimension = _t1_fast(K, a, b)
        basis = BASIS_RULE if dimension == 1 else None
        return GradedPieceReport(1, degree, dimension, METHOD_FAST_PATH, basis)
    if i == 2:
        oriented = is_orientable(K) if not a else True
        return GradedPieceReport(2, degree, _t2_fast(K, a, b, oriented), METHOD_FAST_PATH)
    raise UsageError(f"Only T^1 and T^2 are available, got i = {i}")


# -- degree zero ------------------------------------------------------------

@dataclass(frozen=True)
class Contribution:
    i: int
    a: VertexSet
    b: VertexSet
    piece_dim: int
    multiplicity: int

    @property
    def total(self) -> int:
        return self.piece_dim * self.multiplicity

    def to_dict(self):
        return {
            "i": self.i,
            "a": self.a.to_list(),
            "b": self.b.to_list(),
            "dim": self.piece_dim,
            "multiplicity": self.multiplicity,
        }


@dataclass
class DegreeZeroSummary:
    """Contributions to T^1_{A,0} and T^2_{A,0} with the face counts behind them"""
    contributions: List[Contribution]
    t1_total: int
    t2_total: int
    face_counts: FaceCounts
    link_classes: Dict[str, int] = field(default_factory=dict)

    def total(self, i: int) -> int:
        return sum(c.total for c in self.contributions if c.i == i)

    def breakdown(self, i: int) -> Dict[int, int]:
        """Totals grouped by |a|"""
        frame = self.to_dataframe()
        frame = frame[frame["i"] == i]
        if frame.empty:
            return {}
        grouped = frame.groupby("a_size")["total"].sum()
        return {int(size): int(value) for size, value in grouped.items()}

    def to_dataframe(self) -> pd.DataFrame:
        rows = [
            {
                "i": c.i,
                "a": format_vertices(c.a),
                "b": format_vertices(c.b),
                "a_size": len(c.a),
                "b_size": len(c.b),
                "dim": c.piece_dim,
                "multiplicity": c.multiplicity,
                "total": c.total,
            }
            for c in self.contributions
        ]
        return pd.DataFrame(rows, columns=["i", "a", "b", "a_size", "b_size", "dim", "multiplicity", "total"])

    def to_dict(self):
        return {
            "t1_degree_zero": self.t1_total,
            "t2_degree_zero": self.t2_total,
            "breakdown": {
                "t1": {str(k): v for k, v in self.breakdown(1).items()},
                "t2": {str(k): v for k, v in self.breakdown(2).items()},
            },
            "contributions": [c.to_dict() for c in self.contributions],
            "face_counts": self.face_counts.to_dict(),
            "link_classes": dict(self.link_classes),
        }


def _contributions_at(K: SimplicialComplex, a: VertexSet, oriented: bool) -> List[Contribution]:
    L = K.link(a)
    candidates = set(f for f in L.faces if len(f) >= len(a))
    candidates.update(
        p for p in L.minimal_nonfaces(L.support) if p <= L.support and len(p) >= len(a)
    )
    found = []
    for b in sorted_faces(candidates):
        if not b:
            continue
        multiplicity = comb(len(b) - 1, len(a) - 1)
        t1 = _t1_fast(K, a, b)
        if t1:
            found.append(Contribution(1, a, b, t1, multiplicity))
        t2 = _t2_fast(K, a, b, oriented)
        if t2:
            found.append(Contribution(2, a, b, t2, multiplicity))
    return found


@log_function_call
def degree_zero_totals(K: SimplicialComplex, workers: Optional[int] = None) -> DegreeZeroSummary:
    """
    dim T^i_{A,0} as a sum over faces a ≠ ∅ and contributing b of
    (piece dimension) × C(|b|-1, |a|-1), the number of exponent vectors
    supported on a with total degree |b|
    """
    d = require_closed_manifold(K)
    oriented = is_orientable(K)
    faces = K.nonempty_faces()
    workers = workers or PARALLEL_WORKERS

    if workers > 1 and len(faces) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_face = list(pool.map(lambda a: _contributions_at(K, a, oriented), faces))
    else:
        per_face = [_contributions_at(K, a, oriented) for a in faces]

    contributions = [c for found in per_face for c in found]
    link_classes: Dict[str, int] = {}
    if d == 3:
        for v in K.support:
            label = classify_vertex_link(K.link(VertexSet((v,))))
            link_classes[label] = link_classes.get(label, 0) + 1

    summary = DegreeZeroSummary(
        contributions=contributions,
        t1_total=sum(c.total for c in contributions if c.i == 1),
        t2_total=sum(c.total for c in contributions if c.i == 2),
        face_counts=f_vector_and_counts(K),
        link_classes=link_classes,
    )
    logger.info(f"Degree zero: dim T^1 = {summary.t1_total}, dim T^2 = {summary.t2_total}")
    return summary


# -- link classification ----------------------------------------------------

def classify_vertex_link(L: SimplicialComplex) -> str:
    """Name a 2-sphere link as boundary-simplex, suspension:E<m>, cyclic3:<m> or other"""
    f0 = len(L.support)
    if L.dim != 2:
        return "other"
    if f0 == 4 and is_isomorphic(L, boundary_simplex(3)):
        return "boundary-simplex"
    if f0 >= 5 and is_isomorphic(L, suspension(cycle(f0 - 2))):
        return f"suspension:E{f0 - 2}"
    if f0 >= 6 and is_isomorphic(L, cyclic3(f0)):
        return f"cyclic3:{f0}"
    return "other"


# -- formulas for surfaces and 3-folds --------------------------------------

def _top_cohomology(K: SimplicialComplex, degree: int) -> int:
    return homology_dims(K, reduced=False)[degree]


@dataclass
class SurfaceFormulaReport:
    t1_projective: int
    t1_projective_alternative: int
    t2_affine_degree_zero: int
    h2_theta: int
    h2: int
    euler_identity_holds: bool
    rigid: bool = False

    def to_dict(self):
        return {
            "t1_projective": self.t1_projective,
            "t1_projective_alternative": self.t1_projective_alternative,
            "t2_degree_zero": self.t2_affine_degree_zero,
            "h2_theta": self.h2_theta,
            "h2": self.h2,
            "euler_identity_holds": self.euler_identity_holds,
            "rigid": self.rigid,
        }


@log_function_call
def surface_formulas(K: SimplicialComplex) -> SurfaceFormulaReport:
    require_closed_manifold(K, dimension=2)
    counts = f_vector_and_counts(K)
    h2 = _top_cohomology(K, 2)
    chi = counts.euler_characteristic
    f0, f1 = counts.f_vector[0], counts.f_vector[1]
    vertex_counts = {k: c for (i, k), c in counts.counts.items() if i == 0}

    first = 4 * vertex_counts.get(3, 0) + 2 * vertex_counts.get(4, 0) + f1 + h2
    second = f0 + 9 * chi + h2 + sum(2 * (k - 5) * c for k, c in vertex_counts.items() if k >= 6)
    t2 = sum(k * (k - 5) * c // 2 for k, c in vertex_counts.items() if k >= 6)
    euler_identity = 6 * chi == sum((6 - k) * c for k, c in vertex_counts.items())

    if first != second:
        raise VerificationFailure(f"Surface T^1 forms disagree: {first} != {second}")
    return SurfaceFormulaReport(first, second, t2, 0, h2, euler_identity)


@dataclass
class ThreefoldReport:
    t1_projective: int
    d3: int
    e3: int
    e4: int
    e_ge5: int
    c_ge6: int
    f1_3: int
    f1_4: int
    h2: int
    unclassified: List[int] = field(default_factory=list)

    def to_dict(self):
        return {
            "t1_projective": self.t1_projective,
            "counters": {
                "d3": self.d3, "e3": self.e3, "e4": self.e4, "e_ge5": self.e_ge5,
                "c_ge6": self.c_ge6, "f1_3": self.f1_3, "f1_4": self.f1_4,
            },
            "h2": self.h2,
            "unclassified_vertices": self.unclassified,
        }


@log_function_call
def threefold_formula(K: SimplicialComplex) -> ThreefoldReport:
    require_closed_manifold(K, dimension=3)
    counters = {"d3": 0, "e3": 0, "e4": 0, "e_ge5": 0, "c_ge6": 0}
    unclassified = []
    for v in K.support:
        label = classify_vertex_link(K.link(VertexSet((v,))))
        if label == "boundary-simplex":
            counters["d3"] += 1
        elif label == "suspension:E3":
            counters["e3"] += 1
        elif label == "suspension:E4":
            counters["e4"] += 1
        elif label.startswith("suspension:"):
            counters["e_ge5"] += 1
        elif label.startswith("cyclic3:"):
            counters["c_ge6"] += 1
        else:
            unclassified.append(v)
    if unclassified:
        logger.warning(f"{len(unclassified)} vertex link(s) match no listed family; they add nothing")

    counts = f_vector_and_counts(K)
    h2 = _top_cohomology(K, 2)
    f1_3, f1_4 = counts.count(1, 3), counts.count(1, 4)
    value = (11 * counters["d3"] + 5 * counters["e3"] + 3 * counters["e4"] + counters["e_ge5"]
             + counters["c_ge6"] + 5 * f1_3 + 2 * f1_4 + h2)
    return ThreefoldReport(value, f1_3=f1_3, f1_4=f1_4, h2=h2, unclassified=unclassified, **counters)


# -- projective invariants --------------------------------------------------

@dataclass
class ThetaReport:
    """Tangent sheaf cohomology and T^i of P(K)"""
    h0_theta: int
    h_theta: Dict[int, int]
    t1_affine_degree_zero: int
    t1_projective: int
    t2_affine_degree_zero: int
    h2_theta: int
    t2_bound: str = "partial"

    def to_dict(self):
        return {
            "h0_theta": self.h0_theta,
            "h_theta": {str(p): v for p, v in self.h_theta.items()},
            "t1_degree_zero": self.t1_affine_degree_zero,
            "t1_projective": self.t1_projective,
            "t2_degree_zero": self.t2_affine_degree_zero,
            "h2_theta": self.h2_theta,
            "t2_bound": self.t2_bound,
        }


def theta_and_projective_dims(K: SimplicialComplex, summary: Optional[DegreeZeroSummary] = None) -> ThetaReport:
    """
    h^0(Θ) = n + dim H^1(K), h^p(Θ) = dim H^{p+1}(K) for p ≥ 1 and
    dim T^1_P = dim H^2(K) + dim T^1_{A,0}

    T^2_P is only bracketed: h^2(Θ) injects into it and T^2_{A,0} injects
    into the sections of the local T^2 sheaf, which are not computed.
    """
    d = require_closed_manifold(K)
    betti = homology_dims(K, reduced=False)
    summary = summary or degree_zero_totals(K)
    h_theta = {p: betti[p + 1] for p in range(1, d + 1)}
    return ThetaReport(
        h0_theta=len(K.support) - 1 + betti[1],
        h_theta=h_theta,
        t1_affine_degree_zero=summary.t1_total,
        t1_projective=betti[2] + summary.t1_total,
        t2_affine_degree_zero=summary.t2_total,
        h2_theta=betti[3],
    )


@dataclass
class RigidityReport:
    rigid: bool
    h2: int
    low_valency_edges: List[Tuple[List[int], int]]

    def to_dict(self):
        return {
            "rigid": self.rigid,
            "h2": self.h2,
            "low_valency_edges": [{"edge": e, "valency": k} for e, k in self.low_valency_edges],
        }


@log_function_call
def is_rigid(K: SimplicialComplex) -> RigidityReport:
    """Sufficient rigidity test for 3-manifolds: H^2 = 0 and every edge has valency ≥ 5"""
    require_closed_manifold(K, dimension=3)
    counts = f_vector_and_counts(K)
    witnesses = [
        (edge.to_list(), counts.valencies[edge])
        for edge in K.edges()
        if counts.valencies[edge] < 5
    ]
    h2 = _top_cohomology(K, 2)
    return RigidityReport(rigid=h2 == 0 and not witnesses, h2=h2, low_valency_edges=witnesses)
