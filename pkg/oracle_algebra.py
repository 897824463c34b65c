"""
Brute-force graded T^0, T^1 and T^2 of Stanley-Reisner rings from the
monomial presentation, by exact linear algebra in one multidegree at a time
"""
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from complex_core import EMPTY, Multidegree, SimplicialComplex, VertexSet, sorted_faces
from config import ORACLE_MAX_A, ORACLE_MAX_B, PARALLEL_WORKERS, RANDOM_SEED
from exceptions import ResourceError, UsageError
from logger import get_logger, log_function_call
from utils import exact_rank, format_vertices

logger = get_logger(__name__)


@dataclass(frozen=True)
class MonomialIdealPresentation:
    """Squarefree monomial generators x_p of I_K, one per minimal non-face p"""
    generators: Tuple[VertexSet, ...]
    n_variables: int

    def divides_some_generator_of(self, support: VertexSet) -> bool:
        """True when the monomial with this support lies in the ideal"""
        return any(p <= support for p in self.generators)

    def to_dict(self):
        return {
            "n_variables": self.n_variables,
            "generators": [p.to_list() for p in self.generators],
        }


def minimal_nonfaces(K: SimplicialComplex) -> MonomialIdealPresentation:
    return MonomialIdealPresentation(tuple(K.minimal_nonfaces()), K.n_vertices)


def sample_membership(presentation: MonomialIdealPresentation, K: SimplicialComplex,
                      samples: int = 200, seed: int = RANDOM_SEED) -> Tuple[bool, str]:
    """
    Compare the ideal with I_K on random monomials

    A monomial lies in I_K exactly when its support is not a face.

    Returns:
        Tuple of (ideals_agree, message)
    """
    n = presentation.n_variables
    if n == 0:
        return True, "No variables"
    rng = np.random.default_rng(seed)
    exponents = rng.integers(0, 3, size=(samples, n))
    for row in exponents:
        support = VertexSet(int(v) for v in np.flatnonzero(row))
        if presentation.divides_some_generator_of(support) == (support in K):
            return False, f"Monomial with support {format_vertices(support)} is misclassified"
    return True, f"{samples} sampled monomials agree"


# -- derivations ------------------------------------------------------------

@dataclass
class DerivationModuleReport:
    """Whether T^0 is generated by the Euler derivations x_v ∂/∂x_v"""
    generated_by_euler: bool
    failing_faces: List[VertexSet]
    ideal_generators: Dict[int, List[VertexSet]] = field(default_factory=dict)

    def to_dict(self):
        return {
            "generated_by_euler": self.generated_by_euler,
            "failing_faces": [f.to_list() for f in self.failing_faces],
            "ideal_generators": {
                str(v): [a.to_list() for a in gens] for v, gens in self.ideal_generators.items()
            },
        }


def derivation_module_check(K: SimplicialComplex) -> DerivationModuleReport:
    """
    Every non-maximal face must lie in at least two facets; 𝔞_v is generated
    by the minimal x_a whose closed star lies in the closed star of v
    """
    facets = set(K.facets)
    failing = []
    for face in sorted_faces(K.faces):
        if face in facets:
            continue
        if sum(1 for F in K.facets if face <= F) < 2:
            failing.append(face)

    ideal_generators: Dict[int, List[VertexSet]] = {}
    for v in K.support:
        inside = [a for a in K.faces if all(v in F for F in K.facets if a <= F)]
        minimal = [a for a in inside if not any(b != a and b <= a for b in inside)]
        ideal_generators[v] = sorted_faces(minimal)

    return DerivationModuleReport(not failing, failing, ideal_generators)


# -- one multidegree --------------------------------------------------------

class GradedHomSpace:
    """
    Degree-c data of Hom(I, A) and of Hom(R/R_0, A)

    Every piece (A_K)_d is spanned by x^d when d ≥ 0 and supp(d) ∈ K, so a
    homomorphism is a coefficient per generator (λ_p) and per Taylor pair
    relation (μ_pq). Relations between pairs come from triples of generators.
    """

    def __init__(self, presentation: MonomialIdealPresentation, K: SimplicialComplex, c: Sequence[int]):
        if len(c) != presentation.n_variables:
            raise UsageError(f"Degree has {len(c)} entries, expected {presentation.n_variables}")
        self.K = K
        self.c = tuple(int(x) for x in c)
        self.generators = presentation.generators

        gens = self.generators
        self.lam: Dict[int, int] = {}
        for index, p in enumerate(gens):
            if self._alive(p):
                self.lam[index] = len(self.lam)

        self.pairs = list(itertools.combinations(range(len(gens)), 2))
        self.mu: Dict[Tuple[int, int], int] = {}
        for i, j in self.pairs:
            if self._alive(gens[i] | gens[j]):
                self.mu[(i, j)] = len(self.mu)

    def _alive(self, s: VertexSet, extra: VertexSet = EMPTY) -> bool:
        """x^{s + extra + c} is a nonzero monomial of A_K"""
        support = 0
        for v, entry in enumerate(self.c):
            e = entry + (v in s) + (v in extra)
            if e < 0:
                return False
            if e > 0:
                support |= 1 << v
        return VertexSet.from_bits(support) in self.K

    # T^1 -------------------------------------------------------------------

    def pair_constraints(self) -> Dict[Tuple[int, int], int]:
        entries: Dict[Tuple[int, int], int] = {}
        row = 0
        for i, j in self.pairs:
            in_i, in_j = i in self.lam, j in self.lam
            if not (in_i or in_j):
                continue
            if not self._alive(self.generators[i] | self.generators[j]):
                continue
            if in_i:
                entries[(row, self.lam[i])] = 1
            if in_j:
                entries[(row, self.lam[j])] = -1
            row += 1
        self._pair_rows = row
        return entries

    def hom_dim(self) -> int:
        entries = self.pair_constraints()
        return len(self.lam) - exact_rank(entries, (self._pair_rows, len(self.lam)))

    def derivation_image(self) -> Tuple[Dict[Tuple[int, int], int], int]:
        entries: Dict[Tuple[int, int], int] = {}
        row = 0
        for v in range(len(self.c)):
            if not self._alive(VertexSet((v,))):
                continue
            touched = False
            for index, column in self.lam.items():
                if v in self.generators[index]:
                    entries[(row, column)] = 1
                    touched = True
            if touched:
                row += 1
        return entries, row

    def derivation_rank(self) -> int:
        entries, rows = self.derivation_image()
        return exact_rank(entries, (rows, len(self.lam)))

    def t1_dim(self) -> int:
        return self.hom_dim() - self.derivation_rank()

    # T^2 -------------------------------------------------------------------

    def relation_constraints(self) -> Tuple[Dict[Tuple[int, int], int], int]:
        gens = self.generators
        entries: Dict[Tuple[int, int], int] = {}
        row = 0
        for i, j, k in itertools.combinations(range(len(gens)), 3):
            terms = [((j, k), 1), ((i, k), -1), ((i, j), 1)]
            present = [(self.mu[pair], sign) for pair, sign in terms if pair in self.mu]
            if not present or not self._alive(gens[i] | gens[j] | gens[k]):
                continue
            for column, sign in present:
                entries[(row, column)] = sign
            row += 1

        # ψ must vanish on the Koszul relation x^{gcd}·s_pq
        for (i, j), column in self.mu.items():
            if self._alive(gens[i] | gens[j], gens[i] & gens[j]):
                entries[(row, column)] = 1
                row += 1
        return entries, row

    def hom_image(self) -> Tuple[Dict[Tuple[int, int], int], int]:
        entries: Dict[Tuple[int, int], int] = {}
        row = 0
        for index in self.lam:
            touched = False
            for (i, j), column in self.mu.items():
                if index == i:
                    entries[(row, column)] = 1
                    touched = True
                elif index == j:
                    entries[(row, column)] = -1
                    touched = True
            if touched:
                row += 1
        return entries, row

    def t2_dim(self) -> int:
        if not self.mu:
            return 0
        constraints, rows = self.relation_constraints()
        kernel = len(self.mu) - exact_rank(constraints, (rows, len(self.mu)))
        image, image_rows = self.hom_image()
        return kernel - exact_rank(image, (image_rows, len(self.mu)))


def _check_caps(degree: Multidegree):
    if len(degree.b_set) > ORACLE_MAX_B or degree.a_total > ORACLE_MAX_A:
        raise ResourceError(
            f"Degree {degree} exceeds the oracle caps |b| <= {ORACLE_MAX_B}, sum(a) <= {ORACLE_MAX_A}"
        )


def t1_oracle_dim(K: SimplicialComplex, degree: Multidegree,
                  presentation: Optional[MonomialIdealPresentation] = None) -> int:
    _check_caps(degree)
    presentation = presentation or minimal_nonfaces(K)
    return GradedHomSpace(presentation, K, degree.to_vector(K.n_vertices)).t1_dim()


def t2_oracle_dim(K: SimplicialComplex, degree: Multidegree,
                  presentation: Optional[MonomialIdealPresentation] = None) -> int:
    _check_caps(degree)
    presentation = presentation or minimal_nonfaces(K)
    return GradedHomSpace(presentation, K, degree.to_vector(K.n_vertices)).t2_dim()


def graded_oracle(K: SimplicialComplex, i: int, degree: Multidegree) -> int:
    if i == 1:
        return t1_oracle_dim(K, degree)
    if i == 2:
        return t2_oracle_dim(K, degree)
    raise UsageError(f"Only T^1 and T^2 are available, got i = {i}")


# -- degree zero ------------------------------------------------------------

def degree_zero_degrees(K: SimplicialComplex, presentation: MonomialIdealPresentation) -> List[Tuple[int, ...]]:
    """All c of total degree 0 where some generator has a nonzero image"""
    n = presentation.n_variables
    degrees = set()
    for p in presentation.generators:
        for d in _face_monomials(K, len(p), n):
            degrees.add(tuple(d[v] - (v in p) for v in range(n)))
    return sorted(degrees)


def _face_monomials(K: SimplicialComplex, total: int, n: int) -> Iterator[List[int]]:
    """Exponent vectors of the given total degree whose support is a face"""
    for face in K.nonempty_faces():
        size = len(face)
        if size > total:
            continue
        vertices = list(face)
        # compositions of total into size positive parts
        for cuts in itertools.combinations(range(1, total), size - 1):
            parts = [b - a for a, b in zip((0,) + cuts, cuts + (total,))]
            exponent = [0] * n
            for v, e in zip(vertices, parts):
                exponent[v] = e
            yield exponent


@dataclass
class DegreeZeroOracle:
    hom: int
    derivation_rank: int
    t1: int

    def to_dict(self):
        return {"hom": self.hom, "derivation_rank": self.derivation_rank, "t1": self.t1}


@log_function_call
def degree_zero_oracle(K: SimplicialComplex, workers: Optional[int] = None) -> DegreeZeroOracle:
    """Hom_P(I, A)_0, the derivation image and T^1_{A,0} summed over multidegrees"""
    presentation = minimal_nonfaces(K)
    degrees = degree_zero_degrees(K, presentation)
    workers = workers or PARALLEL_WORKERS

    def solve(c):
        space = GradedHomSpace(presentation, K, c)
        hom = space.hom_dim()
        rank = space.derivation_rank()
        return hom, rank

    if workers > 1 and len(degrees) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve, degrees))
    else:
        results = [solve(c) for c in degrees]

    hom = sum(h for h, _ in results)
    rank = sum(r for _, r in results)
    logger.info(f"Degree zero oracle over {len(degrees)} multidegrees: hom = {hom}, derivations = {rank}")
    return DegreeZeroOracle(hom, rank, hom - rank)


def embedded_first_order_dim(K: SimplicialComplex) -> int:
    """dim Hom_P(I_K, A_K)_0, the first-order embedded deformations"""
    presentation = minimal_nonfaces(K)
    return sum(GradedHomSpace(presentation, K, c).hom_dim() for c in degree_zero_degrees(K, presentation))
