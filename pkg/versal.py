"""
Normal-form deformation equations of the cones over the n-gons, the versal
base ideals of surface triangulations with valencies at most six, and the
Krull dimension of those bases
"""
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sympy.polys import polyconfig as config
from sympy.polys.domains import QQ
from sympy.polys.groebnertools import groebner, is_groebner
from sympy.polys.orderings import grevlex
from sympy.polys.ring_series import rs_mul, rs_pow, rs_series_from_list, rs_series_inversion, rs_trunc
from sympy.polys.rings import ring

from complex_core import SimplicialComplex, VertexSet, require_closed_manifold
from config import (
    DEFAULT_ORDER, E6_MAX_ORDER, JACOBIAN_SAMPLES, KRULL_MAX_VARIABLES, PARALLEL_WORKERS, RANDOM_SEED,
)
from exceptions import ResourceError, UnsupportedError, UsageError, VerificationFailure
from logger import get_logger, log_function_call
from utils import exact_rank

logger = get_logger(__name__)

NORMAL_FORM_SIZES = (3, 4, 5, 6)
GRADING = "eps"

VALENCY_LIMIT = 6
EXACT_REGULAR = "regular-degree-6"
EXACT_ISOLATED = "isolated-hexagons"
FIRST_ORDER_ONLY = "first-order-only"

KRULL_METHODS = ("auto", "groebner")


# -- the functional equation x·p^4 = p + 1 ----------------------------------

@dataclass(frozen=True)
class PowerSeries:
    """Solution of x·p(x)^4 = p(x) + 1 with p(0) = -1, known up to x^order"""
    coefficients: Tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def polynomial(self):
        R, x = ring("x", QQ)
        return sum((c * x**k for k, c in enumerate(self.coefficients)), R.zero)

    def residual(self):
        """x·p^4 - p - 1 modulo x^(order + 1)"""
        p = self.polynomial()
        x = p.ring.gens[0]
        precision = self.order + 1
        return rs_trunc(x * rs_pow(p, 4, x, precision) - p - 1, x, precision)

    def to_dict(self):
        return {"order": self.order, "coefficients": list(self.coefficients)}


def p_series(order: int) -> PowerSeries:
    """
    Coefficients by the recurrence p_0 = -1, p_k = [x^(k-1)] p^4

    The coefficient of x^(k-1) in p^4 only involves p_0..p_(k-1), so each
    step uses the series known so far.
    """
    if order < 0:
        raise UsageError(f"Series order must be non-negative, got {order}")
    R, x = ring("x", QQ)
    p = R(-1)
    coefficients = [-1]
    for k in range(1, order + 1):
        value = rs_pow(p, 4, x, k).get((k - 1,), QQ.zero)
        if value.denominator != 1:
            raise VerificationFailure(f"Coefficient p_{k} = {value} is not an integer")
        coefficients.append(int(value.numerator))
        p += value * x**k
    return PowerSeries(tuple(coefficients))


# -- truncated series ---------------------------------------------------------

class SeriesSpace:
    """
    Polynomials in named parameters and coordinates, truncated in total
    parameter degree

    Every parameter carries one factor of a grading variable, so truncating
    in that variable truncates in parameter degree and never touches the
    coordinates.
    """

    def __init__(self, parameters: Sequence[str], coordinates: Sequence[str], order: int):
        self.parameters = tuple(parameters)
        self.coordinates = tuple(coordinates)
        self.order = order
        self.precision = order + 1

        names = self.parameters + self.coordinates
        self.graded, *graded_gens = ring(",".join((GRADING,) + names), QQ, grevlex)
        self.plain, *plain_gens = ring(",".join(names), QQ, grevlex)
        self.eps = graded_gens[0]
        self._graded = dict(zip(names, graded_gens[1:]))
        self.plain_gens = dict(zip(names, plain_gens))

    def parameter(self, name: str) -> "TruncatedSeries":
        if name not in self.parameters:
            raise UsageError(f"Unknown parameter {name}")
        return TruncatedSeries(self, rs_trunc(self.eps * self._graded[name], self.eps, self.precision))

    def coordinate(self, name: str) -> "TruncatedSeries":
        if name not in self.coordinates:
            raise UsageError(f"Unknown coordinate {name}")
        return TruncatedSeries(self, self._graded[name])

    def constant(self, value) -> "TruncatedSeries":
        return TruncatedSeries(self, self.graded(value))

    def zero(self) -> "TruncatedSeries":
        return TruncatedSeries(self, self.graded.zero)

    def to_plain(self, poly):
        return self.plain.from_dict({monom[1:]: coeff for monom, coeff in poly.items()})

    def at_origin(self, poly):
        return self.plain.from_dict({monom[1:]: coeff for monom, coeff in poly.items() if monom[0] == 0})


class TruncatedSeries:
    """An element of a SeriesSpace; products are truncated as they are formed"""
    __slots__ = ("space", "poly")

    def __init__(self, space: SeriesSpace, poly):
        self.space = space
        self.poly = poly

    def _lift(self, other):
        if isinstance(other, TruncatedSeries):
            return other.poly
        return self.space.graded(other)

    def __add__(self, other) -> "TruncatedSeries":
        return TruncatedSeries(self.space, self.poly + self._lift(other))

    __radd__ = __add__

    def __sub__(self, other) -> "TruncatedSeries":
        return TruncatedSeries(self.space, self.poly - self._lift(other))

    def __rsub__(self, other) -> "TruncatedSeries":
        return TruncatedSeries(self.space, self._lift(other) - self.poly)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(self.space, -self.poly)

    def __mul__(self, other) -> "TruncatedSeries":
        space = self.space
        return TruncatedSeries(space, rs_mul(self.poly, self._lift(other), space.eps, space.precision))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "TruncatedSeries":
        if exponent == 0:
            return self.space.constant(1)
        space = self.space
        return TruncatedSeries(space, rs_pow(self.poly, exponent, space.eps, space.precision))

    def inverse(self) -> "TruncatedSeries":
        """Needs a nonzero constant term; every other term has positive parameter degree"""
        space = self.space
        return TruncatedSeries(space, rs_series_inversion(self.poly, space.eps, space.precision))

    def substitute_into(self, coefficients: Sequence[int]) -> "TruncatedSeries":
        """Σ coefficients[k]·self^k"""
        space = self.space
        return TruncatedSeries(
            space, rs_series_from_list(self.poly, list(coefficients), space.eps, space.precision, concur=0)
        )

    def is_zero(self) -> bool:
        return not self.poly

    def plain(self):
        return self.space.to_plain(self.poly)

    def at_origin(self):
        """All parameters set to 0"""
        return self.space.at_origin(self.poly)

    def __str__(self) -> str:
        return str(self.plain())


def polynomial_terms(poly, parameters: Iterable[str]) -> List[Dict]:
    """JSON term list in the ring's degrevlex order"""
    parameter_names = set(parameters)
    names = [str(symbol) for symbol in poly.ring.symbols]
    terms = []
    for monom, coeff in poly.terms():
        params = {name: e for name, e in zip(names, monom) if e and name in parameter_names}
        ys = {name: e for name, e in zip(names, monom) if e and name not in parameter_names}
        terms.append({"coeff": str(coeff), "params": params, "ys": ys})
    return terms


def _minors(matrix) -> list:
    top, bottom = matrix
    return [top[a] * bottom[b] - top[b] * bottom[a] for a, b in itertools.combinations(range(len(top)), 2)]


# -- normal forms -------------------------------------------------------------

def _index(i: int, n: int) -> int:
    """Cyclic index in 1..n"""
    return (i - 1) % n + 1


def _parameter_names(n: int, top: int) -> List[str]:
    if n == 3:
        return ["u"] + [f"t{i}_{k}" for k in range(0, top + 1) for i in range(1, 4)]
    if n == 4:
        return ["u", "v"] + [f"t{i}_{k}" for k in range(1, top + 1) for i in range(1, 5)]
    if n == 5:
        return [f"t{i}_{k}" for k in range(1, top + 1) for i in range(1, 6)]
    # the obstruction matrix variables lead the order
    leading = [f"t{i}_1" for i in (1, 3, 5, 4, 6, 2)]
    return leading + [f"t{i}_{k}" for k in range(2, top + 1) for i in range(1, 7)]


@dataclass
class NormalForm:
    """
    Equations of a deformation of the cone over the n-gon

    `equations` is keyed by the sorted indices of the monomial each equation
    lifts; `series` keeps the named ingredients (y_i, t_i, s_i, T_i, e, f).
    """
    n: int
    order: int
    space: SeriesSpace
    equations: Dict[Tuple[int, ...], TruncatedSeries]
    base_relations: list = field(default_factory=list)
    series: Dict[str, TruncatedSeries] = field(default_factory=dict)

    def equation(self, *indices: int) -> TruncatedSeries:
        return self.equations[tuple(sorted(_index(i, self.n) for i in indices))]

    def stanley_reisner_generators(self) -> Dict[Tuple[int, ...], object]:
        y = {i: self.space.plain_gens[f"y{i}"] for i in range(1, self.n + 1)}
        if self.n == 3:
            return {(1, 2, 3): y[1] * y[2] * y[3]}
        return {
            (i, j): y[i] * y[j]
            for i, j in itertools.combinations(range(1, self.n + 1), 2)
            if 2 <= j - i <= self.n - 2
        }

    def specialization(self) -> Dict[Tuple[int, ...], object]:
        return {key: equation.at_origin() for key, equation in self.equations.items()}

    def specializes_to_stanley_reisner(self) -> bool:
        return self.specialization() == self.stanley_reisner_generators()

    def to_dict(self):
        return {
            "n": self.n,
            "order": self.order,
            "parameters": list(self.space.parameters),
            "base_relations": [str(r) for r in self.base_relations],
            "equations": [
                {
                    "lifts": list(key),
                    "text": str(equation),
                    "terms": polynomial_terms(equation.plain(), self.space.parameters),
                }
                for key, equation in sorted(self.equations.items())
            ],
        }


def _hypersurface(space: SeriesSpace, top: int) -> NormalForm:
    y = {i: space.coordinate(f"y{i}") for i in range(1, 4)}
    equation = y[1] * y[2] * y[3] + space.parameter("u")
    for i in range(1, 4):
        tail = sum((space.parameter(f"t{i}_{k}") * y[i] ** k for k in range(1, top + 1)), space.zero())
        equation = equation + y[i] * (space.parameter(f"t{i}_0") + tail)
    return NormalForm(3, space.order, space, {(1, 2, 3): equation})


def _tails(space: SeriesSpace, n: int, top: int, y) -> Dict[int, TruncatedSeries]:
    """T_i = Σ_{k≥1} t_i^(k) y_i^(k-1)"""
    return {
        i: sum((space.parameter(f"t{i}_{k}") * y[i] ** (k - 1) for k in range(1, top + 1)), space.zero())
        for i in range(1, n + 1)
    }


def _complete_intersection(space: SeriesSpace, top: int) -> NormalForm:
    y = {i: space.coordinate(f"y{i}") for i in range(1, 5)}
    T = _tails(space, 4, top, y)
    equations = {
        (1, 3): y[1] * y[3] + space.parameter("u") + y[2] * T[2] + y[4] * T[4],
        (2, 4): y[2] * y[4] + space.parameter("v") + y[1] * T[1] + y[3] * T[3],
    }
    series = {f"y{i}": y[i] for i in y}
    series.update({f"T{i}": T[i] for i in T})
    return NormalForm(4, space.order, space, equations, series=series)


def _pfaffian(space: SeriesSpace, top: int) -> NormalForm:
    y = {i: space.coordinate(f"y{i}") for i in range(1, 6)}
    T = _tails(space, 5, top, y)
    equations = {}
    for i in range(1, 6):
        key = tuple(sorted((_index(i - 1, 5), _index(i + 1, 5))))
        equations[key] = (y[_index(i - 1, 5)] * y[_index(i + 1, 5)] + y[i] * T[i]
                          - T[_index(i - 2, 5)] * T[_index(i + 2, 5)])
    series = {f"y{i}": y[i] for i in y}
    series.update({f"T{i}": T[i] for i in T})
    return NormalForm(5, space.order, space, equations, series=series)


def _first_obstructed(space: SeriesSpace, top: int) -> NormalForm:
    y = {i: space.coordinate(f"y{i}") for i in range(1, 7)}
    t = {i: space.parameter(f"t{i}_1") for i in range(1, 7)}
    s = {
        i: sum((space.parameter(f"t{i}_{k}") * y[i] ** (k - 2) for k in range(2, top + 1)), space.zero())
        for i in range(1, 7)
    }
    product = space.constant(1)
    for i in range(1, 7):
        product = product * s[i]
    f = product.substitute_into(p_series(space.order).coefficients)
    e = f * (f + 2).inverse()

    def at(i: int) -> int:
        return _index(i, 6)

    equations = {}
    for i in range(1, 7):
        m2, m1, p1, p2, p3 = at(i - 2), at(i - 1), at(i + 1), at(i + 2), at(i + 3)
        equations[tuple(sorted((m1, p1)))] = (
            y[m1] * y[p1] + (t[i] + s[i] * y[i]) * y[i]
            + s[p3] * (e * e * t[m2] * t[p2] + e * f * s[p2] * t[m2] * y[p2] + e * f * t[p2] * s[m2] * y[m2])
            - s[m2] * s[p2] * (e * t[p3] + f * s[p3] * y[p3]) ** 2
            + e * e * f * f * s[m2] * s[m1] * s[p1] * s[p2] * s[p3] * t[i] * t[i]
        )
    for i in range(1, 4):
        m2, m1, p1, p2, p3 = at(i - 2), at(i - 1), at(i + 1), at(i + 2), at(i + 3)
        equations[(i, p3)] = (
            y[i] * y[p3] + e * t[p1] * t[p2]
            + e * t[p2] * s[p1] * y[p1] + e * t[p1] * s[p2] * y[p2] + f * s[p1] * s[p2] * y[p1] * y[p2]
            + e * t[m2] * s[m1] * y[m1] + e * t[m1] * s[m2] * y[m2] + f * s[m1] * s[m2] * y[m1] * y[m2]
            - e * e * f * f * s[m2] * s[m1] * s[p1] * s[p2] * t[i] * t[p3]
        )

    g = {i: space.plain_gens[f"t{i}_1"] for i in range(1, 7)}
    base = _minors(((g[1], g[3], g[5]), (g[4], g[6], g[2])))

    series = {"e": e, "f": f, "f_inverse": f.inverse()}
    for i in range(1, 7):
        series[f"y{i}"], series[f"t{i}"], series[f"s{i}"] = y[i], t[i], s[i]
    return NormalForm(6, space.order, space, equations, base, series)


@log_function_call
def normal_form(n: int, order: int = DEFAULT_ORDER, max_superscript: Optional[int] = None) -> NormalForm:
    """
    Deformation equations of Z_n truncated at parameter degree `order`

    Parameters t_i^(k) are generated for k up to `order`, or up to
    `max_superscript` when that is smaller.
    """
    if n not in NORMAL_FORM_SIZES:
        raise UnsupportedError(f"Normal forms exist for n in {NORMAL_FORM_SIZES}, got {n}")
    if order < 1:
        raise UsageError(f"Truncation order must be at least 1, got {order}")
    top = order if max_superscript is None else min(order, max_superscript)

    space = SeriesSpace(_parameter_names(n, top), [f"y{i}" for i in range(1, n + 1)], order)
    builders = {3: _hypersurface, 4: _complete_intersection, 5: _pfaffian, 6: _first_obstructed}
    form = builders[n](space, top)
    logger.debug(f"Normal form of Z_{n}: {len(form.equations)} equations, {len(space.parameters)} parameters")
    return form


# -- lifting relations ----------------------------------------------------------

@dataclass
class LiftingRelation:
    """Σ coefficient·F_key, which must vanish modulo the base relations"""
    name: str
    terms: List[Tuple[TruncatedSeries, Tuple[int, ...]]]

    def evaluate(self, form: NormalForm) -> TruncatedSeries:
        total = form.space.zero()
        for coefficient, key in self.terms:
            total = total + coefficient * form.equations[key]
        return total

    def with_flipped_sign(self, position: int) -> "LiftingRelation":
        terms = list(self.terms)
        coefficient, key = terms[position]
        terms[position] = (-coefficient, key)
        return LiftingRelation(f"{self.name} (sign {position} flipped)", terms)


def dihedral_group(n: int) -> List[Callable[[int], int]]:
    """Rotations i ↦ i + k and reflections i ↦ k - i on 1..n"""
    return [
        (lambda i, sign=sign, shift=shift: _index(sign * i + shift, n))
        for sign in (1, -1)
        for shift in range(n)
    ]


def _pair(g: Callable[[int], int], a: int, b: int) -> Tuple[int, int]:
    return tuple(sorted((g(a), g(b))))


def _e6_first_lifting(form: NormalForm, g: Callable[[int], int]) -> List[Tuple[TruncatedSeries, Tuple[int, int]]]:
    """Lifts y5·(y1y3) - y1·(y3y5), moved by g"""
    y = lambda k: form.series[f"y{g(k)}"]
    t = lambda k: form.series[f"t{g(k)}"]
    s = lambda k: form.series[f"s{g(k)}"]
    e, f = form.series["e"], form.series["f"]
    return [
        (y(5) + e * f ** 3 * s(2) * s(3) * s(4) * s(1) * s(6) * t(5), _pair(g, 1, 3)),
        (-(y(1) + e * f ** 3 * s(2) * s(3) * s(4) * s(5) * s(6) * t(1)), _pair(g, 3, 5)),
        (s(4) * s(6) * (e * f * t(5) + f ** 2 * s(5) * y(5)), _pair(g, 4, 6)),
        (-(s(2) * s(6) * (e * f * t(1) + f ** 2 * s(1) * y(1))), _pair(g, 2, 6)),
        (-(e * t(4) + f * s(4) * y(4)), _pair(g, 1, 4)),
        (e * t(2) + f * s(2) * y(2), _pair(g, 2, 5)),
    ]


def _e6_second_lifting(form: NormalForm, g: Callable[[int], int]) -> List[Tuple[TruncatedSeries, Tuple[int, int]]]:
    """Lifts y6·(y1y3) - y1·(y3y6), moved by g"""
    y = lambda k: form.series[f"y{g(k)}"]
    t = lambda k: form.series[f"t{g(k)}"]
    s = lambda k: form.series[f"s{g(k)}"]
    e, f, f_inverse = form.series["e"], form.series["f"], form.series["f_inverse"]
    return [
        (y(6), _pair(g, 1, 3)),
        (e * f ** 2 * s(2) * s(3) * s(4) * s(5) * t(4), _pair(g, 2, 4)),
        (-((e * f * t(2) + f ** 2 * s(2) * y(2)) * s(3) * s(4) * s(5)), _pair(g, 3, 5)),
        (-(e * f * s(4) * s(5) * t(6)), _pair(g, 4, 6)),
        (e * t(4) * s(5), _pair(g, 1, 5)),
        (-(e * f_inverse * t(2) + s(2) * y(2)), _pair(g, 2, 6)),
        (s(4) * (e * t(5) + f * s(5) * y(5)), _pair(g, 1, 4)),
        (-y(1), _pair(g, 3, 6)),
    ]


def _e6_liftings(form: NormalForm) -> List[LiftingRelation]:
    templates = [((1, 3, 5), _e6_first_lifting), ((1, 3, 6), _e6_second_lifting)]
    relations, seen = [], set()
    for (a, m, c), build in templates:
        for g in dihedral_group(6):
            key = (c - a, g(m), frozenset((g(a), g(c))))
            if key in seen:
                continue
            seen.add(key)
            name = f"y{g(c)}(y{g(a)}y{g(m)}) - y{g(a)}(y{g(m)}y{g(c)})"
            relations.append(LiftingRelation(name, build(form, g)))
    return relations


def lifting_relations(form: NormalForm) -> List[LiftingRelation]:
    """Liftings of the relations among the generators of I_{Z_n}"""
    if form.n == 3:
        return []
    if form.n == 4:
        return [LiftingRelation("koszul", [(form.equation(2, 4), (1, 3)), (-form.equation(1, 3), (2, 4))])]
    if form.n == 5:
        y = lambda k: form.series[f"y{_index(k, 5)}"]
        T = lambda k: form.series[f"T{_index(k, 5)}"]
        key = lambda i: tuple(sorted((_index(i - 1, 5), _index(i + 1, 5))))
        return [
            LiftingRelation(f"pfaffian-{i}", [
                (y(i + 2), key(i)),
                (-y(i + 1), key(i + 3)),
                (-T(i), key(i + 1)),
                (T(i + 3), key(i + 2)),
            ])
            for i in range(1, 6)
        ]
    return _e6_liftings(form)


# -- verification -------------------------------------------------------------

@dataclass
class RelationCheck:
    name: str
    passed: bool
    residual: str = "0"
    residual_terms: int = 0

    def to_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "residual_terms": self.residual_terms,
        }


@dataclass
class VerificationReport:
    n: int
    order: int
    checks: List[RelationCheck]
    base_relations: List[str] = field(default_factory=list)
    specializes: bool = True

    @property
    def passed(self) -> bool:
        return self.specializes and all(check.passed for check in self.checks)

    def failures(self) -> List[RelationCheck]:
        return [check for check in self.checks if not check.passed]

    def to_dict(self):
        return {
            "n": self.n,
            "order": self.order,
            "passed": self.passed,
            "specializes": self.specializes,
            "base_relations": self.base_relations,
            "relations": [check.to_dict() for check in self.checks],
        }


def reduction_basis(form: NormalForm) -> list:
    """The base relations, or a Gröbner basis of them if they are not one already"""
    basis = list(form.base_relations)
    if not basis:
        return basis
    if not is_groebner(basis, form.space.plain):
        logger.warning("Base relations are not a Gröbner basis in this order; running Buchberger")
        with config.using(groebner="buchberger"):
            basis = groebner(basis, form.space.plain)
    return basis


def check_relations(form: NormalForm, relations: Sequence[LiftingRelation],
                    workers: Optional[int] = None) -> VerificationReport:
    basis = reduction_basis(form)

    def check(relation: LiftingRelation) -> RelationCheck:
        residual = relation.evaluate(form).plain()
        if basis:
            residual = residual.rem(basis)
        if residual:
            return RelationCheck(relation.name, False, str(residual), len(residual))
        return RelationCheck(relation.name, True)

    workers = workers or PARALLEL_WORKERS
    if workers > 1 and len(relations) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            checks = list(pool.map(check, relations))
    else:
        checks = [check(relation) for relation in relations]

    report = VerificationReport(
        form.n, form.order, checks, [str(r) for r in form.base_relations], form.specializes_to_stanley_reisner()
    )
    for failure in report.failures():
        logger.error(f"Relation {failure.name} does not lift: {failure.residual_terms} residual terms")
    if not report.specializes:
        logger.error(f"Normal form of Z_{form.n} does not specialize to the Stanley-Reisner ideal")
    return report


@log_function_call
def verify_normal_form_relations(n: int, order: int = DEFAULT_ORDER,
                                 workers: Optional[int] = None) -> VerificationReport:
    if n == 6 and order > E6_MAX_ORDER:
        raise ResourceError(f"Order {order} exceeds the n = 6 budget of {E6_MAX_ORDER} (SRDEF_E6_MAX_ORDER)")
    form = normal_form(n, order)
    report = check_relations(form, lifting_relations(form), workers)
    logger.info(f"Z_{n} at order {order}: {len(report.checks) - len(report.failures())}/{len(report.checks)} relations lift")
    return report


# -- versal base spaces -------------------------------------------------------

def edge_variable(i: int, j: int) -> str:
    a, b = sorted((i, j))
    return f"t_{a}_{b}"


def cyclic_link_order(K: SimplicialComplex, vertex: int) -> List[int]:
    """Vertices of the link cycle, starting at the smallest label and heading to its smaller neighbour"""
    adjacency = K.link(VertexSet((vertex,))).adjacency()
    start = min(adjacency)
    order = [start]
    previous, current = start, min(adjacency[start])
    while current != start:
        order.append(current)
        previous, current = current, next(w for w in sorted(adjacency[current]) if w != previous)
    return order


@dataclass
class VariableRegistry:
    """
    Coordinates of T^1_{A,0} for a surface with valencies at most six

    t_i_j per edge, v_i and v_i_j per valency-3 vertex, u_i_j per opposite
    pair in the link of a valency-4 vertex (the larger label is an alias).
    """
    names: List[str]
    aliases: Dict[str, str]
    valencies: Dict[int, int]
    link_orders: Dict[int, List[int]]

    def __post_init__(self):
        self._known = set(self.names)

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name: str) -> bool:
        return self.aliases.get(name, name) in self._known

    def resolve(self, name: str) -> str:
        canonical = self.aliases.get(name, name)
        if canonical not in self._known:
            raise UsageError(f"Unknown versal variable {name}")
        return canonical

    def to_dict(self):
        return {
            "n_variables": len(self.names),
            "variables": self.names,
            "aliases": dict(sorted(self.aliases.items())),
            "valencies": {str(v): k for v, k in sorted(self.valencies.items())},
        }


def _surface_link_orders(K: SimplicialComplex) -> Dict[int, List[int]]:
    require_closed_manifold(K, dimension=2)
    orders = {}
    for v in K.support:
        order = cyclic_link_order(K, v)
        if len(order) > VALENCY_LIMIT:
            raise UnsupportedError(f"Vertex {v} has valency {len(order)}; valencies above {VALENCY_LIMIT} are not supported")
        orders[v] = order
    return orders


@log_function_call
def versal_variables(K: SimplicialComplex) -> VariableRegistry:
    orders = _surface_link_orders(K)
    names = [edge_variable(*edge) for edge in K.edges()]
    aliases: Dict[str, str] = {}
    for v in sorted(orders):
        order = orders[v]
        if len(order) == 3:
            names.append(f"v_{v}")
            names.extend(f"v_{v}_{j}" for j in sorted(order))
        elif len(order) == 4:
            for first, second in ((order[0], order[2]), (order[1], order[3])):
                low, high = sorted((first, second))
                names.append(f"u_{v}_{low}")
                aliases[f"u_{v}_{high}"] = f"u_{v}_{low}"
    return VariableRegistry(names, aliases, {v: len(o) for v, o in orders.items()}, orders)


def hexagon_matrix(vertex: int, order: Sequence[int]) -> Tuple[Tuple[str, str, str], Tuple[str, str, str]]:
    g = [edge_variable(vertex, j) for j in order]
    return (g[0], g[2], g[4]), (g[3], g[5], g[1])


def _exactness(K: SimplicialComplex, valencies: Dict[int, int]) -> str:
    hexagons = {v for v, k in valencies.items() if k == 6}
    if hexagons and len(hexagons) == len(valencies):
        return EXACT_REGULAR
    if not any(u in hexagons and w in hexagons for u, w in K.edges()):
        return EXACT_ISOLATED
    return FIRST_ORDER_ONLY


@dataclass
class VersalIdeal:
    """Minors of one 2×3 matrix per valency-6 vertex, in the ring of the registry"""
    registry: VariableRegistry
    matrices: Dict[int, Tuple[Tuple[str, ...], Tuple[str, ...]]]
    exactness: str

    def __post_init__(self):
        self.ring, *gens = ring(",".join(self.registry.names), QQ, grevlex)
        self.variables = dict(zip(self.registry.names, gens))
        self.generators = [
            minor
            for vertex in sorted(self.matrices)
            for minor in _minors(tuple(tuple(self.variables[name] for name in row) for row in self.matrices[vertex]))
        ]

    @property
    def exact(self) -> bool:
        return self.exactness != FIRST_ORDER_ONLY

    def matrix_variables(self) -> List[FrozenSet[str]]:
        return [frozenset(itertools.chain(*self.matrices[v])) for v in sorted(self.matrices)]

    def to_dict(self):
        data = self.registry.to_dict()
        data.update({
            "matrices": {str(v): [list(row) for row in m] for v, m in sorted(self.matrices.items())},
            "minors": [str(g) for g in self.generators],
            "n_minors": len(self.generators),
            "exact": self.exact,
            "exactness": self.exactness,
        })
        return data


@log_function_call
def versal_ideal(K: SimplicialComplex) -> VersalIdeal:
    registry = versal_variables(K)
    hexagons = sorted(v for v, k in registry.valencies.items() if k == 6)
    matrices = {v: hexagon_matrix(v, registry.link_orders[v]) for v in hexagons}
    exactness = _exactness(K, registry.valencies)
    if exactness == FIRST_ORDER_ONLY:
        logger.warning("Adjacent valency-6 vertices: the minors ideal is certified to first order only")
    return VersalIdeal(registry, matrices, exactness)


@dataclass
class FirstOrderTable:
    """Per vertex i, the images t_j^(k) ↦ versal variable of the first-order normal form"""
    assignments: Dict[int, Dict[str, str]]

    def for_vertex(self, vertex: int) -> Dict[str, str]:
        return self.assignments[vertex]

    def to_dataframe(self) -> pd.DataFrame:
        rows = [
            {"vertex": vertex, "parameter": source, "variable": target}
            for vertex, row in sorted(self.assignments.items())
            for source, target in row.items()
        ]
        return pd.DataFrame(rows, columns=["vertex", "parameter", "variable"])

    def to_dict(self):
        return {str(vertex): dict(row) for vertex, row in sorted(self.assignments.items())}


@log_function_call
def first_order_table(K: SimplicialComplex) -> FirstOrderTable:
    registry = versal_variables(K)
    assignments = {}
    for i in sorted(registry.valencies):
        valency = registry.valencies[i]
        row: Dict[str, str] = {}
        if valency == 3:
            row["t^(-1)"] = f"v_{i}"
        for j in registry.link_orders[i]:
            if valency == 3:
                row[f"t_{j}^(0)"] = f"v_{i}_{j}"
            elif valency == 4:
                row[f"t_{j}^(0)"] = registry.resolve(f"u_{i}_{j}")
            row[f"t_{j}^(1)"] = edge_variable(i, j)
            if registry.valencies[j] == 3:
                row[f"t_{j}^(2)"] = f"v_{j}_{i}"
                row[f"t_{j}^(3)"] = f"v_{j}"
            elif registry.valencies[j] == 4:
                row[f"t_{j}^(2)"] = registry.resolve(f"u_{j}_{i}")
        assignments[i] = row
    return FirstOrderTable(assignments)


# -- Krull dimension ----------------------------------------------------------

def _packing_bound(sets: List[FrozenSet[int]]) -> int:
    """Pairwise disjoint members found greedily; each needs its own element"""
    used: set = set()
    count = 0
    for s in sorted(sets, key=len):
        if used.isdisjoint(s):
            used |= s
            count += 1
    return count


def minimum_hitting_set(supports: Iterable[FrozenSet[int]]) -> FrozenSet[int]:
    """Smallest set meeting every support, by branch and bound"""
    family = sorted(set(supports), key=lambda s: (len(s), sorted(s)))
    family = [s for s in family if not any(t < s for t in family)]
    if any(not s for s in family):
        raise UsageError("An empty support cannot be hit")
    best = frozenset().union(*family) if family else frozenset()

    def search(chosen: FrozenSet[int], open_sets: List[FrozenSet[int]]):
        nonlocal best
        if not open_sets:
            if len(chosen) < len(best):
                best = chosen
            return
        if len(chosen) + _packing_bound(open_sets) >= len(best):
            return
        target = min(open_sets, key=len)
        for v in sorted(target):
            search(chosen | {v}, [s for s in open_sets if v not in s])

    search(frozenset(), family)
    return best


def _dimension_from_supports(n: int, supports: List[FrozenSet[int]]) -> int:
    """Largest variable subset meeting no support; -1 for the unit ideal"""
    if any(not s for s in supports):
        return -1
    return n - len(minimum_hitting_set(supports))


def groebner_basis(polynomials: Sequence, R) -> list:
    """Reduced Buchberger basis, checked by reducing every S-polynomial"""
    with config.using(groebner="buchberger"):
        basis = groebner(list(polynomials), R)
    if not is_groebner(basis, R):
        raise VerificationFailure("Buchberger output failed the S-polynomial check")
    return basis


def coordinate_subspace(V: VersalIdeal) -> FrozenSet[int]:
    """Indices of the fewest variables whose vanishing kills every generator"""
    supports = [
        frozenset(i for i, e in enumerate(monom) if e)
        for g in V.generators
        for monom in g.monoms()
    ]
    return minimum_hitting_set(supports)


def coordinate_subspace_bound(V: VersalIdeal) -> int:
    """Dimension of the largest coordinate subspace inside V(𝔞_S), a lower bound for its dimension"""
    return len(V.registry) - len(coordinate_subspace(V))


def _evaluate(poly, point: Sequence[int]) -> Fraction:
    total = Fraction(0)
    for monom, coeff in poly.terms():
        value = Fraction(int(coeff.numerator), int(coeff.denominator))
        for x, e in zip(point, monom):
            if e:
                value *= x ** e
        total += value
    return total


def jacobian_dimension_bound(V: VersalIdeal, samples: int = JACOBIAN_SAMPLES,
                             seed: int = RANDOM_SEED) -> List[int]:
    """Tangent dimensions of V(𝔞_S) at random rational points of the coordinate subspace"""
    n = len(V.registry)
    if not V.generators:
        return [n] * samples
    zeroed = coordinate_subspace(V)
    partials = [[g.diff(x) for x in V.ring.gens] for g in V.generators]
    rng = np.random.default_rng(seed)
    dimensions = []
    for _ in range(samples):
        values = rng.integers(1, 10, size=n)
        point = [0 if j in zeroed else int(values[j]) for j in range(n)]
        entries = {}
        for row, derivatives in enumerate(partials):
            for col, derivative in enumerate(derivatives):
                value = _evaluate(derivative, point)
                if value:
                    entries[(row, col)] = value
        dimensions.append(n - exact_rank(entries, (len(partials), n)))
    return dimensions


@dataclass
class KrullReport:
    dimension: int
    method: str
    n_variables: int
    n_generators: int
    coordinate_bound: int
    tangent_dimensions: List[int] = field(default_factory=list)
    basis_size: Optional[int] = None

    @property
    def consistent(self) -> bool:
        return (self.coordinate_bound <= self.dimension
                and all(self.coordinate_bound <= d for d in self.tangent_dimensions))

    def to_dict(self):
        return {
            "dimension": self.dimension,
            "method": self.method,
            "n_variables": self.n_variables,
            "n_generators": self.n_generators,
            "coordinate_bound": self.coordinate_bound,
            "tangent_dimensions": self.tangent_dimensions,
            "basis_size": self.basis_size,
            "consistent": self.consistent,
        }


def matrices_disjoint(V: VersalIdeal) -> bool:
    variable_sets = V.matrix_variables()
    return sum(len(s) for s in variable_sets) == len(frozenset().union(*variable_sets))


@log_function_call
def krull_dimension(V: VersalIdeal, method: str = "auto", samples: int = JACOBIAN_SAMPLES,
                    seed: int = RANDOM_SEED) -> KrullReport:
    """
    Krull dimension of the polynomial ring modulo 𝔞_S

    Pairwise disjoint generic 2×3 matrices each cut codimension 2. Otherwise
    a degrevlex Buchberger basis is computed and the dimension read off its
    leading monomials; `method="groebner"` forces that path.
    """
    if method not in KRULL_METHODS:
        raise UsageError(f"Unknown method '{method}', expected one of {KRULL_METHODS}")
    n = len(V.registry)
    basis_size = None
    if not V.generators:
        dimension, used = n, "zero-ideal"
    elif method == "auto" and matrices_disjoint(V):
        dimension, used = n - 2 * len(V.matrices), "disjoint-matrices"
    else:
        if n > KRULL_MAX_VARIABLES:
            raise ResourceError(
                f"{n} variables exceed the Gröbner budget of {KRULL_MAX_VARIABLES} "
                f"(SRDEF_KRULL_MAX_VARIABLES); the matrices share variables, so the disjoint fast path does not apply"
            )
        basis = groebner_basis(V.generators, V.ring)
        supports = [frozenset(i for i, e in enumerate(g.LM) if e) for g in basis]
        dimension, used, basis_size = _dimension_from_supports(n, supports), "groebner", len(basis)

    report = KrullReport(
        dimension, used, n, len(V.generators), coordinate_subspace_bound(V),
        jacobian_dimension_bound(V, samples, seed), basis_size,
    )
    if not report.consistent:
        logger.error(f"Krull dimension {dimension} is below the coordinate subspace bound {report.coordinate_bound}")
    logger.info(f"Krull dimension {dimension} by {used} ({n} variables, {len(V.generators)} minors)")
    return report
