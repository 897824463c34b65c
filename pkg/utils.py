"""
Utility functions and helpers
"""
import re
import time
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Tuple, Union

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

from exceptions import ParseError
from logger import get_logger

logger = get_logger(__name__)

Number = Union[int, Fraction]

_VERTEX_TOKEN = re.compile(r'^\d+$')
_SIGNED_TOKEN = re.compile(r'^-?\d+$')
_SEPARATORS = re.compile(r'[\s,]+')


def validate_vertex_token(token: str) -> Tuple[bool, str]:
    """
    Validate a single vertex label

    Returns:
        Tuple of (is_valid, message)
    """
    if not token:
        return False, "Empty vertex label"

    if not _VERTEX_TOKEN.match(token):
        return False, f"Vertex label '{token}' is not a nonnegative integer"

    return True, "Valid vertex"


def split_tokens(text: str) -> List[str]:
    """Split on commas and whitespace, dropping empty pieces"""
    return [token for token in _SEPARATORS.split(text.strip()) if token]


def parse_vertex_list(text: str) -> List[int]:
    """Parse "1,4,7" or "1 4 7" into sorted distinct vertices"""
    vertices = set()
    for token in split_tokens(text):
        ok, message = validate_vertex_token(token)
        if not ok:
            raise ParseError(message)
        vertices.add(int(token))
    return sorted(vertices)


def parse_multiplicity_list(text: str) -> Dict[int, int]:
    """
    Parse a vertex:multiplicity list such as "0:2,3:1"

    A bare vertex means multiplicity 1.
    """
    exponents: Dict[int, int] = {}
    for token in split_tokens(text):
        vertex, _, power = token.partition(':')
        ok, message = validate_vertex_token(vertex)
        if not ok:
            raise ParseError(message)
        if power and not _VERTEX_TOKEN.match(power):
            raise ParseError(f"Multiplicity '{power}' is not a nonnegative integer")
        exponents[int(vertex)] = exponents.get(int(vertex), 0) + (int(power) if power else 1)
    return {v: e for v, e in sorted(exponents.items()) if e > 0}


def parse_integer_vector(text: str) -> List[int]:
    """Parse "-1,0,0,-1" into a list of integers, order kept"""
    values = []
    for token in split_tokens(text):
        if not _SIGNED_TOKEN.match(token):
            raise ParseError(f"Entry '{token}' is not an integer")
        values.append(int(token))
    return values


def format_vertices(vertices: Iterable[int]) -> str:
    """Format a vertex collection as {0,1,2}"""
    return "{" + ",".join(str(v) for v in vertices) + "}"


def exact_rank(entries: Mapping[Tuple[int, int], Number], shape: Tuple[int, int]) -> int:
    """
    Rank over the rationals of a sparse matrix given as {(row, col): value}

    Zero entries may be present; they are dropped before elimination.
    """
    rows, cols = shape
    if rows == 0 or cols == 0:
        return 0

    sparse: Dict[int, Dict[int, object]] = {}
    for (i, j), value in entries.items():
        if value:
            if isinstance(value, Fraction):
                element = QQ(value.numerator, value.denominator)
            else:
                element = QQ(value)
            sparse.setdefault(i, {})[j] = element

    if not sparse:
        return 0

    return DomainMatrix(sparse, shape, QQ).rank()


class Timer:
    """Context manager for timing code execution"""

    def __init__(self, name: str = "Operation"):
        self.name = name
        self.start_time = None
        self.elapsed = None

    def __enter__(self):
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.elapsed = time.perf_counter() - self.start_time
        logger.info(f"{self.name} took {self.elapsed:.3f} seconds")
        return False
