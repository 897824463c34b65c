"""
Shared fixtures for the srdef test suite
"""
import functools
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from complex_core import named_complex  # noqa: E402
from config import FIXTURES_DIR  # noqa: E402


@functools.lru_cache(maxsize=None)
def _cached(name: str):
    return named_complex(name)


@pytest.fixture
def named():
    """Build (and cache) a named complex, e.g. named("torus:7")"""
    return _cached


@pytest.fixture
def rp2_path() -> Path:
    return FIXTURES_DIR / "rp2_6.txt"


@pytest.fixture
def facet_file(tmp_path):
    """Write facet lines to a temporary file and return its path"""
    def write(lines, name="complex.txt"):
        path = tmp_path / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path
    return write
