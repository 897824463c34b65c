"""
Configuration management for srdef
"""
import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Base directories
BASE_DIR = Path(__file__).parent
LOGS_DIR = BASE_DIR / "logs"
SCHEMA_DIR = BASE_DIR / "schema"
FIXTURES_DIR = BASE_DIR / "tests" / "fixtures"

LOGS_DIR.mkdir(exist_ok=True)

SCHEMA_FILE = SCHEMA_DIR / "output.json"

# Vertex capacity (two 64-bit words per vertex set)
HARD_VERTEX_CAPACITY = 128
MAX_VERTICES = int(os.getenv("SRDEF_MAX_VERTICES", str(HARD_VERTEX_CAPACITY)))

# Algebraic oracle caps
ORACLE_MAX_B = int(os.getenv("SRDEF_ORACLE_MAX_B", "4"))
ORACLE_MAX_A = int(os.getenv("SRDEF_ORACLE_MAX_A", "4"))

# Versal deformation settings
KRULL_MAX_VARIABLES = int(os.getenv("SRDEF_KRULL_MAX_VARIABLES", "40"))
DEFAULT_ORDER = int(os.getenv("SRDEF_DEFAULT_ORDER", "4"))
E6_MAX_ORDER = int(os.getenv("SRDEF_E6_MAX_ORDER", "8"))
JACOBIAN_SAMPLES = int(os.getenv("SRDEF_JACOBIAN_SAMPLES", "3"))
RANDOM_SEED = int(os.getenv("SRDEF_RANDOM_SEED", "0"))

# Performance settings
PARALLEL_WORKERS = int(os.getenv("SRDEF_PARALLEL_WORKERS", str(os.cpu_count() or 1)))
VERIFY_BOUNDARY_SQUARES = os.getenv("SRDEF_VERIFY_BOUNDARY_SQUARES", "true").lower() == "true"

# Output settings
OUTPUT_FORMATS = ["text", "json"]
DEFAULT_OUTPUT_FORMAT = os.getenv("SRDEF_OUTPUT_FORMAT", "text")

# Logging settings
LOG_FILE = LOGS_DIR / "srdef.log"
LOG_LEVEL = os.getenv("LOG_LEVEL", "WARNING")
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_MAX_BYTES = int(os.getenv("LOG_MAX_BYTES", "10485760"))  # 10MB
LOG_BACKUP_COUNT = int(os.getenv("LOG_BACKUP_COUNT", "5"))


def effective_vertex_capacity() -> int:
    """Capacity guard: the environment may lower the hard limit, never raise it"""
    return max(1, min(MAX_VERTICES, HARD_VERTEX_CAPACITY))


class Config:
    """Configuration class with validation"""

    @staticmethod
    def validate():
        """Validate critical configuration"""
        errors = []

        if not 1 <= MAX_VERTICES <= HARD_VERTEX_CAPACITY:
            errors.append(
                f"SRDEF_MAX_VERTICES must be between 1 and {HARD_VERTEX_CAPACITY}, "
                f"got {MAX_VERTICES}; using {effective_vertex_capacity()}"
            )

        if ORACLE_MAX_B < 1 or ORACLE_MAX_A < 0:
            errors.append(f"Oracle caps must be positive, got |b| <= {ORACLE_MAX_B}, sum(a) <= {ORACLE_MAX_A}")

        if KRULL_MAX_VARIABLES < 1:
            errors.append(f"SRDEF_KRULL_MAX_VARIABLES must be positive, got {KRULL_MAX_VARIABLES}")

        if DEFAULT_ORDER < 1 or E6_MAX_ORDER < 1:
            errors.append(f"Truncation orders must be positive, got {DEFAULT_ORDER} and {E6_MAX_ORDER}")

        if PARALLEL_WORKERS < 1:
            errors.append(f"SRDEF_PARALLEL_WORKERS must be positive, got {PARALLEL_WORKERS}")

        if DEFAULT_OUTPUT_FORMAT not in OUTPUT_FORMATS:
            errors.append(f"Unknown SRDEF_OUTPUT_FORMAT '{DEFAULT_OUTPUT_FORMAT}', expected one of {OUTPUT_FORMATS}")

        return errors

    @staticmethod
    def to_dict():
        """Convert config to dictionary"""
        return {
            "max_vertices": effective_vertex_capacity(),
            "oracle_max_b": ORACLE_MAX_B,
            "oracle_max_a": ORACLE_MAX_A,
            "krull_max_variables": KRULL_MAX_VARIABLES,
            "default_order": DEFAULT_ORDER,
            "e6_max_order": E6_MAX_ORDER,
            "jacobian_samples": JACOBIAN_SAMPLES,
            "random_seed": RANDOM_SEED,
            "parallel_workers": PARALLEL_WORKERS,
            "output_format": DEFAULT_OUTPUT_FORMAT,
            "log_level": LOG_LEVEL,
            "log_file": str(LOG_FILE),
        }
