"""Configuration settings for the nsym-bessel toolkit."""

import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _int_env(name: str, default: int) -> int:
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


# Basic settings
APP_NAME = "nsym-bessel"
DEBUG = os.getenv("DEBUG", "False").lower() in ("true", "1", "t")

# Brute-force oracles enumerate S_n x S_n, so n stays small
ORACLE_LIMITS = {
    "max_n": _int_env("MAX_N", 6),
    "hard_cap": 8,
}

# Truncation orders for the q- and p-series
TRUNCATION = {
    "q_order": _int_env("Q_ORDER", 10),
    "p_order": _int_env("P_ORDER", 10),
    "theta_maj_q_order": _int_env("THETA_MAJ_Q_ORDER", 12),
    "fr_max_i": _int_env("FR_MAX_I", 2),
    "fr_max_j": _int_env("FR_MAX_J", 2),
    "fr_max_n": _int_env("FR_MAX_N", 4),
}

# theta-specialization checks
THETA = {
    "max_alphabet": _int_env("THETA_MAX_ALPHABET", 4),
    "max_length": _int_env("THETA_MAX_LENGTH", 5),
    "relation_count": _int_env("THETA_RELATION_COUNT", 50),
    "eulerian_relations": _int_env("THETA_EULERIAN_RELATIONS", 10),
    "eulerian_max_alphabet": _int_env("THETA_EULERIAN_MAX_ALPHABET", 3),
    "maj_max_length": _int_env("THETA_MAJ_MAX_LENGTH", 4),
    "pair_length": _int_env("THETA_PAIR_LENGTH", 3),
    "double_alphabet": _int_env("THETA_DOUBLE_ALPHABET", 3),
    "double_length": _int_env("THETA_DOUBLE_LENGTH", 4),
}

# Polyomino and heap windows
POLYOMINO = {
    "max_width": _int_env("POLYOMINO_MAX_WIDTH", 4),
    "max_area": _int_env("POLYOMINO_MAX_AREA", 10),
    "heap_length": _int_env("HEAP_LENGTH", 5),
    "heap_max_j": _int_env("HEAP_MAX_J", 4),
    "cartier_length": _int_env("CARTIER_LENGTH", 4),
    "words_route_width": _int_env("WORDS_ROUTE_WIDTH", 3),
    "words_route_area": _int_env("WORDS_ROUTE_AREA", 6),
}

# Output settings
OUTPUT = {
    "format": os.getenv("OUTPUT_FORMAT", "json"),
    "path": os.getenv("OUTPUT_PATH", ""),
    "formats": ["json", "csv", "text"],
}

DEFAULT_SEED = _int_env("SEED", 42)
