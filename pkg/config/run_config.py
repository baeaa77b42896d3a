"""Run configuration: settings defaults, key=value config files and CLI flags."""

import logging
import random
from dataclasses import dataclass, fields, replace
from typing import Any, Dict, Mapping, Optional

from dotenv import dotenv_values

from config.settings import DEFAULT_SEED, OUTPUT, ORACLE_LIMITS, POLYOMINO, THETA, TRUNCATION
from core.errors import BoundError, UsageError

# Set up logging
logger = logging.getLogger("run_config")


@dataclass(frozen=True)
class RunConfig:
    """Bounds, truncation orders, verification windows, seed and output options for one run.

    The window fields default to config/settings.py and can be set in a
    --config file under the same names, e.g. ``relation_count=20``.
    """

    max_n: int = ORACLE_LIMITS["max_n"]
    q_order: int = TRUNCATION["q_order"]
    p_order: int = TRUNCATION["p_order"]
    seed: int = DEFAULT_SEED
    format: str = OUTPUT["format"]
    out: str = OUTPUT["path"]
    timings: bool = False

    # theta-specialization windows
    relation_count: int = THETA["relation_count"]
    theta_max_alphabet: int = THETA["max_alphabet"]
    theta_max_length: int = THETA["max_length"]
    eulerian_relations: int = THETA["eulerian_relations"]
    eulerian_max_alphabet: int = THETA["eulerian_max_alphabet"]
    theta_maj_max_length: int = THETA["maj_max_length"]
    theta_maj_q_order: int = TRUNCATION["theta_maj_q_order"]
    pair_length: int = THETA["pair_length"]
    double_alphabet: int = THETA["double_alphabet"]
    double_length: int = THETA["double_length"]

    # double series window
    fr_max_i: int = TRUNCATION["fr_max_i"]
    fr_max_j: int = TRUNCATION["fr_max_j"]
    fr_max_n: int = TRUNCATION["fr_max_n"]

    # polyomino and heap windows
    polyomino_max_width: int = POLYOMINO["max_width"]
    polyomino_max_area: int = POLYOMINO["max_area"]
    words_route_width: int = POLYOMINO["words_route_width"]
    words_route_area: int = POLYOMINO["words_route_area"]
    heap_length: int = POLYOMINO["heap_length"]
    heap_max_j: int = POLYOMINO["heap_max_j"]
    cartier_length: int = POLYOMINO["cartier_length"]

    def validate(self) -> "RunConfig":
        """Enforce the safety caps.

        Raises:
            BoundError: If a bound is outside its hard cap
            UsageError: If the output format is unknown
        """
        if not 0 <= self.max_n <= ORACLE_LIMITS["hard_cap"]:
            raise BoundError(f"max_n = {self.max_n} outside 0..{ORACLE_LIMITS['hard_cap']}")
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, int) and not isinstance(value, bool) and value < 0:
                raise BoundError(f"{f.name} must be nonnegative, got {value}")
        for name in ("theta_max_alphabet", "eulerian_max_alphabet", "double_alphabet"):
            if getattr(self, name) < 1:
                raise BoundError(f"{name} must be at least 1, got {getattr(self, name)}")
        if self.format not in OUTPUT["formats"]:
            raise UsageError(f"Unknown output format {self.format!r}; expected one of {OUTPUT['formats']}")
        return self

    def rng(self) -> random.Random:
        """The single seeded generator every random choice of a run draws from."""
        return random.Random(self.seed)

    def with_overrides(self, overrides: Mapping[str, Any]) -> "RunConfig":
        """Apply the non-None entries of a mapping keyed like the fields."""
        known = {f.name: f.type for f in fields(self)}
        changes: Dict[str, Any] = {}
        for key, value in overrides.items():
            key = key.replace("-", "_")
            if value is None:
                continue
            if key not in known:
                raise UsageError(f"Unknown configuration key {key!r}")
            changes[key] = _coerce(key, value, getattr(self, key))
        return replace(self, **changes)

    @classmethod
    def load(cls, path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None) -> "RunConfig":
        """Settings defaults < key=value file < explicit overrides, then validate."""
        config = cls()
        if path:
            values = dotenv_values(path)
            if not values:
                logger.warning(f"Config file {path} is empty or missing")
            config = config.with_overrides(values)
            logger.debug(f"Loaded configuration file {path}: {sorted(values)}")
        if overrides:
            config = config.with_overrides(overrides)
        return config.validate()


def _coerce(key: str, value: Any, current: Any) -> Any:
    if isinstance(current, bool):
        if isinstance(value, bool):
            return value
        return str(value).lower() in ("true", "1", "t", "yes")
    if isinstance(current, int):
        try:
            return int(value)
        except (TypeError, ValueError) as e:
            raise UsageError(f"Configuration key {key!r} needs an integer, got {value!r}") from e
    return str(value)
