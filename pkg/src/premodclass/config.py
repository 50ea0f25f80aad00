from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

from dotenv import load_dotenv

log = logging.getLogger(__name__)

BUNDLED_DATA_DIR = Path(__file__).parent / "data"

_dotenv_loaded = False


@dataclass
class PremodConfig:
    data_dir: Path = field(default_factory=lambda: BUNDLED_DATA_DIR)
    max_order: int = 10000
    node_budget: int = 2_000_000
    conductor_bound: int = 120
    census_max_order: int = 60
    log_level: str = "WARNING"

    def __post_init__(self) -> None:
        for name in ("max_order", "node_budget", "conductor_bound", "census_max_order"):
            if int(getattr(self, name)) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def catalog_path(self) -> Path:
        return self.data_dir / "groups.tsv"


def _ensure_dotenv() -> None:
    global _dotenv_loaded
    if not _dotenv_loaded:
        load_dotenv()
        _dotenv_loaded = True


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw.strip())
    except ValueError as e:
        raise ValueError(f"{name} must be an integer, got {raw!r}") from e
    if value <= 0:
        raise ValueError(f"{name} must be positive, got {value}")
    return value


def _env_str(name: str, default: str) -> str:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    return raw.strip()


def load_config() -> PremodConfig:
    """
    Build the runtime configuration from PREMOD_* environment variables
    (a local .env file is honoured).
    """
    _ensure_dotenv()
    data_dir = Path(_env_str("PREMOD_DATA_DIR", str(BUNDLED_DATA_DIR)))
    cfg = PremodConfig(
        data_dir=data_dir,
        max_order=_env_int("PREMOD_MAX_ORDER", 10000),
        node_budget=_env_int("PREMOD_NODE_BUDGET", 2_000_000),
        conductor_bound=_env_int("PREMOD_CONDUCTOR_BOUND", 120),
        census_max_order=_env_int("PREMOD_CENSUS_MAX_ORDER", 60),
        log_level=_env_str("PREMOD_LOG_LEVEL", "WARNING").upper(),
    )
    log.debug("loaded config: %s", cfg)
    return cfg
