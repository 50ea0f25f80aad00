from __future__ import annotations

import logging
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .config import BUNDLED_DATA_DIR
from .fusion import DatumFormatError, load_json_file

log = logging.getLogger(__name__)

LEDGER_FILE = "external_facts.json"


class UnknownFactError(KeyError):
    pass


# -----------------------------
# Models
# -----------------------------

class ExternalFact(BaseModel):
    """A published result applied as a rule, never re-proved here."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    key: str = Field(min_length=1)
    citation: str = Field(min_length=1)
    statement: str = Field(min_length=1)

    @field_validator("key")
    @classmethod
    def _key_shape(cls, v: str) -> str:
        v = v.strip()
        if v != v.lower() or " " in v:
            raise ValueError(f"ledger keys are lowercase without spaces, got {v!r}")
        return v

    def to_compact(self, where_used: Optional[List[str]] = None) -> Dict[str, Any]:
        out: Dict[str, Any] = {"citation": self.citation, "statement": self.statement}
        if where_used is not None:
            out["where_used"] = sorted(where_used)
        return out


class ExternalFactLedger(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    version: int = 1
    facts: Tuple[ExternalFact, ...]

    @field_validator("facts")
    @classmethod
    def _unique(cls, v: Tuple[ExternalFact, ...]) -> Tuple[ExternalFact, ...]:
        seen = set()
        for f in v:
            if f.key in seen:
                raise ValueError(f"duplicate ledger key {f.key!r}")
            seen.add(f.key)
        return tuple(sorted(v, key=lambda f: f.key))

    def get(self, key: str) -> ExternalFact:
        for f in self.facts:
            if f.key == key:
                return f
        raise UnknownFactError(key)

    def keys(self) -> List[str]:
        return [f.key for f in self.facts]

    def resolve(self, keys: Iterable[str]) -> List[ExternalFact]:
        return [self.get(k) for k in sorted(set(keys))]


# -----------------------------
# Loading
# -----------------------------

def load_ledger(path: Path) -> ExternalFactLedger:
    data = load_json_file(path)
    try:
        ledger = ExternalFactLedger.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = "/".join(str(p) for p in first.get("loc", ()))
        raise DatumFormatError(first.get("msg", "invalid ledger"), where=where) from None
    log.debug("ledger %s: %d facts", path, len(ledger.facts))
    return ledger


@lru_cache(maxsize=4)
def _cached_ledger(path: str) -> ExternalFactLedger:
    return load_ledger(Path(path))


def bundled_ledger(data_dir: Optional[Path] = None) -> ExternalFactLedger:
    return _cached_ledger(str(Path(data_dir or BUNDLED_DATA_DIR) / LEDGER_FILE))
