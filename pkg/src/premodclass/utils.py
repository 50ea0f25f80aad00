from __future__ import annotations

import hashlib
import json
from typing import Any, List, Sequence


# -----------------------------
# Canonical JSON
# -----------------------------

def canonical_json(obj: Any) -> str:
    """
    Serialize to the byte-stable form used for every file this package writes:
    sorted keys, no insignificant whitespace, ASCII only, one trailing LF.
    """
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def sha256_json(obj: Any) -> str:
    """
    Stable sha256 over the canonical JSON form.
    """
    return hashlib.sha256(canonical_json(obj).encode("ascii")).hexdigest()


# -----------------------------
# Small formatting helpers
# -----------------------------

def fmt_tuple(values: Sequence[Any]) -> str:
    return "(" + ",".join(str(v) for v in values) + ")"


def parse_int_list(text: str) -> List[int]:
    """
    Parse "1,2, 3" into [1, 2, 3]. Empty string gives [].
    """
    text = (text or "").strip()
    if not text:
        return []
    out: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise ValueError(f"empty item in integer list: {text!r}")
        out.append(int(part))
    return out
