from __future__ import annotations

from typing import Any, Dict, Iterator, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .premodular import DegeneracyClass, PremodularDatum

Outcome = Literal["REALIZED", "ELIMINATED", "EXTERNAL_FACT"]

OUTCOMES: Tuple[str, ...] = ("REALIZED", "ELIMINATED", "EXTERNAL_FACT")

WitnessKind = Literal[
    "non-integral",
    "divisibility",
    "no-root-of-unity",
    "empty-diophantine",
    "rank-mismatch",
    "check-failed",
    "cocycle-product",
]

PATH_SEP = " > "

CheckValue = Union[bool, int, str, List[Any], Dict[str, Any]]


# -----------------------------
# Leaf evidence
# -----------------------------

class Witness(BaseModel):
    """
    Machine-checkable reason a branch is impossible.

    `values` holds the exact objects the claim is about, as strings: the
    non-integral dimensions, the (sub, total) pair, the polynomial without
    roots of unity, or the competing ranks.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: WitnessKind
    detail: str = Field(..., min_length=1)
    values: Tuple[str, ...] = ()

    def to_compact(self) -> Dict[str, Any]:
        return {"kind": self.kind, "detail": self.detail, "values": list(self.values)}


class Check(BaseModel):
    """A fact verified in this run, with the value it was verified at."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = Field(..., min_length=1)
    value: CheckValue
    ok: bool = True

    def to_compact(self) -> Dict[str, Any]:
        return {"name": self.name, "value": self.value, "ok": self.ok}


# -----------------------------
# Case tree
# -----------------------------

class CaseNode(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    label: str = Field(..., min_length=1)
    hypotheses: Dict[str, Any] = Field(default_factory=dict)
    outcome: Optional[Outcome] = None
    witness: Optional[Witness] = None
    fact: Optional[str] = None
    datum: Optional[PremodularDatum] = None
    category_class: Optional[DegeneracyClass] = None
    citations: List[str] = Field(default_factory=list)
    checks: List[Check] = Field(default_factory=list)
    children: List[CaseNode] = Field(default_factory=list)

    @field_validator("label")
    @classmethod
    def _no_separators(cls, v: str) -> str:
        if PATH_SEP.strip() in v or "::" in v:
            raise ValueError(f"label may not contain '>' or '::': {v!r}")
        return v

    @model_validator(mode="after")
    def _check_outcome(self) -> CaseNode:
        if self.children:
            if self.outcome is not None:
                raise ValueError(f"{self.label}: inner nodes carry no outcome")
            return self
        if self.outcome is None:
            raise ValueError(f"{self.label}: every leaf needs an outcome")
        if self.outcome == "ELIMINATED" and self.witness is None:
            raise ValueError(f"{self.label}: an eliminated leaf needs a witness")
        if self.outcome == "EXTERNAL_FACT" and not self.fact:
            raise ValueError(f"{self.label}: an external-fact leaf needs a ledger key")
        if self.outcome == "REALIZED" and self.datum is None:
            raise ValueError(f"{self.label}: a realized leaf needs a datum")
        if self.fact and self.fact not in self.citations:
            self.citations.append(self.fact)
        return self

    def walk(self, prefix: str = "") -> Iterator[Tuple[str, CaseNode]]:
        path = f"{prefix}{PATH_SEP}{self.label}" if prefix else self.label
        yield path, self
        for child in self.children:
            yield from child.walk(path)

    def leaves(self, prefix: str = "") -> Iterator[Tuple[str, CaseNode]]:
        for path, node in self.walk(prefix):
            if not node.children:
                yield path, node

    def to_compact(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"label": self.label}
        if self.hypotheses:
            out["hypotheses"] = self.hypotheses
        if self.outcome is not None:
            out["outcome"] = self.outcome
        if self.witness is not None:
            out["witness"] = self.witness.to_compact()
        if self.fact:
            out["fact"] = self.fact
        if self.datum is not None:
            out["datum"] = self.datum.to_compact()
        if self.category_class is not None:
            out["class"] = self.category_class
        if self.citations:
            out["citations"] = sorted(set(self.citations))
        if self.checks:
            out["checks"] = [c.to_compact() for c in self.checks]
        if self.children:
            out["children"] = [c.to_compact() for c in self.children]
        return out


# -----------------------------
# Report
# -----------------------------

class RealizedEntry(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str
    path: str
    category_class: DegeneracyClass
    outcome: Outcome

    def to_compact(self) -> Dict[str, Any]:
        return {"name": self.name, "path": self.path, "class": self.category_class, "outcome": self.outcome}


class ReportSummary(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    entries: Tuple[RealizedEntry, ...] = ()
    counts: Dict[str, int] = Field(default_factory=dict)

    def names(self, category_class: DegeneracyClass) -> List[str]:
        return [e.name for e in self.entries if e.category_class == category_class]

    def to_compact(self) -> Dict[str, Any]:
        return {
            "symmetric": self.names("symmetric"),
            "properly_premodular": self.names("properly_premodular"),
            "modular": self.names("modular"),
            "entries": [e.to_compact() for e in self.entries],
            "counts": dict(sorted(self.counts.items())),
        }


class ClassificationReport(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)

    branches: List[CaseNode]
    summary: ReportSummary
    external_facts_used: List[str] = Field(default_factory=list)
    external_facts: Dict[str, Dict[str, Any]] = Field(default_factory=dict)
    fingerprint: str = ""

    def leaves(self) -> Iterator[Tuple[str, CaseNode]]:
        for b in self.branches:
            yield from b.leaves()

    def to_compact(self) -> Dict[str, Any]:
        return {
            "branches": [b.to_compact() for b in self.branches],
            "summary": self.summary.to_compact(),
            "external_facts_used": sorted(self.external_facts_used),
            "external_facts": {k: self.external_facts[k] for k in sorted(self.external_facts)},
            "fingerprint": self.fingerprint,
        }
