from __future__ import annotations

from typing import Any, Dict, List, Sequence

from .characters import GroupInfo
from .fusion import FusionRing, Violation
from .premodular import CenterDescription, PremodularDatum
from .schema import OUTCOMES, CaseNode, ClassificationReport
from .utils import fmt_tuple


def _clip(s: str, max_len: int = 160) -> str:
    s = " ".join(s.split())
    if len(s) > max_len:
        return s[: max_len - 3] + "..."
    return s


def _hypotheses_text(h: Dict[str, Any]) -> str:
    return ", ".join(f"{k}={v}" for k, v in sorted(h.items()) if not isinstance(v, (dict, list)))


def _datum_text(datum: PremodularDatum) -> str:
    dims = fmt_tuple(str(d) for d in datum.dims)
    twists = fmt_tuple(str(t) for t in datum.twists)
    return f"{datum.name} d={dims} T={twists}"


def node_evidence(node: CaseNode) -> str:
    """One-line evidence for a leaf."""
    if node.outcome == "REALIZED" and node.datum is not None:
        return f"{node.category_class}: {_datum_text(node.datum)}"
    if node.outcome == "ELIMINATED" and node.witness is not None:
        return f"{node.witness.kind}: {_clip(node.witness.detail)}"
    if node.outcome == "EXTERNAL_FACT":
        if node.datum is not None:
            return f"[{node.fact}] {node.category_class}: {_datum_text(node.datum)}"
        return f"[{node.fact}]"
    return _clip(_hypotheses_text(node.hypotheses)) or "-"


def leaf_lines(branches: Sequence[CaseNode]) -> List[str]:
    lines: List[str] = []
    for b in branches:
        for path, node in b.leaves():
            lines.append(f"{path} :: {node.outcome} :: {node_evidence(node)}")
    return lines


def render_report(report: ClassificationReport, *, header: str = "PREMODCLASS RANK-5 REPORT") -> str:
    s = report.summary
    lines: List[str] = [header, ""]

    lines.append("Summary:")
    for cls in ("symmetric", "properly_premodular", "modular"):
        names = s.names(cls)  # type: ignore[arg-type]
        lines.append(f"- {cls} ({len(names)}): {', '.join(names) if names else '-'}")
    outcome_counts = ", ".join(f"{k}={s.counts.get(k, 0)}" for k in OUTCOMES)
    lines.append(f"- leaves: {outcome_counts}")

    lines.append("")
    lines.append("Branches:")
    lines.extend(leaf_lines(report.branches))

    if report.external_facts_used:
        lines.append("")
        lines.append("External facts:")
        for key in sorted(report.external_facts_used):
            entry = report.external_facts.get(key, {})
            lines.append(f"- {key}: {entry.get('citation', '')}")

    lines.append("")
    lines.append(f"Fingerprint: {report.fingerprint}")
    return "\n".join(lines) + "\n"


# -----------------------------
# validate / census / group-info
# -----------------------------

def render_validation(datum: PremodularDatum, violations: Sequence[Violation], center: CenterDescription) -> str:
    lines = [f"datum: {datum.name or '<unnamed>'} (rank {datum.rank}, S {datum.s_provenance})"]
    lines.append(f"center: {fmt_tuple(center.indices)} tannakian={str(center.tannakian).lower()} group={center.group_label or '-'}")
    if not violations:
        lines.append("ok: no violations")
    for v in violations:
        lines.append(f"{v.tag} {fmt_tuple(v.indices)}: {_clip(v.detail, 200)}")
    return "\n".join(lines) + "\n"


def render_group_info(info: GroupInfo) -> str:
    return "\n".join(
        [
            f"group: {info.name}",
            f"order: {info.order}",
            f"classes: {info.class_count}",
            f"class sizes: {fmt_tuple(info.class_sizes)}",
            f"degrees: {fmt_tuple(info.degrees)}",
            f"exponent: {info.exponent}",
            f"abelian: {str(info.abelian).lower()}",
        ]
    ) + "\n"


def render_ring(ring: FusionRing) -> str:
    """Nonzero products a⊗b for a <= b, one per line."""
    lines = [f"rank {ring.rank} dual={fmt_tuple(ring.dual)}"]
    for a in range(ring.rank):
        for b in range(a, ring.rank):
            terms = [
                (f"{m}*{ring.label(c)}" if m > 1 else ring.label(c))
                for c, m in enumerate(ring.N[a][b])
                if m
            ]
            lines.append(f"  {ring.label(a)} x {ring.label(b)} = {' + '.join(terms)}")
    return "\n".join(lines)
