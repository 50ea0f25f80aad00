from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple

from .characters import census, group_info
from .classify import UnsettledCaseError, classify_rank5
from .config import PremodConfig, load_config
from .cyclotomic import parse_dimension
from .equivariant import SchurLookupError
from .fusion import ConductorSearchError, DatumFormatError
from .groups import CatalogParseError, UnknownGroupError, catalog_groups, named_group
from .premodular import check_datum, degeneracy_class, load_datum, muger_center
from .render import render_group_info, render_report, render_ring, render_validation
from .search import SearchSpaceExceeded, SearchStats, enumerate_fusion_rings
from .utils import canonical_json, parse_int_list

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_ERROR = 2


# -----------------------------
# Argument helpers
# -----------------------------

def _parse_constraint(text: str) -> Tuple[Tuple[int, int, int], int]:
    """'a,b,c=v' -> ((a, b, c), v)."""
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected a,b,c=v, got {text!r}")
    lhs, rhs = text.split("=", 1)
    idx = parse_int_list(lhs)
    if len(idx) != 3:
        raise argparse.ArgumentTypeError(f"expected three indices, got {lhs!r}")
    try:
        value = int(rhs.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"constraint value must be an integer, got {rhs!r}") from None
    return (idx[0], idx[1], idx[2]), value


def _parse_dims(text: str):
    try:
        return [parse_dimension(part) for part in text.split(",")]
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="premodclass", description="Rank-5 premodular data: checks and case replay")
    p.add_argument("--verbose", "-v", action="count", default=0, help="log to stderr (-v info, -vv debug)")
    p.add_argument("--data-dir", type=Path, help="directory with groups.tsv and the bundled JSON data")
    p.add_argument("--max-order", type=_positive, help="largest catalog group order to load")
    p.add_argument("--node-budget", type=_positive, help="search node budget")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a premodular datum file")
    v.add_argument("datum", type=Path)
    v.add_argument("--theta-index", type=int, action="append", default=[], help="also check the theta condition here")
    v.add_argument("--format", choices=("text", "json"), default="text")

    c = sub.add_parser("classify", help="replay the rank-5 case analysis")
    c.add_argument("--out", type=Path, help="write the canonical JSON report here")
    c.add_argument("--format", choices=("text", "json"), default="text")

    ce = sub.add_parser("census", help="groups with exactly k conjugacy classes")
    ce.add_argument("k", type=_positive)
    ce.add_argument("max_order", type=_positive)
    ce.add_argument("--format", choices=("text", "json"), default="text")

    g = sub.add_parser("group-info", help="order, classes and degrees of a catalog group")
    g.add_argument("label")
    g.add_argument("--format", choices=("text", "json"), default="text")

    s = sub.add_parser("solve", help="enumerate fusion rings with given dimensions")
    s.add_argument("--rank", type=_positive, required=True)
    s.add_argument("--dims", type=_parse_dims, required=True, help="comma separated; phi, sqrt(m), 2cos(k/m) accepted")
    s.add_argument("--constraint", type=_parse_constraint, action="append", default=[], help="a,b,c=v (repeatable)")
    s.add_argument("--dual", type=parse_int_list, help="duality involution, comma separated")
    s.add_argument("--format", choices=("text", "json"), default="text")
    return p


def _configure_logging(verbose: int, cfg: PremodConfig) -> None:
    level = {0: cfg.log_level, 1: "INFO"}.get(verbose, "DEBUG")
    logging.basicConfig(level=getattr(logging, str(level).upper(), logging.WARNING), stream=sys.stderr)


def _apply_overrides(cfg: PremodConfig, args: argparse.Namespace) -> PremodConfig:
    changes: Dict[str, object] = {}
    if args.data_dir is not None:
        changes["data_dir"] = args.data_dir
    if args.max_order is not None:
        changes["max_order"] = args.max_order
    if args.node_budget is not None:
        changes["node_budget"] = args.node_budget
    return dataclasses.replace(cfg, **changes) if changes else cfg


# -----------------------------
# Commands
# -----------------------------

def cmd_validate(args: argparse.Namespace, cfg: PremodConfig) -> int:
    datum = load_datum(args.datum, conductor_bound=cfg.conductor_bound)
    for x in args.theta_index:
        if not 0 <= x < datum.rank:
            raise DatumFormatError(f"theta index {x} out of range", where="--theta-index")
    violations = check_datum(datum, theta_indices=args.theta_index)
    center = muger_center(datum, data_dir=cfg.data_dir)
    if args.format == "json":
        out = {
            "datum": datum.name,
            "S": datum.s_provenance,
            "center": center.to_compact(),
            "class": degeneracy_class(datum),
            "violations": [v.to_compact() for v in violations],
        }
        sys.stdout.write(canonical_json(out))
    else:
        sys.stdout.write(render_validation(datum, violations, center))
    return EXIT_FINDINGS if violations else EXIT_OK


def cmd_classify(args: argparse.Namespace, cfg: PremodConfig) -> int:
    report = classify_rank5(cfg)
    payload = canonical_json(report.to_compact())
    if args.out is not None:
        try:
            args.out.write_text(payload, encoding="ascii", newline="\n")
        except OSError as e:
            log.error("cannot write %s: %s", args.out, e)
            print(f"error: cannot write {args.out}: {e}", file=sys.stderr)
            return EXIT_ERROR
    if args.format == "json" and args.out is None:
        sys.stdout.write(payload)
    else:
        sys.stdout.write(render_report(report))
    failed = [p for p, n in report.leaves() if n.witness is not None and n.witness.kind == "check-failed"]
    return EXIT_FINDINGS if failed else EXIT_OK


def cmd_census(args: argparse.Namespace, cfg: PremodConfig) -> int:
    limit = min(args.max_order, cfg.max_order)
    groups = census(catalog_groups(limit, cfg.data_dir), args.k, limit)
    names = [G.name for G in groups]
    if args.format == "json":
        sys.stdout.write(canonical_json({"k": args.k, "max_order": limit, "groups": names}))
    else:
        sys.stdout.write("".join(f"{n}\n" for n in names))
    return EXIT_OK


def cmd_group_info(args: argparse.Namespace, cfg: PremodConfig) -> int:
    info = group_info(named_group(args.label, cfg.data_dir))
    if args.format == "json":
        sys.stdout.write(canonical_json(info.to_compact()))
    else:
        sys.stdout.write(render_group_info(info))
    return EXIT_OK


def cmd_solve(args: argparse.Namespace, cfg: PremodConfig) -> int:
    if len(args.dims) != args.rank:
        raise DatumFormatError(f"expected {args.rank} dimensions, got {len(args.dims)}", where="--dims")
    constraints = dict(args.constraint)
    for (a, b, c), _ in args.constraint:
        if not all(0 <= i < args.rank for i in (a, b, c)):
            raise DatumFormatError(f"constraint index out of range: {(a, b, c)}", where="--constraint")
    stats = SearchStats()
    rings = enumerate_fusion_rings(
        args.rank, args.dims, constraints, dual=args.dual, node_budget=cfg.node_budget, stats=stats
    )
    if args.format == "json":
        sys.stdout.write(canonical_json({"rings": [F.to_compact() for F in rings], "nodes": stats.nodes}))
    else:
        for i, F in enumerate(rings, start=1):
            print(f"ring {i}: {render_ring(F)}")
        print(f"{len(rings)} ring(s), {stats.nodes} search nodes")
    return EXIT_OK if rings else EXIT_FINDINGS


_COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "census": cmd_census,
    "group-info": cmd_group_info,
    "solve": cmd_solve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)
    try:
        cfg = _apply_overrides(load_config(), args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
    _configure_logging(args.verbose, cfg)
    try:
        return _COMMANDS[args.command](args, cfg)
    except (DatumFormatError, CatalogParseError) as e:
        print(f"error: {e}", file=sys.stderr)
    except (UnknownGroupError, SchurLookupError) as e:
        print(f"error: unknown label {e.args[0] if e.args else e}", file=sys.stderr)
    except (SearchSpaceExceeded, ConductorSearchError, UnsettledCaseError) as e:
        print(f"error: {e}", file=sys.stderr)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
