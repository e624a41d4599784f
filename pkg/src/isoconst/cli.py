"""Command-line front end: ``isoconst compute | verify | sweep | plot | list-norms``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import svg
from .errors import BoundViolation, ConvergenceError, DomainError, InputError, ParseError, SpecificationError
from .estimators import TAGS, WORKERS_ENV, ConstantKind, Estimate, GridConfig, estimate
from .geometry import HEX, L1, L2, LINF, AffineImage, HexagonalMixed, Lp, NormSpec, Polyhedral
from .relations import DEFAULT_TAU, RelationReport, default_battery, run_battery

EXIT_OK = 0
EXIT_RELATION = 1
EXIT_ERROR = 2
EXIT_USAGE = 64

BUILTINS = {
    "builtin:l1": (L1, "l1 norm |x1| + |x2|"),
    "builtin:l2": (L2, "Euclidean norm"),
    "builtin:linf": (LINF, "max norm max(|x1|, |x2|)"),
    "builtin:hex": (HEX, "l1 on x1*x2 <= 0, max norm on x1*x2 >= 0 (hexagonal ball)"),
    "builtin:lp?p=<v>": (None, "l_p norm for 1 <= p <= inf, e.g. builtin:lp?p=1.5 or builtin:lp?p=inf"),
}


class UsageError(Exception):
    pass


# norm documents -------------------------------------------------------------------


def _field(doc: dict, name: str, where: str):
    if name not in doc:
        raise ParseError(f"{where}: missing field {name!r}")
    return doc[name]


def _number(v, name: str, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"{where}: field {name!r} must be a number, got {v!r}")
    return float(v)


def norm_from_dict(doc, where: str = "document") -> NormSpec:
    """Build a norm spec from its decoded JSON form."""
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: expected a JSON object")
    kind = _field(doc, "kind", where)
    if kind == "lp":
        p = _field(doc, "p", where)
        if isinstance(p, str):
            if p.strip().lower() not in ("inf", "infinity"):
                raise ParseError(f"{where}: field 'p' must be a number or \"inf\", got {p!r}")
            return Lp(math.inf)
        return Lp(_number(p, "p", where))
    if kind == "hex_linf_l1":
        return HexagonalMixed()
    if kind == "polyhedral":
        fs = _field(doc, "functionals", where)
        if not isinstance(fs, list) or not all(isinstance(a, list) and len(a) == 2 for a in fs):
            raise ParseError(f"{where}: field 'functionals' must be an array of [a1, a2] pairs")
        return Polyhedral(tuple((_number(a, "functionals", where), _number(b, "functionals", where)) for a, b in fs))
    if kind == "affine_image":
        base = norm_from_dict(_field(doc, "base", where), where=f"{where}.base")
        m = _field(doc, "matrix", where)
        if not (isinstance(m, list) and len(m) == 2 and all(isinstance(r, list) and len(r) == 2 for r in m)):
            raise ParseError(f"{where}: field 'matrix' must be [[m11, m12], [m21, m22]]")
        return AffineImage(base, tuple(tuple(_number(c, "matrix", where) for c in r) for r in m))
    raise ParseError(
        f"{where}: unknown value {kind!r} in field 'kind' (expected lp, polyhedral, hex_linf_l1, affine_image)"
    )


def norm_to_dict(spec: NormSpec) -> dict:
    if isinstance(spec, Lp):
        return {"kind": "lp", "p": "inf" if math.isinf(spec.p) else spec.p}
    if isinstance(spec, HexagonalMixed):
        return {"kind": "hex_linf_l1"}
    if isinstance(spec, Polyhedral):
        return {"kind": "polyhedral", "functionals": [list(a) for a in spec.functionals]}
    if isinstance(spec, AffineImage):
        return {"kind": "affine_image", "base": norm_to_dict(spec.base), "matrix": [list(r) for r in spec.matrix]}
    raise SpecificationError(f"cannot serialize {type(spec).__name__}")


def parse_norm_text(text: str, label: str = "document") -> NormSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        lines = text.splitlines()
        context = lines[exc.lineno - 1].strip() if 0 < exc.lineno <= len(lines) else ""
        raise ParseError(f"{exc.msg} near {context!r}", exc.lineno, exc.colno) from None
    return norm_from_dict(doc, label)


def parse_norm_file(path) -> tuple[str, NormSpec]:
    """Read a norm spec document; the label is the file name without suffix."""
    path = Path(path)
    try:
        text = path.read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError(f"{path}: not valid UTF-8 ({exc.reason} at byte {exc.start})") from None
    return path.stem, parse_norm_text(text, str(path))


def parse_norm_source(src: str) -> tuple[str, NormSpec]:
    """A builtin label or a path to a norm spec document."""
    if src.startswith("builtin:"):
        if src in BUILTINS and BUILTINS[src][0] is not None:
            return src.split(":", 1)[1], BUILTINS[src][0]
        if src.startswith("builtin:lp?p="):
            raw = src.split("=", 1)[1]
            try:
                p = math.inf if raw.lower() in ("inf", "infinity") else float(raw)
            except ValueError:
                raise UsageError(f"bad p in {src!r}") from None
            spec = Lp(p)
            return ("linf" if math.isinf(p) else f"lp({p:g})"), spec
        raise UsageError(f"unknown builtin norm {src!r}; run 'list-norms'")
    return parse_norm_file(src)


# formatting -------------------------------------------------------------------------


def fmt(v, digits: int = 12):
    """Numbers as fixed-precision text; other values unchanged."""
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return f"{v:.{digits}g}"


def _json_value(v):
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return int(v)
    s = fmt(v)
    if isinstance(v, (bool, str)) or v is None or s in ("nan", "inf", "-inf"):
        return s
    return float(s)


def estimate_record(label: str, est: Estimate) -> dict:
    w = est.witness
    rec = {
        "norm": label,
        "constant": est.constant.label,
        "value": est.value,
        "direction": est.direction.value,
        "x1": w.x[0],
        "x2": w.x[1],
        "y1": w.y[0],
        "y2": w.y[1],
    }
    for k, v in w.params:
        rec[k] = v
    if w.residual is not None:
        rec["residual"] = w.residual
    rec["grid"] = est.grid_size
    rec["refine_tol"] = est.refine_tol
    return rec


def report_record(r: RelationReport) -> dict:
    return {
        "norm": r.norm_label,
        "relation": r.relation_id,
        "kind": r.kind,
        "lhs": r.lhs,
        "rhs": r.rhs,
        "slack": r.slack,
        "tolerance": r.tolerance,
        "asserted": r.asserted,
        "pass": r.passed,
        "detail": r.detail,
        "error": r.error or "",
    }


def to_json(records) -> str:
    def clean(rec):
        return {k: _json_value(v) for k, v in rec.items()}

    data = clean(records) if isinstance(records, dict) else [clean(r) for r in records]
    return json.dumps(data, indent=2) + "\n"


def to_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    if not records:
        return ""
    keys = list(records[0])
    for r in records[1:]:
        keys.extend(k for k in r if k not in keys)
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(keys)
    for r in records:
        w.writerow([fmt(r.get(k, "")) if not isinstance(r.get(k), bool) else str(r[k]).lower() for k in keys])
    return buf.getvalue()


def report_table(reports: list[RelationReport]) -> str:
    head = ("norm", "relation", "lhs", "rhs", "slack", "tol", "status")
    rows = []
    for r in reports:
        if r.error:
            status = "ERROR"
        elif not r.asserted:
            status = "info"
        else:
            status = "pass" if r.passed else "FAIL"
        rows.append((r.norm_label, r.relation_id, fmt(r.lhs, 6), fmt(r.rhs, 6), fmt(r.slack, 6), fmt(r.tolerance, 3), status))
    widths = [max(len(str(x)) for x in col) for col in zip(head, *rows)]
    lines = ["  ".join(str(c).ljust(w) for c, w in zip(head, widths)).rstrip()]
    for row in rows:
        flag = "  <--" if row[-1] in ("FAIL", "ERROR") else ""
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(row, widths)).rstrip() + flag)
    for r in reports:
        if r.error:
            lines.append(f"error [{r.norm_label} {r.relation_id}]: {r.error}")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


# argument handling --------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _constant(args) -> ConstantKind:
    try:
        return ConstantKind(args.constant, args.param)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _grid(args) -> GridConfig:
    try:
        return GridConfig(
            theta_grid=args.grid, radius_grid=args.radius_grid, refine_tol=args.refine_tol,
            refine_budget=args.refine_budget,
        )
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _workers(args):
    if args.workers is not None and args.workers < 1:
        raise UsageError("--workers must be >= 1")
    return args.workers


def _frange(a: float, b: float, step: float) -> list[float]:
    if not step > 0 or not b >= a:
        raise UsageError("sweep range needs --from <= --to and --step > 0")
    n = int(math.floor((b - a) / step + 1e-9))
    return [min(a + k * step, b) for k in range(n + 1)]


def cmd_compute(args) -> int:
    label, spec = parse_norm_source(args.norm)
    kind = _constant(args)
    est = estimate(spec, kind, _grid(args), _workers(args))
    rec = estimate_record(label, est)
    _emit(to_csv([rec]) if args.format == "csv" else to_json(rec), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.norm:
        norms = [parse_norm_source(s) for s in args.norm]
    elif args.battery == ["default"]:
        norms = default_battery()
    else:
        norms = [parse_norm_file(p) for p in args.battery]
    if not 0 < args.tau <= 0.1:
        raise UsageError("--tau must lie in (0, 0.1]")
    reports = run_battery(norms, _grid(args), _workers(args), tau=args.tau)
    if args.format == "json":
        text = to_json([report_record(r) for r in reports])
    elif args.format == "csv":
        text = to_csv([report_record(r) for r in reports])
    else:
        text = report_table(reports)
    _emit(text, args.out)
    failed = [r for r in reports if r.failed]
    if args.format == "table":
        print(f"{len(reports)} relations on {len(norms)} norms, {len(failed)} failed", file=sys.stderr)
    return EXIT_RELATION if failed else EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _grid(args)
    workers = _workers(args)
    values = _frange(args.start, args.stop, args.step)
    records = []
    if args.over == "p":
        kind = _constant(args)
        ps = values + ([math.inf] if not args.no_inf else [])
        for p in ps:
            if p < 1:
                raise UsageError("p must be >= 1")
            est = estimate(Lp(p), kind, cfg, workers)
            records.append({"norm": "lp", "constant": kind.label, "parameter": p, "value": est.value})
    else:
        if args.constant not in ("gamma", "delta"):
            raise UsageError("a parameter sweep needs --constant gamma or delta (or use --over p)")
        label, spec = parse_norm_source(args.norm)
        hi = 1.0 if args.constant == "gamma" else 2.0
        if values[0] < 0 or values[-1] > hi:
            raise UsageError(f"{args.constant} parameter must stay within [0, {hi:g}]")
        for v in values:
            est = estimate(spec, ConstantKind(args.constant, v), cfg, workers)
            records.append({"norm": label, "constant": args.constant, "parameter": v, "value": est.value})
    _emit(to_json(records) if args.format == "json" else to_csv(records), args.out)
    return EXIT_OK


def _read_sweep_csv(path: str):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or "parameter" not in rows[0] or "value" not in rows[0]:
        raise ParseError(f"{path}: expected a sweep CSV with 'parameter' and 'value' columns")
    xs = np.array([float(r["parameter"]) for r in rows])
    ys = np.array([float(r["value"]) for r in rows])
    return xs, ys, rows[0].get("constant", "value"), rows[0].get("norm", "")


def cmd_plot(args) -> int:
    if args.sweep:
        xs, ys, const, norm = _read_sweep_csv(args.sweep)
        text = svg.line_chart_svg(xs, ys, f"{const} sweep ({norm})", "parameter", const)
    else:
        if not args.norm:
            raise UsageError("plot needs --norm or --sweep")
        label, spec = parse_norm_source(args.norm)
        witness = None
        title = f"unit ball: {label}"
        if args.constant:
            est = estimate(spec, _constant(args), _grid(args), _workers(args))
            witness = (est.witness.x, est.witness.y)
            title = f"{label}: {est.constant.label} = {est.value:.6g}"
        text = svg.unit_ball_svg(spec, title, witness)
    _emit(text, args.out)
    return EXIT_OK


def cmd_list_norms(args) -> int:
    width = max(len(k) for k in BUILTINS)
    for k, (_, desc) in BUILTINS.items():
        print(f"{k.ljust(width)}  {desc}")
    return EXIT_OK


def _add_grid(p):
    g = p.add_argument_group("grid")
    g.add_argument("--grid", type=int, default=2048, help="theta grid size (default 2048, min 64)")
    g.add_argument("--radius-grid", type=int, default=32, help="radius grid for omega-prime and cnj (default 32)")
    g.add_argument("--refine-tol", type=float, default=1e-10, help="refinement tolerance (default 1e-10)")
    g.add_argument("--refine-budget", type=int, default=200, help="refinement iteration budget; 0 disables")
    g.add_argument("--workers", type=int, default=None, help=f"worker threads (default: ${WORKERS_ENV} or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="isoconst",
        description="Isosceles-orthogonality constants of two-dimensional normed planes.",
        epilog=(
            f"Environment: {WORKERS_ENV} sets the default number of worker threads. "
            "Exit codes: 0 success, 1 relation failure, 2 computation or I/O error, 64 usage error."
        ),
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="command")
    sub.required = True

    p = sub.add_parser("compute", help="estimate one constant on one norm")
    p.add_argument("--norm", required=True, help="builtin label or norm spec JSON file")
    p.add_argument("--constant", required=True, choices=TAGS)
    p.add_argument("--param", type=float, default=None, help="t for gamma, eps for delta")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    _add_grid(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="check every relation on a battery of norms")
    p.add_argument("--battery", nargs="+", default=["default"], help="'default' or norm spec JSON files")
    p.add_argument("--norm", nargs="+", default=None, help="builtin labels or files (overrides --battery)")
    p.add_argument("--tau", type=float, default=DEFAULT_TAU, help="non-square classification margin")
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.add_argument("--out", default=None)
    _add_grid(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="tabulate a constant over a parameter range")
    p.add_argument("--constant", required=True, choices=TAGS)
    p.add_argument("--norm", default="builtin:l2", help="norm for gamma/delta sweeps")
    p.add_argument("--over", choices=("param", "p"), default="param", help="sweep the constant's parameter or l_p's p")
    p.add_argument("--param", type=float, default=None, help="fixed parameter when sweeping p")
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--no-inf", action="store_true", help="do not append p = inf to a p sweep")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    _add_grid(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("plot", help="SVG of a unit ball (with witness) or of sweep data")
    p.add_argument("--norm", default=None)
    p.add_argument("--constant", choices=TAGS, default=None, help="draw this constant's witness pair")
    p.add_argument("--param", type=float, default=None)
    p.add_argument("--sweep", default=None, help="sweep CSV to chart instead of a unit ball")
    p.add_argument("--out", required=True)
    _add_grid(p)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("list-norms", help="list builtin norm labels")
    p.set_defaults(func=cmd_list_norms)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"isoconst: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, SpecificationError, InputError) as exc:
        print(f"isoconst: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ConvergenceError, BoundViolation, DomainError, ArithmeticError) as exc:
        print(f"isoconst: computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"isoconst: I/O error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
