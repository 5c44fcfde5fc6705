"""Command-line front end.

Exit codes: 0 ok, 1 validation or condition failure, 2 degenerate curve,
3 parse or I/O error.
"""

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import bertrand, corpus
from .curves import PSEUDO_ARC_TOL, curve_from_spec, load_spec
from .errors import (
    DegenerateCurve,
    LexError,
    NoSolution,
    NullBertrandError,
    ParseError,
    PreconditionError,
    SpecError,
)
from .frame import DEGENERATE_TOL, curvature_table, fmt, frame_at, table_to_csv
from .jets import DEFAULT_ORDER

EXIT_OK, EXIT_INVALID, EXIT_DEGENERATE, EXIT_IO = 0, 1, 2, 3
MATE_TOL = 1e-6
VERIFY_MATE_POINTS = 20


@dataclass
class Tolerances:
    pseudo_arc: float = PSEUDO_ARC_TOL
    gram: float = 1e-8
    frenet: float = 1e-8
    condition: float = bertrand.CONDITION_TOL
    degenerate: float = DEGENERATE_TOL
    mate: float = MATE_TOL


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    samples: int = 64
    range: tuple = None
    order: int = DEFAULT_ORDER
    tol: Tolerances = field(default_factory=Tolerances)
    alpha: float = None
    beta: float = None
    fit: bool = False
    output: str = None
    format: str = "csv"
    jobs: int = 1
    table: str = None
    plot: str = None

    def __post_init__(self):
        if self.samples < 2:
            raise PreconditionError("--samples must be at least 2")
        for name, value in asdict(self.tol).items():
            if not value > 0:
                raise PreconditionError(f"tolerance {name} must be positive")


def exit_code_for(exc):
    if isinstance(exc, DegenerateCurve):
        return EXIT_DEGENERATE
    if isinstance(exc, (SpecError, LexError, ParseError, OSError, UnicodeDecodeError)):
        return EXIT_IO
    return EXIT_INVALID


def grid_for(domain, cfg):
    lo, hi = cfg.range if cfg.range else domain
    return [float(x) for x in np.linspace(lo, hi, cfg.samples)]


def _emit(text, path):
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json(obj):
    return json.dumps(obj, indent=2, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _clean(d):
    """NaN is not valid JSON; write null instead."""
    if isinstance(d, dict):
        return {k: _clean(v) for k, v in d.items()}
    if isinstance(d, (list, tuple)):
        return [_clean(v) for v in d]
    if isinstance(d, float) and not math.isfinite(d):
        return None
    return d


def _frame_kwargs(cfg):
    return {"tol": cfg.tol.pseudo_arc, "degenerate_tol": cfg.tol.degenerate}


def _load_curve(path):
    spec = load_spec(path)
    return spec, curve_from_spec(spec)


def cmd_frame(cfg):
    spec, curve = _load_curve(cfg.inputs[0])
    rows = curvature_table(curve, grid_for(curve.domain, cfg), cfg.order, jobs=cfg.jobs,
                           **_frame_kwargs(cfg))
    if cfg.format == "csv":
        _emit(table_to_csv(rows), cfg.output)
    else:
        out = []
        for r in rows:
            if r.ok:
                out.append({k: v for k, v in asdict(r.frame).items()})
            else:
                out.append({"s": r.s, "error": r.error})
        _emit(_json(_clean({"spec": spec.name, "rows": out})), cfg.output)
    code = EXIT_OK
    for r in rows:
        if not r.ok:
            degenerate = r.error.startswith(("DegenerateCurve", "DegenerateParametrization"))
            code = max(code, EXIT_DEGENERATE if degenerate else EXIT_INVALID)
            print(f"error at s = {r.s}: {r.error}", file=sys.stderr)
        elif r.frame.gram_residual >= cfg.tol.gram or r.frame.frenet_residual >= cfg.tol.frenet:
            code = max(code, EXIT_INVALID)
    return code


def cmd_classify(cfg):
    spec, curve = _load_curve(cfg.inputs[0])
    grid = grid_for(curve.domain, cfg)
    _, k1, k2 = bertrand.curvatures_on_grid(curve, grid, cfg.order, **_frame_kwargs(cfg))
    report = {"spec": spec.name}
    code = EXIT_OK
    try:
        report["obstruction"] = asdict(bertrand.obstruction_from_curvatures(k1, k2))
    except PreconditionError as exc:
        report["obstruction"] = {"error": str(exc)}
    if cfg.fit:
        try:
            report["fit"] = asdict(bertrand.fit_from_curvatures(k1, k2, cfg.tol.condition))
        except NoSolution as exc:
            report["fit"] = {"error": str(exc)}
            code = EXIT_INVALID
    elif cfg.alpha is not None or cfg.beta is not None:
        alpha = cfg.alpha or 0.0
        beta = cfg.beta or 0.0
        report["condition"] = asdict(bertrand._condition_from_curvatures(
            alpha, beta, k1, k2, cfg.tol.condition, bertrand.ELL0_CONSTANCY_TOL))
    _emit_report(report, cfg)
    return code


def _emit_report(report, cfg):
    report = _clean(report)
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["key", "value"])
        for key, value in _flatten(report):
            w.writerow([key, fmt(value) if isinstance(value, float) else value])
        _emit(buf.getvalue(), cfg.output)
    else:
        _emit(_json(report), cfg.output)


def _flatten(d, prefix=""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, list):
            yield key, " ".join(fmt(x) if isinstance(x, float) else str(x) for x in v)
        else:
            yield key, v


def cmd_mate(cfg):
    if cfg.alpha is None and cfg.beta is None:
        raise PreconditionError("mate needs --alpha and/or --beta")
    spec, curve = _load_curve(cfg.inputs[0])
    grid = grid_for(curve.domain, cfg)
    mate, report = bertrand.construct_mate(
        curve, cfg.alpha or 0.0, cfg.beta or 0.0, grid, cfg.order, cfg.tol.condition,
        degenerate_tol=cfg.tol.degenerate)
    _emit_report({"spec": spec.name, **report.to_dict()}, cfg)
    if cfg.table:
        Path(cfg.table).write_text(bertrand.mate_table_to_csv(report.rows), encoding="utf-8")
    if cfg.plot:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s_bar", "x0", "x1", "x2", "x3"])
        for row in bertrand.sample_mate(mate, cfg.samples):
            w.writerow([fmt(x) for x in row])
        Path(cfg.plot).write_text(buf.getvalue(), encoding="utf-8")
    return EXIT_OK if report.worst_residual < cfg.tol.mate else EXIT_INVALID


VERIFY_COLUMNS = ("spec", "status", "null_residual", "unit_residual", "gram_residual",
                  "frenet_residual", "obstruction", "mate_residual", "failures")


def verify_spec(path, cfg):
    """Worst residual per category for one spec file."""
    row = {c: math.nan for c in VERIFY_COLUMNS}
    row.update(spec=Path(path).name, status="ok", failures="")
    failures = []
    try:
        spec, curve = _load_curve(path)
        grid = grid_for(curve.domain, cfg)
        frames = [frame_at(curve, s, cfg.order, validate=False,
                           degenerate_tol=cfg.tol.degenerate) for s in grid]
        row["null_residual"] = max(f.null_residual for f in frames)
        row["unit_residual"] = max(f.unit_residual for f in frames)
        row["gram_residual"] = max(f.gram_residual for f in frames)
        row["frenet_residual"] = max(f.frenet_residual for f in frames)
        if max(row["null_residual"], row["unit_residual"]) >= cfg.tol.pseudo_arc:
            failures.append("pseudo_arc")
        if row["gram_residual"] >= cfg.tol.gram:
            failures.append("gram")
        if row["frenet_residual"] >= cfg.tol.frenet:
            failures.append("frenet")
        k1 = np.array([f.k1 for f in frames])
        k2 = np.array([f.k2 for f in frames])
        try:
            obs = bertrand.obstruction_from_curvatures(k1, k2)
            row["obstruction"] = obs.obstruction
            if obs.classical_mate_possible:
                failures.append("obstruction")
        except PreconditionError:
            pass
        if not failures:
            mate_residual = _verify_mates(curve, k1, k2, cfg)
            if mate_residual is not None:
                row["mate_residual"] = mate_residual
                if mate_residual >= cfg.tol.mate:
                    failures.append("mate")
    except (NullBertrandError, OSError, ArithmeticError) as exc:
        row["status"] = "error"
        failures.append(f"{type(exc).__name__}: {exc}")
    if failures and row["status"] == "ok":
        row["status"] = "fail"
    row["failures"] = "; ".join(failures)
    return row


def _verify_mates(curve, k1, k2, cfg):
    """Worst mate-prediction residual over the constants the curvatures admit."""
    n = min(VERIFY_MATE_POINTS, cfg.samples)
    lo, hi = cfg.range if cfg.range else curve.domain
    grid = [float(x) for x in np.linspace(lo, hi, n)]
    candidates = []
    try:
        fit = bertrand.fit_from_curvatures(k1, k2, cfg.tol.condition)
        if fit.alpha != 0.0:
            candidates.append((fit.alpha, fit.beta))
    except NoSolution:
        pass
    k2_mean = float(np.mean(k2))
    if float(np.max(k2) - np.min(k2)) < 1e-8 * abs(k2_mean):
        candidates.append((0.0, 1.0 / abs(k2_mean)))
    worst = None
    for alpha, beta in candidates:
        try:
            _, report = bertrand.construct_mate(curve, alpha, beta, grid, cfg.order,
                                                cfg.tol.condition,
                                                degenerate_tol=cfg.tol.degenerate)
        except bertrand.ConditionFailed:
            continue
        worst = max(worst or 0.0, report.worst_residual)
    return worst


def cmd_verify(cfg):
    paths = []
    for item in cfg.inputs:
        p = Path(item)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.json")))
        elif p.exists():
            paths.append(p)
        else:
            raise FileNotFoundError(f"no such file or directory: {item}")
    if not paths:
        print("error: no inputs", file=sys.stderr)
        return EXIT_INVALID
    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(lambda p: verify_spec(p, cfg), paths))
    else:
        rows = [verify_spec(p, cfg) for p in paths]
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(VERIFY_COLUMNS)
        for r in rows:
            w.writerow([fmt(r[c]) if isinstance(r[c], float) else r[c] for c in VERIFY_COLUMNS])
        _emit(buf.getvalue(), cfg.output)
    else:
        _emit(_json(_clean({"rows": rows})), cfg.output)
    bad = [r for r in rows if r["status"] != "ok"]
    for r in bad:
        print(f"{r['spec']}: {r['status']} ({r['failures']})", file=sys.stderr)
    return EXIT_INVALID if bad else EXIT_OK


def cmd_corpus(cfg):
    directory = cfg.output or "corpus"
    for path in corpus.write_corpus(directory):
        print(path)
    return EXIT_OK


def cmd_selftest(cfg):
    """Quick end-to-end check on the (1,2) example; one line per check."""
    p = corpus.ExampleParams(1.0, 2.0)
    curve = curve_from_spec(corpus.example_curve(p))
    grid = [float(x) for x in np.linspace(-1.0, 1.0, 9)]
    checks = []
    frames = [frame_at(curve, s, cfg.order) for s in grid]
    checks.append(("curvatures", max(max(abs(f.k1 - 1.5), abs(f.k2 + 2.0)) for f in frames), 1e-8))
    checks.append(("frame", max(
        max(np.max(np.abs(getattr(f, n) - getattr(corpus.closed_form_frame(p, f.s), n)))
            for n in ("L", "N", "W1", "W2")) for f in frames), 1e-9))
    checks.append(("frenet", max(f.frenet_residual for f in frames), 1e-8))
    obs = bertrand.obstruction_from_curvatures([f.k1 for f in frames], [f.k2 for f in frames])
    checks.append(("obstruction", abs(obs.obstruction - 4.0 / 3.0), 1e-8))
    for case, ell0 in (("I", math.sqrt(2.0)), ("II", math.sqrt(5.0 / 6.0))):
        alpha, beta = corpus.example_constants(p, case)
        _, rep = bertrand.construct_mate(curve, alpha, beta, grid[:5], cfg.order)
        checks.append((f"mate_{case}_ell0", abs(rep.ell0 - ell0), 1e-8))
        checks.append((f"mate_{case}_predictions", rep.worst_residual, 1e-6))
    code = EXIT_OK
    for name, value, tol in checks:
        ok = value < tol
        code = code if ok else EXIT_INVALID
        print(f"{'PASS' if ok else 'FAIL'} {name}: {value:.3e} (tol {tol:g})")
    return code


COMMANDS = {
    "frame": cmd_frame,
    "classify": cmd_classify,
    "mate": cmd_mate,
    "verify": cmd_verify,
    "corpus": cmd_corpus,
    "selftest": cmd_selftest,
}


def _parse_range(text):
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError("range needs lo < hi")
    return lo, hi


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--samples", type=int, default=64, help="grid size (default 64)")
    common.add_argument("--range", type=_parse_range, default=None, metavar="LO:HI",
                        help="grid range override (use --range=-1:1 for negative bounds)")
    common.add_argument("--order", type=int, default=DEFAULT_ORDER,
                        help=f"global jet order K (default {DEFAULT_ORDER})")
    common.add_argument("--tol-arc", type=float, default=PSEUDO_ARC_TOL,
                        help=f"pseudo-arc acceptance tolerance (default {PSEUDO_ARC_TOL:g})")
    common.add_argument("--tol-gram", type=float, default=1e-8, help="Gram residual tolerance (default 1e-8)")
    common.add_argument("--tol-frenet", type=float, default=1e-8,
                        help="Frenet residual tolerance (default 1e-8)")
    common.add_argument("--tol-cond", type=float, default=bertrand.CONDITION_TOL,
                        help="Bertrand condition / fit tolerance (default 1e-8)")
    common.add_argument("--tol-mate", type=float, default=MATE_TOL,
                        help="mate prediction tolerance (default 1e-6)")
    common.add_argument("--alpha", type=float, default=None, help="W1 offset constant")
    common.add_argument("--beta", type=float, default=None, help="W2 offset constant")
    common.add_argument("--fit", action="store_true", help="least-squares fit of alpha, beta")
    common.add_argument("--output", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "structured-text"), default=None,
                        help="default: structured-text for classify and mate, csv otherwise")
    common.add_argument("--jobs", type=int, default=1, help="worker threads (output is identical)")
    common.add_argument("--table", default=None, help="mate: verification CSV path")
    common.add_argument("--plot", default=None, help="mate: sampled polyline CSV path")

    parser = argparse.ArgumentParser(
        prog="nullbertrand",
        description="Cartan frames and (1,2)-Bertrand mates of null curves in Minkowski 4-space.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("frame", parents=[common], help="curvature table").add_argument("spec")
    sub.add_parser("classify", parents=[common], help="Bertrand classification").add_argument("spec")
    sub.add_parser("mate", parents=[common], help="construct and verify a mate").add_argument("spec")
    sub.add_parser("verify", parents=[common], help="batch residual suite").add_argument(
        "inputs", nargs="+")
    sub.add_parser("corpus", parents=[common], help="write the example specs")
    sub.add_parser("selftest", parents=[common], help="quick internal checks")
    return parser


def config_from_args(args):
    default_format = "structured-text" if args.command in ("classify", "mate") else "csv"
    inputs = getattr(args, "inputs", None) or ([args.spec] if hasattr(args, "spec") else [])
    return RunConfig(
        command=args.command,
        inputs=inputs,
        samples=args.samples,
        range=args.range,
        order=args.order,
        tol=Tolerances(pseudo_arc=args.tol_arc, gram=args.tol_gram, frenet=args.tol_frenet,
                       condition=args.tol_cond, mate=args.tol_mate),
        alpha=args.alpha,
        beta=args.beta,
        fit=args.fit,
        output=args.output,
        format=args.format or default_format,
        jobs=max(1, args.jobs),
        table=args.table,
        plot=args.plot,
    )


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except Exception as exc:  # noqa: BLE001 - mapped to documented exit codes
        if not isinstance(exc, (NullBertrandError, OSError, ArithmeticError, UnicodeDecodeError)):
            raise
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exit_code_for(exc)


if __name__ == "__main__":
    sys.exit(main())
