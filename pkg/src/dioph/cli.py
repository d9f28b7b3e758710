"""Command line entry point: ``dioph <command> [options]``.

Exit codes: 0 success, 2 input error, 3 precision exhausted, 4 invariant
violation, 5 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath

from . import best_approx as ba
from . import serialize as ser
from .bounds import comparison_table
from .errors import DiophError, InputError, InvariantViolation
from .exponents import estimate
from .gallery import GallerySpec, build
from .numerics import PrecisionContext
from .plot import plot_staircase
from .structure import (
    dimension_diagnostics,
    find_abc_pairs,
    find_runs,
    lemma3_check,
    lemma4_deltas,
    lemma5_report,
    lemma5_summary,
    lemma6_report,
)
from .verify import run_verify

COMMANDS = ("enumerate", "exponents", "analyze", "bounds", "gallery", "verify")


@dataclass
class RunConfig:
    command: str
    matrix_path: Optional[str] = None
    input_path: Optional[str] = None
    kind: str = ba.SPHERICAL
    max_height: Optional[str] = None
    precision_bits: Optional[int] = None
    tail_window: Optional[int] = None
    format: str = "json"
    plot_path: Optional[str] = None
    seed: Optional[int] = None
    alpha_override: Optional[str] = None
    epsilon: str = "0.1"
    n: Optional[int] = None
    m: Optional[int] = None
    out: Optional[str] = None
    workers: int = 1
    gallery_kind: Optional[str] = None
    params: dict = field(default_factory=dict)

    def validate(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.precision_bits is not None and self.precision_bits < 64:
            raise InputError("--precision-bits must be at least 64")
        if self.max_height is not None:
            try:
                h = Fraction(self.max_height)
            except (ValueError, ZeroDivisionError):
                raise InputError(f"bad --max-height {self.max_height!r}") from None
            if h <= 1:
                raise InputError("--max-height must exceed 1")
        if self.workers < 1:
            raise InputError("--workers must be positive")


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _need(value, flag):
    if value is None:
        raise InputError(f"{flag} is required")
    return value


def _matrix(cfg):
    return ser.read_matrix(_need(cfg.matrix_path, "--matrix"), cfg.precision_bits)


def _sequence(cfg, kind):
    """Sequence from --input, or enumerated from --matrix and --max-height."""
    theta = ser.read_matrix(cfg.matrix_path, cfg.precision_bits) if cfg.matrix_path else None
    if cfg.input_path:
        return ser.read_sequence(cfg.input_path, kind, theta)
    if theta is None:
        raise InputError("give --input, or --matrix with --max-height")
    h = Fraction(_need(cfg.max_height, "--max-height"))
    return ba.enumerate_sup(theta, h) if kind == ba.SUP else ba.enumerate_spherical(theta, h)


def cmd_enumerate(cfg):
    theta = _matrix(cfg)
    h = Fraction(_need(cfg.max_height, "--max-height"))
    seq = ba.enumerate_sup(theta, h) if cfg.kind == ba.SUP else ba.enumerate_spherical(theta, h)
    if cfg.format == "csv":
        _emit(ser.sequence_to_csv(seq), cfg.out)
    elif cfg.format in ("json", "jsonl"):
        _emit(ser.sequence_to_jsonl(seq), cfg.out)
    else:
        raise InputError("enumerate supports --format json or csv")
    if cfg.plot_path and seq.records:
        plot_staircase(ba.staircase(seq), None, cfg.plot_path)
    return 0


def cmd_exponents(cfg):
    seq = _sequence(cfg, cfg.kind)
    ctx = seq.theta.precision if seq.theta is not None else PrecisionContext(cfg.precision_bits or 256)
    est = estimate(seq, cfg.tail_window, ctx=ctx)
    if cfg.format == "table":
        text = (f"alpha_hat  {mpmath.nstr(est.alpha_hat, 15)}\n"
                f"beta_hat   {mpmath.nstr(est.beta_hat, 15)}\n"
                f"flag       {est.convergence_flag}\n"
                f"window     {est.tail_window}\n")
    else:
        text = ser.estimate_to_json(est, ctx)
    _emit(text, cfg.out)
    if cfg.plot_path:
        plot_staircase(ba.staircase(seq), est, cfg.plot_path)
    return 0


def cmd_analyze(cfg):
    seq = _sequence(cfg, ba.SPHERICAL)
    ctx = seq.theta.precision if seq.theta is not None else PrecisionContext(cfg.precision_bits or 256)
    try:
        est = estimate(seq, cfg.tail_window, ctx=ctx)
    except DiophError:
        est = None
    if cfg.alpha_override is not None:
        alpha = ctx.to_mpf(cfg.alpha_override)
        alpha_source = "user supplied"
    elif est is not None:
        alpha = est.alpha_hat
        alpha_source = "estimated alpha_hat (not the true exponent)"
    else:
        alpha, alpha_source = None, "unavailable"
    runs = find_runs(seq)
    pairs = find_abc_pairs(seq)
    report = {
        "records": len(seq),
        "alpha": alpha,
        "alpha_source": alpha_source,
        "runs": [{"start_nu": r.start_nu, "end_k": r.end_k, "lattice_det": r.lattice_det,
                  "diagnostics": r.diagnostics} for r in runs],
        "lemma3": [lemma3_check(r, seq) for r in runs],
        "lemma4": lemma4_deltas(seq, est),
        "abc_pairs": [{"nu": p.nu, "k": p.k} for p in pairs],
    }
    if alpha is not None and alpha > 1:
        l5 = [lemma5_report(p, seq, alpha) for p in pairs]
        report["lemma5"] = l5
        report["lemma5_summary"] = lemma5_summary(l5)
    else:
        report["lemma5"] = "not run: needs alpha > 1"
    if alpha is not None and alpha > 2:
        report["lemma6"] = lemma6_report(seq, alpha, ctx.to_mpf(cfg.epsilon))
    else:
        report["lemma6"] = "not run: needs alpha > 2"
    if seq.records:
        report["dimension"] = dimension_diagnostics(seq)
    _emit(ser.dumps(report, ctx), cfg.out)
    return 0


def cmd_bounds(cfg):
    ctx = PrecisionContext(cfg.precision_bits or 256)
    alpha = _need(cfg.alpha_override, "--alpha")
    rep = comparison_table(ctx.to_mpf(alpha), cfg.n, cfg.m if cfg.m is not None else 2, ctx=ctx)
    _emit(ser.bounds_to_text(rep, cfg.format, ctx), cfg.out)
    return 0


def cmd_gallery(cfg):
    ctx = PrecisionContext(cfg.precision_bits or 256)
    spec = GallerySpec(_need(cfg.gallery_kind, "--kind"), _need(cfg.n, "--n"), cfg.seed or 0,
                       ctx, dict(cfg.params))
    g = build(spec)
    _emit(ser.matrix_to_json(g.theta), cfg.out)
    for note in g.notes:
        sys.stderr.write(f"note: {note}\n")
    return 0


def cmd_verify(cfg):
    theta = _matrix(cfg)
    h = _need(cfg.max_height, "--max-height")
    report = run_verify(theta, Fraction(h), workers=cfg.workers)
    if cfg.format == "table":
        lines = [f"{r['status'].upper():4}  {r['name']}  {r['detail']}" for r in report["checks"]]
        text = "\n".join(lines) + f"\nresult: {'ok' if report['ok'] else 'FAILED'}\n"
    else:
        text = json.dumps(report, indent=2) + "\n"
    _emit(text, cfg.out)
    if not report["ok"]:
        raise InvariantViolation("hard invariant violated: " + ", ".join(report["hard_failures"]))
    return 0


HANDLERS = {"enumerate": cmd_enumerate, "exponents": cmd_exponents, "analyze": cmd_analyze,
            "bounds": cmd_bounds, "gallery": cmd_gallery, "verify": cmd_verify}


def _param(text):
    if "=" not in text:
        raise argparse.ArgumentTypeError("expected key=value")
    k, v = text.split("=", 1)
    try:
        return k, int(v)
    except ValueError:
        try:
            return k, float(v)
        except ValueError:
            return k, v


def build_parser():
    p = argparse.ArgumentParser(prog="dioph", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("json", "csv", "table"), default="json"):
        sp.add_argument("--precision-bits", type=int, help="working precision in bits (>= 64)")
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--out", help="output file (default stdout)")

    e = sub.add_parser("enumerate", help="best approximation records of a matrix")
    e.add_argument("--matrix", required=True, help="matrix JSON file")
    e.add_argument("--kind", choices=ba.KINDS, default=ba.SPHERICAL)
    e.add_argument("--max-height", required=True, help="height bound Z")
    e.add_argument("--plot", help="write an SVG plot to this path")
    e.add_argument("--workers", type=int, default=1, help="processes for the oracle scan")
    common(e, ("json", "csv"))

    x = sub.add_parser("exponents", help="estimate the uniform and ordinary exponents")
    x.add_argument("--input", help="sequence file (JSONL or CSV)")
    x.add_argument("--matrix", help="matrix JSON file, enumerated when --input is absent")
    x.add_argument("--max-height", help="height bound used with --matrix")
    x.add_argument("--kind", choices=ba.KINDS, default=ba.SPHERICAL)
    x.add_argument("--tail-window", type=int, help="records in the tail fit")
    x.add_argument("--plot", help="write an SVG plot to this path")
    common(x, ("json", "table"))

    a = sub.add_parser("analyze", help="structural checks on a spherical sequence")
    a.add_argument("--input", help="sequence file (JSONL or CSV)")
    a.add_argument("--matrix", help="matrix JSON file, enumerated when --input is absent")
    a.add_argument("--max-height", help="height bound used with --matrix")
    a.add_argument("--alpha", help="alpha used by the lemma checks (default: alpha_hat)")
    a.add_argument("--epsilon", default="0.1", help="epsilon for the Lemma 6 check")
    a.add_argument("--tail-window", type=int, help="records in the tail fit")
    common(a, ("json",))

    b = sub.add_parser("bounds", help="transference bounds at a given alpha")
    b.add_argument("--alpha", required=True)
    b.add_argument("--n", type=int)
    b.add_argument("--m", type=int, default=2)
    common(b, ("json", "csv", "table"))

    g = sub.add_parser("gallery", help="write a test matrix")
    g.add_argument("--kind", required=True, choices=("random", "remark4", "liouville", "algebraic"))
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--param", type=_param, action="append", default=[],
                   help="kind-specific parameter, e.g. a=3 for liouville")
    common(g, ("json",))

    v = sub.add_parser("verify", help="run the full invariant suite on a matrix")
    v.add_argument("--matrix", required=True, help="matrix JSON file")
    v.add_argument("--max-height", required=True, help="height bound Z")
    v.add_argument("--workers", type=int, default=1, help="processes for the oracle scan")
    common(v, ("json", "table"))
    return p


def config_from_args(args) -> RunConfig:
    d = vars(args)
    cfg = RunConfig(command=args.command)
    cfg.matrix_path = d.get("matrix")
    cfg.input_path = d.get("input")
    cfg.max_height = d.get("max_height")
    cfg.precision_bits = d.get("precision_bits")
    cfg.tail_window = d.get("tail_window")
    cfg.format = d.get("format", "json")
    cfg.plot_path = d.get("plot")
    cfg.seed = d.get("seed")
    cfg.alpha_override = d.get("alpha")
    cfg.epsilon = d.get("epsilon") or "0.1"
    cfg.n = d.get("n")
    cfg.m = d.get("m")
    cfg.out = d.get("out")
    cfg.workers = d.get("workers") or 1
    if args.command == "gallery":
        cfg.gallery_kind = args.kind
        cfg.params = dict(args.param)
    elif d.get("kind"):
        cfg.kind = args.kind
    return cfg


def run(cfg: RunConfig) -> int:
    cfg.validate()
    return HANDLERS[cfg.command](cfg)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(config_from_args(args))
    except DiophError as exc:
        sys.stderr.write(f"error: {exc}\n")
        if exc.exit_code == 3:
            sys.stderr.write("hint: rerun with a larger --precision-bits\n")
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
