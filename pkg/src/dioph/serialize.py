"""File formats: matrix JSON, sequence JSONL/CSV, estimate and report JSON.

Every real number is written as a decimal string carrying the working
precision, so files round-trip across languages without binary floats.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import mpmath

from .best_approx import KINDS, SPHERICAL, ApproxSequence
from .errors import InputError
from .geometry import ExtendedVector, ThetaMatrix, make_vector
from .numerics import DEFAULT_PRECISION, PrecisionContext

SEQUENCE_COLUMNS = ("nu", "x", "y", "zeta_sup", "zeta_sph", "Z", "X", "ambiguous")


def dec(value, ctx: PrecisionContext = DEFAULT_PRECISION) -> str:
    """Decimal string of a real at the precision of ``ctx``."""
    if value is None:
        return None
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        value = ctx.to_mpf(value)
    with ctx.workprec():
        v = mpmath.mpf(value)
        if mpmath.isinf(v):
            return "inf" if v > 0 else "-inf"
        return mpmath.nstr(v, ctx.decimal_digits, strip_zeros=True)


def to_jsonable(obj, ctx: PrecisionContext = DEFAULT_PRECISION):
    """Recursively turn reports into JSON-ready data with decimal strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (mpmath.mpf, float, Fraction)):
        return dec(obj, ctx)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v, ctx) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v, ctx) for v in obj]
    if hasattr(obj, "__dataclass_fields__"):
        return {k: to_jsonable(getattr(obj, k), ctx) for k in obj.__dataclass_fields__
                if k not in ("theta",)}
    return str(obj)


def dumps(obj, ctx: PrecisionContext = DEFAULT_PRECISION) -> str:
    return json.dumps(to_jsonable(obj, ctx), indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# matrix


def matrix_to_json(theta: ThetaMatrix) -> str:
    doc = {"n": theta.n, "precision_bits": theta.precision.bits, "rows": theta.entry_tags()}
    if theta.degenerate:
        doc["degenerate"] = True
    return json.dumps(doc, indent=2) + "\n"


def matrix_from_json(text: str, precision_bits=None, *, allow_degenerate=None) -> ThetaMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"matrix file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or "rows" not in doc:
        raise InputError("matrix file needs a 'rows' list")
    rows = doc["rows"]
    if "n" in doc and doc["n"] != len(rows):
        raise InputError(f"matrix file declares n={doc['n']} but has {len(rows)} rows")
    bits = precision_bits or doc.get("precision_bits", DEFAULT_PRECISION.bits)
    try:
        ctx = PrecisionContext(int(bits))
    except (TypeError, ValueError):
        raise InputError(f"bad precision_bits {bits!r}") from None
    if allow_degenerate is None:
        allow_degenerate = bool(doc.get("degenerate", False))
    for r in rows:
        if not isinstance(r, list) or len(r) != 2 or not all(isinstance(v, str) for v in r):
            raise InputError("each row must be a pair of strings")
    return ThetaMatrix.from_values(rows, ctx, allow_degenerate=allow_degenerate)


def read_matrix(path, precision_bits=None, *, allow_degenerate=None) -> ThetaMatrix:
    with open(path, encoding="utf-8") as fh:
        return matrix_from_json(fh.read(), precision_bits, allow_degenerate=allow_degenerate)


# ---------------------------------------------------------------------------
# sequences


def _record_row(nu, v: ExtendedVector, ambiguous, ctx):
    return {
        "nu": nu,
        "x": [str(a) for a in v.x],
        "y": [str(a) for a in v.y],
        "zeta_sup": dec(v.zeta_sup, ctx),
        "zeta_sph": dec(v.zeta_spherical, ctx),
        "Z": dec(v.Z_euclid, ctx),
        "X": v.X_sup,
        "ambiguous": bool(ambiguous),
    }


def _ctx_of(seq):
    return seq.theta.precision if seq.theta is not None else DEFAULT_PRECISION


def sequence_to_jsonl(seq: ApproxSequence) -> str:
    ctx = _ctx_of(seq)
    lines = [json.dumps(_record_row(i + 1, v, f, ctx))
             for i, (v, f) in enumerate(zip(seq.records, seq.ambiguity_flags))]
    return "".join(line + "\n" for line in lines)


def sequence_to_csv(seq: ApproxSequence) -> str:
    ctx = _ctx_of(seq)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SEQUENCE_COLUMNS)
    for i, (v, f) in enumerate(zip(seq.records, seq.ambiguity_flags)):
        row = _record_row(i + 1, v, f, ctx)
        w.writerow([row["nu"], " ".join(row["x"]), " ".join(row["y"]), row["zeta_sup"],
                    row["zeta_sph"], row["Z"], row["X"], "true" if row["ambiguous"] else "false"])
    return buf.getvalue()


def sequence_from_jsonl(text: str, kind: str = SPHERICAL, theta: ThetaMatrix = None,
                        ctx: PrecisionContext = None) -> ApproxSequence:
    """Parse a JSONL sequence. With ``theta`` the distances are recomputed
    exactly and must agree with the file."""
    if kind not in KINDS:
        raise InputError(f"unknown kind {kind!r}")
    ctx = ctx or (theta.precision if theta is not None else DEFAULT_PRECISION)
    records, flags = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
            x = tuple(int(a) for a in row["x"])
            y = tuple(int(a) for a in row["y"])
            if row["nu"] != len(records) + 1:
                raise InputError(f"line {lineno}: records out of order")
            if theta is not None:
                v = make_vector(theta, x, y)
                tol = ctx.comparison_epsilon * max(1, v.Z_euclid)
                if abs(v.zeta_spherical - ctx.to_mpf(row["zeta_sph"])) > tol:
                    raise InputError(f"line {lineno}: zeta_sph disagrees with the matrix")
            else:
                zsq = x[0] ** 2 + x[1] ** 2 + sum(a * a for a in y)
                with ctx.workprec():
                    v = ExtendedVector(x=x, y=y, zeta_sup=ctx.to_mpf(row["zeta_sup"]),
                                       zeta_spherical=ctx.to_mpf(row["zeta_sph"]),
                                       Z_euclid=mpmath.sqrt(zsq), X_sup=max(abs(x[0]), abs(x[1])),
                                       Z_sq=zsq)
            records.append(v)
            flags.append(bool(row.get("ambiguous", False)))
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"line {lineno}: bad sequence record ({exc})") from None
    return ApproxSequence(kind, tuple(records), tuple(flags), theta=theta)


def read_sequence(path, kind: str = SPHERICAL, theta: ThetaMatrix = None) -> ApproxSequence:
    with open(path, encoding="utf-8") as fh:
        return sequence_from_jsonl(fh.read(), kind, theta)


# ---------------------------------------------------------------------------
# estimates and bounds


def estimate_to_json(est, ctx: PrecisionContext = DEFAULT_PRECISION) -> str:
    ratios = []
    for i, b in enumerate(est.beta_ratios):
        nu = est.first_index + i
        a = est.alpha_ratios[i] if i < len(est.alpha_ratios) else None
        ratios.append({"nu": nu, "a": dec(a, ctx), "b": dec(b, ctx)})
    doc = {"alpha_hat": dec(est.alpha_hat, ctx), "beta_hat": dec(est.beta_hat, ctx),
           "flag": est.convergence_flag, "tail_window": est.tail_window,
           "degenerate": est.degenerate, "ratios": ratios}
    return json.dumps(doc, indent=2) + "\n"


def bound_rows(report, digits: int = 20):
    """(name, value-or-empty, note) rows of a BoundReport."""
    rows = []
    for name in report.FIELDS:
        v = getattr(report, name)
        if v is None:
            rows.append((name, "", report.absent.get(name, "")))
        else:
            rows.append((name, mpmath.nstr(v, digits), ""))
    if report.branch_residuals is not None:
        r1, r2 = report.branch_residuals
        rows.append(("printed_branch1_minus_G", mpmath.nstr(r1, digits), ""))
        rows.append(("printed_branch2_minus_G", mpmath.nstr(r2, digits), ""))
    if report.discrepancy:
        for d in report.discrepancy:
            rows.append((f"discrepancy_branch{d['branch']}", mpmath.nstr(d["printed"], digits),
                         f"printed radical disagrees with the fixed-point root "
                         f"(relative error {mpmath.nstr(d['relative_error'], 6)})"))
    return rows


def bounds_to_text(report, fmt: str, ctx: PrecisionContext = DEFAULT_PRECISION) -> str:
    if fmt == "json":
        doc = {"alpha": dec(report.alpha, ctx), "n": report.n, "m": report.m}
        for name in report.FIELDS:
            doc[name] = dec(getattr(report, name), ctx)
        doc["absent"] = dict(report.absent)
        doc["branch_residuals"] = ([dec(v, ctx) for v in report.branch_residuals]
                                   if report.branch_residuals is not None else None)
        doc["discrepancy"] = to_jsonable(report.discrepancy, ctx)
        return json.dumps(doc, indent=2) + "\n"
    rows = bound_rows(report)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("bound", "value", "note"))
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "table":
        width = max(len(r[0]) for r in rows)
        vw = max(len(r[1]) for r in rows)
        lines = [f"alpha = {mpmath.nstr(report.alpha, 20)}"]
        for name, val, note in rows:
            line = f"{name.ljust(width)}  {(val or '-').ljust(vw)}"
            if note:
                line += f"  ({note})"
            lines.append(line.rstrip())
        return "\n".join(lines) + "\n"
    raise InputError(f"unknown format {fmt!r}")
