"""Full invariant suite for one matrix, used by ``dioph verify`` and CI.

Each check yields a row {"name", "status", "detail"} with status pass, fail
or skip. A fail on a hard check (monotonicity, primitivity, pair saturation,
Minkowski, oracle agreement, Lemma 3) makes the suite fail. The report holds
no timings and no worker counts, so reruns are byte-identical.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

import mpmath

from . import best_approx as ba
from .errors import BudgetExceeded, DegeneratePlane, RankDeficient
from .exponents import estimate
from .geometry import SubspaceL
from .numerics import IntegerMatrix, gcd_of_2x2_minors
from .structure import (
    find_abc_pairs,
    find_runs,
    lemma3_subintervals,
    lemma4_deltas,
    alternate_sequences,
    verify_f_monotonicity,
)

PASS, FAIL, SKIP = "pass", "fail", "skip"


class _Suite:
    def __init__(self):
        self.rows = []

    def add(self, name, ok, detail="", hard=True):
        status = SKIP if ok is None else (PASS if ok else FAIL)
        self.rows.append({"name": name, "status": status, "hard": hard, "detail": detail})

    @property
    def failed(self):
        return [r for r in self.rows if r["status"] == FAIL and r["hard"]]


def _sequence_checks(suite, seq, theta, label):
    r = seq.records
    h, m = seq.heights, seq.minima
    bad = [i + 1 for i in range(len(r) - 1) if not (h[i] < h[i + 1])]
    suite.add(f"{label}: heights strictly increasing", not bad, f"{len(r)} records; breaks at {bad}")
    # exact keys decide strictness of the minima
    keys = [v.sup_key if seq.kind == ba.SUP else v.spherical_key for v in r]
    bad = [i + 1 for i in range(len(r) - 1) if not (keys[i] > keys[i + 1])]
    suite.add(f"{label}: minima strictly decreasing", not bad, f"breaks at {bad}")
    bad = [i + 1 for i, v in enumerate(r) if reduce(math.gcd, v.z) != 1]
    suite.add(f"{label}: every record primitive", not bad, f"non-primitive at {bad}")
    bad = []
    for i in range(len(r) - 1):
        try:
            g = gcd_of_2x2_minors(IntegerMatrix.from_rows([list(r[i].z), list(r[i + 1].z)]))
        except RankDeficient:
            g = 0
        if g != 1:
            bad.append(i + 1)
    suite.add(f"{label}: consecutive pairs extend to a basis", not bad, f"failing pairs at {bad}")
    if theta.degenerate:
        suite.add(f"{label}: Minkowski bound", None,
                  "skipped: integer points on L are excluded, so the convex body argument does not apply")
        return
    n = theta.n
    with theta.precision.workprec():
        if seq.kind == ba.SUP:
            C = mpmath.mpf(1)
        else:
            C = mpmath.mpf(ba.minkowski_constant(n)) * (1 + mpmath.mpf(10) ** -12)
        worst = mpmath.mpf(0)
        bad = []
        for i in range(len(r) - 1):
            v = m[i] * mpmath.mpf(h[i + 1]) ** (mpmath.mpf(2) / n)
            worst = max(worst, v)
            if v > C:
                bad.append(i + 1)
    suite.add(f"{label}: Minkowski bound zeta_nu * H_(nu+1)^(2/n) <= {mpmath.nstr(C, 10)}", not bad,
              f"max value {mpmath.nstr(worst, 10)}; violations at {bad}")


def _structure_checks(suite, seq, theta):
    runs = find_runs(seq)
    variants = [("chosen", seq)] + [(f"tie alternative at {i}", s) for i, s in alternate_sequences(seq)]
    for name, s in variants:
        bad, total, worst = [], 0, mpmath.mpf(0)
        for run in find_runs(s):
            for rep in lemma3_subintervals(run, s):
                total += 1
                worst = max(worst, rep.lhs / rep.rhs)
                if rep.verdict != "holds":
                    bad.append(rep.index_range)
        suite.add(f"Lemma 3 on every planar run ({name})", not bad,
                  f"{total} intervals; max lhs/rhs {mpmath.nstr(worst, 8)}; violations {bad}")
    suite.add("planar runs found", True, "; ".join(f"[{r.start_nu},{r.end_k}]" for r in runs) or "none",
              hard=False)
    pairs = find_abc_pairs(seq)
    suite.add("(abc) pairs", True, "; ".join(f"({p.nu},{p.k})" for p in pairs) or "none", hard=False)
    deltas = lemma4_deltas(seq)
    zeros = [d.index_range for d in deltas if d.verdict != "holds"]
    suite.add("Lemma 4 determinants nonzero (informational)", True,
              f"zero determinants at {zeros}; " + deltas[-1].notes[1] if deltas else "no pairs",
              hard=False)
    L = SubspaceL(theta)
    probes = []
    for run in runs:
        try:
            rep = verify_f_monotonicity(L, (run.basis[0].z, run.basis[1].z), samples=64)
        except DegeneratePlane:
            probes.append(f"[{run.start_nu},{run.end_k}] degenerate plane")
            continue
        probes.append(f"[{run.start_nu},{run.end_k}] {rep['case']} {'ok' if rep['ok'] else 'FAILED'}")
        if not rep["ok"]:
            suite.add(f"distance function monotone on run [{run.start_nu},{run.end_k}]", False, str(rep))
    suite.add("distance function probes on run planes", True, "; ".join(probes) or "no runs",
              hard=False)


def _exponent_checks(suite, seq):
    try:
        est = estimate(seq)
    except Exception as exc:
        suite.add("exponent ratios a_nu <= b_nu, a_nu <= b_(nu+1)", None, f"skipped: {exc}")
        return
    a, b = est.alpha_ratios, est.beta_ratios
    bad = [i + est.first_index for i in range(len(a)) if not (a[i] <= b[i] and a[i] <= b[i + 1])]
    suite.add("exponent ratios a_nu <= b_nu, a_nu <= b_(nu+1)", not bad, f"violations at {bad}")
    suite.add("exponent estimate", True,
              f"alpha_hat={mpmath.nstr(est.alpha_hat, 10)} beta_hat={mpmath.nstr(est.beta_hat, 10)} "
              f"flag={est.convergence_flag}", hard=False)


def run_verify(theta, max_height, *, workers: int = 1) -> dict:
    """Run every check for ``theta`` up to ``max_height``; returns the report dict."""
    suite = _Suite()
    bound = Fraction(max_height)
    ctx = theta.precision
    L = SubspaceL(theta)
    with ctx.workprec():
        suite.add("Gram matrix positive definite (smallest eigenvalue >= 1 - eps)",
                  L.lambda_min >= 1 - ctx.comparison_epsilon,
                  f"smallest eigenvalue {mpmath.nstr(L.lambda_min, 12)}")
    suite.add("matrix screening for integral forms", True,
              "degenerate: witness x=%s" % (theta.poss_witness,) if theta.degenerate
              else "no integral combination found up to the screening bound", hard=False)
    seqs = {}
    for kind, fn in ((ba.SUP, ba.enumerate_sup), (ba.SPHERICAL, ba.enumerate_spherical)):
        seq = fn(theta, bound)
        seqs[kind] = seq
        _sequence_checks(suite, seq, theta, kind)
        amb = [i + 1 for i, f in enumerate(seq.ambiguity_flags) if f]
        suite.add(f"{kind}: ties resolved by convention", True, f"ambiguous records {amb}", hard=False)
        limit = ba.oracle_limit(kind)
        if bound <= limit:
            try:
                oracle = ba.brute_force(theta, bound, kind, workers=workers)
                same = seq.same_records(oracle)
                suite.add(f"{kind}: fast enumeration equals brute force", same,
                          f"{len(seq)} vs {len(oracle)} records")
            except BudgetExceeded as exc:
                suite.add(f"{kind}: fast enumeration equals brute force", None, f"skipped: {exc}")
        else:
            suite.add(f"{kind}: fast enumeration equals brute force", None,
                      f"skipped: bound above oracle limit {limit}")
    _structure_checks(suite, seqs[ba.SPHERICAL], theta)
    _exponent_checks(suite, seqs[ba.SPHERICAL])
    return {
        "matrix": {"n": theta.n, "precision_bits": ctx.bits, "rows": theta.entry_tags()},
        "max_height": str(max_height),
        "checks": suite.rows,
        "hard_failures": [r["name"] for r in suite.failed],
        "ok": not suite.failed,
    }
