"""Finite-prefix estimates of the uniform and ordinary exponents.

On a record sequence with heights Z_nu and minima zeta_nu,

    a_nu = -log zeta_nu / log Z_{nu+1}     (uniform)
    b_nu = -log zeta_nu / log Z_nu         (ordinary)

The exponents are limits (lim inf of a, lim sup of b); a prefix only gives
tail-window summaries, labelled with a convergence flag.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import mpmath

from .errors import EnvelopeInvalid, InsufficientData, ParamError
from .numerics import DEFAULT_PRECISION, PrecisionContext

STABLE = "stable"
DRIFTING = "drifting"
INSUFFICIENT = "insufficient"
SPREAD_LIMIT = 0.05


@dataclass(frozen=True)
class ExponentEstimate:
    alpha_ratios: tuple
    beta_ratios: tuple
    alpha_hat: object
    beta_hat: object
    tail_window: int
    convergence_flag: str
    first_index: int = 1
    dropped: int = 0
    degenerate: bool = False


def default_tail_window(count: int) -> int:
    return max(5, math.ceil(count / 3))


def _spread(vals):
    lo, hi = min(vals), max(vals)
    mean = sum(vals) / len(vals)
    if mean == 0:
        return mpmath.inf
    return (hi - lo) / abs(mean)


def estimate_from_values(heights: Sequence, minima: Sequence, tail_window: Optional[int] = None, *,
                         ctx: PrecisionContext = DEFAULT_PRECISION,
                         degenerate: bool = False) -> ExponentEstimate:
    """Ratios and tail summaries from parallel lists of heights and minima.

    Leading entries with height <= 1 are dropped (log 1 = 0); they only occur
    at the very start of a sequence.
    """
    if len(heights) != len(minima):
        raise ParamError("heights and minima differ in length")
    with ctx.workprec():
        H = [ctx.to_mpf(h) if not isinstance(h, int) else mpmath.mpf(h) for h in heights]
        Z = [ctx.to_mpf(v) if not isinstance(v, int) else mpmath.mpf(v) for v in minima]
    drop = 0
    while drop < len(H) and H[drop] <= 1:
        drop += 1
    H, Z = H[drop:], Z[drop:]
    count = len(H)
    w = default_tail_window(count) if tail_window is None else int(tail_window)
    if w < 1:
        raise ParamError("tail_window must be positive")
    if count < w + 2:
        raise InsufficientData(
            f"{count} usable records, need at least tail_window + 2 = {w + 2}")
    if any(z <= 0 for z in Z):
        raise ParamError("minima must be positive")
    with ctx.workprec(16):
        logs = [mpmath.log(h) for h in H]
        a = tuple(-mpmath.log(Z[i]) / logs[i + 1] for i in range(count - 1))
        b = tuple(-mpmath.log(Z[i]) / logs[i] for i in range(count))
        ta, tb = a[-w:], b[-w:]
        alpha_hat = +min(ta)
        beta_hat = +max(tb)
        if len(ta) < 3 or len(tb) < 3:
            flag = INSUFFICIENT
        elif _spread(ta) < SPREAD_LIMIT and _spread(tb) < SPREAD_LIMIT:
            flag = STABLE
        else:
            flag = DRIFTING
    return ExponentEstimate(a, b, alpha_hat, beta_hat, w, flag, first_index=drop + 1,
                            dropped=drop, degenerate=degenerate)


def estimate(seq, tail_window: Optional[int] = None, *,
             ctx: PrecisionContext = DEFAULT_PRECISION) -> ExponentEstimate:
    """Exponent estimate for an ApproxSequence (either kind)."""
    degenerate = any("degenerate" in note for note in getattr(seq, "notes", ()))
    return estimate_from_values(seq.heights, seq.minima, tail_window, ctx=ctx,
                                degenerate=degenerate)


@dataclass(frozen=True)
class TheoremFReport:
    alpha: object
    c: object
    t_min: object
    t_max: object
    hits: tuple
    checked: int
    warning: Optional[str] = None

    @property
    def count(self) -> int:
        return len(self.hits)

    @property
    def largest(self):
        return self.hits[-1] if self.hits else None


def fit_envelope(stair, alpha, t_min, t_max):
    """Smallest c with stair(t) <= c t^-alpha on [t_min, t_max].

    On a step [t_nu, t_{nu+1}) the product zeta_nu t^alpha grows with t, so
    its supremum sits at the right end (clipped to t_max).
    """
    bps = stair.breakpoints
    c = None
    for i, (t, v) in enumerate(bps):
        right = bps[i + 1][0] if i + 1 < len(bps) else t_max
        if right <= t_min or t > t_max:
            continue
        cand = v * mpmath.mpf(min(right, t_max)) ** alpha
        c = cand if c is None else max(c, cand)
    return c


def theorem_F_check(stair, alpha, t_min, t_max) -> TheoremFReport:
    """Breakpoints t in [t_min, t_max] with stair(t) <= psi(1/(6 t psi(t)))
    for the envelope psi(t) = c t^-alpha."""
    alpha = mpmath.mpf(alpha)
    if alpha <= 1:
        raise EnvelopeInvalid("the envelope needs alpha > 1 so that t psi(t) -> 0")
    t_min, t_max = mpmath.mpf(t_min), mpmath.mpf(t_max)
    if not t_min < t_max:
        raise ParamError("need t_min < t_max")
    c = fit_envelope(stair, alpha, t_min, t_max)
    if c is None or not mpmath.isfinite(c) or c <= 0:
        raise EnvelopeInvalid("no staircase steps inside [t_min, t_max]")

    def psi(t):
        return c * mpmath.mpf(t) ** (-alpha)

    hits, checked = [], 0
    for t, v in stair.breakpoints:
        if t < t_min or t > t_max:
            continue
        checked += 1
        if v > psi(t) * (1 + mpmath.mpf(2) ** (-mpmath.mp.prec + 8)):
            raise EnvelopeInvalid(f"fitted envelope fails to majorize the staircase at t={t}")
        s = 1 / (6 * t * psi(t))
        if v <= psi(s):
            hits.append(t)
    warning = None
    if not hits:
        warning = ("no breakpoint satisfies the condition in this window; "
                   "the statement concerns arbitrarily large t, not a finite range")
    return TheoremFReport(alpha, c, t_min, t_max, tuple(hits), checked, warning)
