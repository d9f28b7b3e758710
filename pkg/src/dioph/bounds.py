"""Transference bounds: g(alpha), G(alpha) and the classical comparison formulas.

g is the largest root of

    alpha g = M + alpha (alpha - 1) / (g - alpha + 1),   M = max(alpha - 1, 1).

Clearing the denominator gives the quadratic

    alpha g^2 - (alpha (alpha - 1) + M) g + (alpha - 1)(M - alpha) = 0,

which is what ``solve_g`` solves. For alpha > 1 the constant term is negative,
so the other root is negative and the larger root is the one we want.
The two published closed forms for G = alpha g are evaluated separately as
cross-checks; the one for 1 <= alpha <= 2 does not agree with the equation
(its discriminant carries 4 alpha^2 (alpha - 1) where the quadratic gives
4 alpha (alpha - 1)^2), and ``branch_discrepancy`` reports this.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import mpmath

from .errors import DomainError
from .numerics import DEFAULT_PRECISION, PrecisionContext


def _mpf(v, ctx):
    return ctx.to_mpf(v)


def _M(alpha):
    return max(alpha - 1, mpmath.mpf(1))


def quadratic_coefficients(alpha, ctx: PrecisionContext = DEFAULT_PRECISION):
    """(A, B, C) of A g^2 + B g + C = 0 equivalent to the fixed-point equation."""
    with ctx.workprec():
        a = _mpf(alpha, ctx)
        M = _M(a)
        return a, -(a * (a - 1) + M), (a - 1) * (M - a)


def quadratic_roots(alpha, ctx: PrecisionContext = DEFAULT_PRECISION):
    """Both real roots (smaller, larger) of the cleared quadratic."""
    A, B, C = quadratic_coefficients(alpha, ctx)
    with ctx.workprec():
        disc = B * B - 4 * A * C
        s = mpmath.sqrt(disc)
        # stable form for the smaller root
        big = (-B + s) / (2 * A)
        small = C / (A * big) if big != 0 else (-B - s) / (2 * A)
        return small, big


def fixed_point_residual(alpha, g, ctx: PrecisionContext = DEFAULT_PRECISION):
    """alpha g - M - alpha (alpha - 1)/(g - alpha + 1)."""
    with ctx.workprec():
        a = _mpf(alpha, ctx)
        g = _mpf(g, ctx)
        return a * g - _M(a) - a * (a - 1) / (g - a + 1)


def solve_g(alpha, ctx: PrecisionContext = DEFAULT_PRECISION):
    """Largest solution g of the fixed-point equation, alpha >= 1."""
    with ctx.workprec():
        a = _mpf(alpha, ctx)
    if a < 1:
        raise DomainError(f"g(alpha) needs alpha >= 1, got {alpha}")
    return quadratic_roots(a, ctx)[1]


def G_of_alpha(alpha, ctx: PrecisionContext = DEFAULT_PRECISION):
    g = solve_g(alpha, ctx)
    with ctx.workprec():
        return _mpf(alpha, ctx) * g


def printed_G(alpha, branch: int, ctx: PrecisionContext = DEFAULT_PRECISION):
    """The published radical for G on branch 1 (1 <= alpha <= 2) or 2 (alpha >= 2)."""
    with ctx.workprec():
        a = _mpf(alpha, ctx)
        if branch == 1:
            b = a * a - a + 1
            return (b + mpmath.sqrt(b * b + 4 * a * a * (a - 1))) / 2
        if branch == 2:
            b = a * a - 1
            return (b + mpmath.sqrt(b * b + 4 * a * (a - 1))) / 2
    raise ValueError("branch must be 1 or 2")


def derived_G(alpha, branch: int, ctx: PrecisionContext = DEFAULT_PRECISION):
    """Closed form obtained by clearing the denominator on the given branch."""
    with ctx.workprec():
        a = _mpf(alpha, ctx)
        if branch == 1:
            b = a * a - a + 1
            return (b + mpmath.sqrt(b * b + 4 * a * (a - 1) ** 2)) / 2
        if branch == 2:
            return printed_G(a, 2, ctx)
    raise ValueError("branch must be 1 or 2")


def branch_residuals(alpha, ctx: PrecisionContext = DEFAULT_PRECISION):
    """(printed branch 1 - G, printed branch 2 - G) at alpha."""
    G = G_of_alpha(alpha, ctx)
    with ctx.workprec():
        return printed_G(alpha, 1, ctx) - G, printed_G(alpha, 2, ctx) - G


def branch_discrepancy(alpha, ctx: PrecisionContext = DEFAULT_PRECISION, rel_tol=1e-12):
    """Describe disagreement between the applicable printed radical and the solver.

    Returns None when they agree within ``rel_tol`` (relative).
    """
    with ctx.workprec():
        a = _mpf(alpha, ctx)
    branches = [b for b, ok in ((1, 1 <= a <= 2), (2, a >= 2)) if ok]
    G = G_of_alpha(a, ctx)
    out = []
    for b in branches:
        p = printed_G(a, b, ctx)
        with ctx.workprec():
            rel = abs(p - G) / G
        if rel > rel_tol:
            out.append({"branch": b, "printed": p, "solver": G, "relative_error": rel})
    return out or None


@dataclass(frozen=True)
class BoundReport:
    """Lower bounds for beta at a given alpha. Absent entries are None and
    ``absent`` maps the field name to the reason."""

    alpha: object
    n: Optional[int]
    m: Optional[int]
    g_value: Optional[object] = None
    G_value: Optional[object] = None
    jarnik_two_var: Optional[object] = None
    jarnik_simultaneous: Optional[object] = None
    jarnik_high_m: Optional[object] = None
    schmidt_summerer_i: Optional[object] = None
    schmidt_summerer_ii: Optional[object] = None
    simultaneous_three: Optional[object] = None
    linear_form_three: Optional[object] = None
    dim_R_bound: Optional[object] = None
    branch_residuals: Optional[tuple] = None
    discrepancy: Optional[list] = None
    absent: dict = field(default_factory=dict)

    FIELDS = ("g_value", "G_value", "jarnik_two_var", "jarnik_simultaneous", "jarnik_high_m",
              "schmidt_summerer_i", "schmidt_summerer_ii", "simultaneous_three", "linear_form_three",
              "dim_R_bound")


def comparison_table(alpha, n: Optional[int] = None, m: Optional[int] = 2, *,
                     dim_R: Optional[int] = None,
                     ctx: PrecisionContext = DEFAULT_PRECISION) -> BoundReport:
    """Evaluate every bound whose hypotheses fit (alpha, n, m)."""
    vals, absent = {}, {}
    with ctx.workprec():
        a = _mpf(alpha, ctx)
        if a <= 0:
            raise DomainError("alpha must be positive")

        def put(name, cond, reason, fn):
            if cond:
                vals[name] = fn()
            else:
                absent[name] = reason

        put("g_value", a >= 1, "needs alpha >= 1", lambda: solve_g(a, ctx))
        put("G_value", a >= 1, "needs alpha >= 1", lambda: a * vals["g_value"])
        put("jarnik_two_var", m == 2, "stated for m = 2", lambda: a * (a - 1))
        put("jarnik_simultaneous", m == 1 and a < 1,
            "stated for m = 1 with alpha < 1", lambda: a * a / (1 - a))
        put("jarnik_high_m", m is not None and m >= 3 and a >= mpmath.mpf(5 * m * m) ** (m - 1),
            "stated for m >= 3 with alpha >= (5 m^2)^(m-1)",
            lambda: a * (a ** (mpmath.mpf(1) / (m - 1)) - 3))
        put("schmidt_summerer_i", m == 1 and n is not None and n >= 2 and a < 1,
            "stated for m = 1, n >= 2 with alpha < 1",
            lambda: a * (a + n - 2) / ((n - 1) * (1 - a)))
        put("schmidt_summerer_ii", n == 1 and m is not None and m >= 2,
            "stated for n = 1, m >= 2",
            lambda: a * (m - 1) * (a - 1) / (1 + (m - 2) * a))

        def moisa():
            r = a / (1 - a)
            return a / 2 * (r + mpmath.sqrt(r * r + 4 * r))

        put("simultaneous_three", m == 1 and n == 3 and a < 1,
            "stated for m = 1, n = 3 with alpha < 1", moisa)
        put("linear_form_three", m == 3 and n == 1, "stated for m = 3, n = 1",
            lambda: a * (mpmath.sqrt(a + 1 / a - mpmath.mpf(7) / 4) + 1 / a - mpmath.mpf(1) / 2))
        put("dim_R_bound", dim_R is not None and dim_R > 2 and a < 1,
            "needs dim R > 2 and alpha < 1",
            lambda: a * (a + dim_R - 3) / ((dim_R - 2) * (1 - a)))
    res = disc = None
    if a >= 1:
        res = branch_residuals(a, ctx)
        disc = branch_discrepancy(a, ctx)
    return BoundReport(alpha=a, n=n, m=m, branch_residuals=res, discrepancy=disc,
                       absent=absent, **vals)
