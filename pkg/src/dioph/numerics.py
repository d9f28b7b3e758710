"""Precision policy, nearest-integer rounding and exact integer linear algebra."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import mpmath
from mpmath import mp

from .errors import BudgetExceeded, ParamError, RankDeficient

DEFAULT_RELATION_BOUND = 50
DEFAULT_NODE_LIMIT = 2_000_000


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision of real scalars.

    ``bits`` is the mantissa length used for every big-float computation and
    ``guard_bits`` the margin kept below it when two reals are compared.
    """

    bits: int = 256
    guard_bits: int = 16

    def __post_init__(self):
        if self.bits < 64:
            raise ParamError(f"precision bits must be >= 64, got {self.bits}")
        if self.guard_bits < 16:
            raise ParamError(f"guard bits must be >= 16, got {self.guard_bits}")
        if self.guard_bits >= self.bits:
            raise ParamError("guard bits must be smaller than precision bits")

    @property
    def comparison_epsilon(self) -> mpmath.mpf:
        return mpmath.ldexp(mpmath.mpf(1), self.guard_bits - self.bits)

    @property
    def decimal_digits(self) -> int:
        return int(math.ceil(self.bits * math.log10(2))) + 1

    def workprec(self, extra: int = 0):
        return mp.workprec(self.bits + extra)

    def to_mpf(self, value) -> mpmath.mpf:
        """Convert an int, Fraction, str or mpf to an mpf rounded to ``bits``."""
        with self.workprec():
            if isinstance(value, Fraction):
                return mpmath.mpf(value.numerator) / value.denominator
            return +mpmath.mpf(value)


DEFAULT_PRECISION = PrecisionContext()


def nearest_integer_residual(v):
    """Return ``(|v - k|, k)`` with ``k`` the integer nearest to ``v``.

    Exact halves go to the smaller integer, so 1.5 -> 1 and -0.5 -> -1.
    Exact inputs (int, Fraction) give an exact residual.
    """
    if isinstance(v, int):
        return (Fraction(0), v)
    if isinstance(v, Fraction):
        k = math.ceil(v - Fraction(1, 2))
        return (abs(v - k), k)
    if isinstance(v, float):
        v = Fraction(v)
        k = math.ceil(v - Fraction(1, 2))
        return (float(abs(v - k)), k)
    v = mpmath.mpf(v)
    if not mpmath.isfinite(v):
        raise ParamError("residual of a non-finite value")
    k = int(mpmath.ceil(v - mpmath.mpf(0.5)))
    return (abs(v - k), k)


def nearest_integer_ratio(num: int, den: int) -> int:
    """Nearest integer to num/den (den > 0) with the smaller-integer tie rule."""
    # ceil((2 num - den) / (2 den))
    return -((den - 2 * num) // (2 * den))


@dataclass(frozen=True)
class IntegerMatrix:
    entries: tuple

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "IntegerMatrix":
        ent = tuple(tuple(int(a) for a in row) for row in rows)
        if ent and len({len(r) for r in ent}) != 1:
            raise ParamError("ragged integer matrix")
        return cls(ent)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0


def _as_rows(M) -> list[list[int]]:
    if isinstance(M, IntegerMatrix):
        return [list(r) for r in M.entries]
    return [[int(a) for a in row] for row in M]


def integer_matrix_rank(M) -> int:
    """Exact rank over Q by fraction-free (Bareiss) elimination."""
    A = _as_rows(M)
    if not A:
        return 0
    nrows, ncols = len(A), len(A[0])
    rank = 0
    prev = 1
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        piv = next((i for i in range(row, nrows) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        p = A[row][col]
        for i in range(row + 1, nrows):
            a = A[i][col]
            for j in range(col + 1, ncols):
                A[i][j] = (A[i][j] * p - A[row][j] * a) // prev
            A[i][col] = 0
        prev = p
        row += 1
        rank += 1
    return rank


def gcd_of_2x2_minors(M) -> int:
    """gcd of all 2x2 minors of a two-row integer matrix.

    The value 1 means the two rows extend to a basis of Z^cols.
    """
    A = _as_rows(M)
    if len(A) != 2 or len(A[0]) < 2:
        raise ParamError("gcd_of_2x2_minors needs a 2-row matrix with >= 2 columns")
    a, b = A
    g = 0
    for i, j in itertools.combinations(range(len(a)), 2):
        g = math.gcd(g, a[i] * b[j] - a[j] * b[i])
    if g == 0:
        raise RankDeficient("rows are linearly dependent")
    return g


def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction))


def _canonical_sign(c: Sequence[int]) -> tuple:
    for a in c:
        if a:
            return tuple(c) if a > 0 else tuple(-b for b in c)
    return tuple(c)


def bounded_integer_relation(values, H: int, *, ctx: PrecisionContext = DEFAULT_PRECISION,
                             node_limit: int = DEFAULT_NODE_LIMIT,
                             max_bound: int = DEFAULT_RELATION_BOUND) -> Optional[tuple]:
    """Search for a nonzero integer vector c, |c_i| <= H, with sum c_i v_i ~ 0.

    ``values`` may be scalars or equal-length tuples (a joint relation for all
    coordinates). Exact inputs are tested exactly; otherwise the residual must
    be below ``comparison_epsilon`` times the size of the terms. Returns the
    relation of least sup-norm (ties: lexicographically smallest after fixing
    the sign of the first nonzero entry), or None. A None result only means
    nothing was found up to H; it certifies nothing.
    """
    if H < 1:
        raise ParamError("H must be positive")
    if H > max_bound:
        raise ParamError(f"H={H} exceeds configured maximum {max_bound}")
    vals = [v if isinstance(v, (tuple, list)) else (v,) for v in values]
    k = len(vals)
    if k == 0:
        return None
    d = len(vals[0])
    if any(len(v) != d for v in vals):
        raise ParamError("relation values must share one dimension")
    exact = all(_is_exact(a) for v in vals for a in v)
    if exact:
        V = [[Fraction(a) for a in v] for v in vals]
    else:
        V = [[ctx.to_mpf(a) for a in v] for v in vals]
    pivots, coords = _choose_pivots(V, exact, ctx)
    if not pivots:
        # every value is zero: any unit vector is a relation
        return tuple([1] + [0] * (k - 1))
    free = [i for i in range(k) if i not in pivots]
    nodes = (2 * H + 1) ** len(free)
    if nodes > node_limit:
        raise BudgetExceeded(f"relation search needs {nodes} nodes (limit {node_limit})")
    P = [[V[p][r] for p in pivots] for r in coords]
    solve = _exact_solver(P) if exact else _mp_solver(P, ctx)
    best = None
    eps = ctx.comparison_epsilon
    with ctx.workprec():
        for cf in itertools.product(range(-H, H + 1), repeat=len(free)):
            rhs = [-sum(c * V[i][r] for c, i in zip(cf, free)) for r in coords]
            sol = solve(rhs)
            if sol is None:
                continue
            cp = [_round(s) for s in sol]
            if any(abs(c) > H for c in cp):
                continue
            c = [0] * k
            for c_i, i in zip(cf, free):
                c[i] = c_i
            for c_i, i in zip(cp, pivots):
                c[i] = c_i
            if not any(c):
                continue
            if not _residual_ok(V, c, exact, eps):
                continue
            cand = _canonical_sign(c)
            key = (max(abs(a) for a in cand), cand)
            if best is None or key < best[0]:
                best = (key, cand)
    return None if best is None else best[1]


def _round(s) -> int:
    if isinstance(s, Fraction):
        return math.floor(s + Fraction(1, 2))
    return int(mpmath.nint(s))


def _residual_ok(V, c, exact, eps) -> bool:
    d = len(V[0])
    for r in range(d):
        terms = [a * V[i][r] for i, a in enumerate(c) if a]
        s = sum(terms)
        if exact:
            if s != 0:
                return False
        else:
            scale = max([abs(t) for t in terms] + [mpmath.mpf(1)])
            if abs(s) >= eps * scale:
                return False
    return True


def _choose_pivots(V, exact, ctx):
    """Pick a nonsingular square block of maximal size, preferring large |det|.

    Returns (value indices, coordinate indices); empty lists when V is all zero.
    """
    k, d = len(V), len(V[0])
    for size in range(min(k, d), 0, -1):
        best = None
        for rows in itertools.combinations(range(d), size):
            for combo in itertools.combinations(range(k), size):
                block = [[V[p][r] for p in combo] for r in rows]
                if exact:
                    det = abs(_det_fraction(block))
                else:
                    with ctx.workprec():
                        det = abs(mpmath.det(mpmath.matrix(block)))
                if det != 0 and (best is None or det > best[0]):
                    best = (det, list(combo), list(rows))
        if best is not None:
            return best[1], best[2]
    return [], []


def _det_fraction(A):
    A = [row[:] for row in A]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        det *= A[c][c]
        for i in range(c + 1, n):
            f = A[i][c] / A[c][c]
            for j in range(c, n):
                A[i][j] -= f * A[c][j]
    return det


def _exact_solver(P):
    n = len(P)

    def solve(rhs):
        A = [list(P[r]) + [rhs[r]] for r in range(n)]
        for c in range(n):
            p = next(i for i in range(c, n) if A[i][c] != 0)
            A[c], A[p] = A[p], A[c]
            for i in range(n):
                if i != c and A[i][c] != 0:
                    f = A[i][c] / A[c][c]
                    A[i] = [a - f * b for a, b in zip(A[i], A[c])]
        return [A[i][n] / A[i][i] for i in range(n)]

    return solve


def _mp_solver(P, ctx):
    with ctx.workprec():
        Pinv = mpmath.inverse(mpmath.matrix(P))
    n = len(P)

    def solve(rhs):
        return [sum(Pinv[i, j] * rhs[j] for j in range(n)) for i in range(n)]

    return solve
