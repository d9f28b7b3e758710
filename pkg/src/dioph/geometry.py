"""The matrix Theta, the subspace L, extended vectors and the two distance functionals.

Every entry of Theta is held as an exact rational. Irrational inputs are
rounded once, at load, to a dyadic rational with ``precision.bits`` fractional
bits; after that all residuals and distances are evaluated exactly in integer
arithmetic. With the common denominator D and integer numerators T (n x 2):

    D * r_j          = T_j . x - D y_j                     (integer)
    D^2 det(S) zeta^2 = |D r|^2 det(S) - u^T adj(S) u      (integer)

where S = D^2 I_2 + T^T T and u = T^T (D r). The second line is the
Woodbury form of r^T (I + M M^T)^{-1} r, so spherical distances need a 2x2
adjugate rather than an n x n inverse.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

import mpmath

from .errors import IllConditioned, InputError, ParamError, PossViolation
from .numerics import (
    DEFAULT_PRECISION,
    PrecisionContext,
    nearest_integer_ratio,
)

DEFAULT_POSS_BOUND = 50
GOLDEN_TAG = "golden"


def parse_entry(tag: str, ctx: PrecisionContext):
    """Evaluate one matrix-file entry.

    Returns ``(value, exact)`` where value is a Fraction for rational inputs
    and an mpf at working precision otherwise. Accepted forms: a decimal
    literal, ``ratio:p/q``, ``sqrt:N``, ``golden`` and ``golden:-1`` (the
    golden ratio minus one).
    """
    tag = tag.strip()
    try:
        if tag.startswith("ratio:"):
            return Fraction(tag[6:]), True
        if tag.startswith("sqrt:"):
            N = Fraction(tag[5:])
            if N < 0:
                raise ParamError(f"negative radicand in {tag!r}")
            rn, rd = math.isqrt(N.numerator), math.isqrt(N.denominator)
            if rn * rn == N.numerator and rd * rd == N.denominator:
                return Fraction(rn, rd), True
            with ctx.workprec():
                return mpmath.sqrt(mpmath.mpf(N.numerator) / N.denominator), False
        if tag == GOLDEN_TAG:
            with ctx.workprec():
                return (1 + mpmath.sqrt(5)) / 2, False
        if tag == GOLDEN_TAG + ":-1":
            with ctx.workprec():
                return (mpmath.sqrt(5) - 1) / 2, False
        return Fraction(tag), True
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse matrix entry {tag!r}: {exc}") from None


def _to_fraction(value, ctx: PrecisionContext):
    if isinstance(value, (int, Fraction)):
        return Fraction(value), True
    if isinstance(value, str):
        v, exact = parse_entry(value, ctx)
        return _to_fraction(v, ctx)[0], exact
    if isinstance(value, float):
        return Fraction(value), False
    v = ctx.to_mpf(value)
    if not mpmath.isfinite(v):
        raise InputError("non-finite matrix entry")
    # v already carries at most ctx.bits significant bits; take it exactly
    man, exp = v.man_exp
    return Fraction(int(man)) * Fraction(2) ** int(exp), False


@dataclass(frozen=True)
class ThetaMatrix:
    """The n x 2 matrix of coefficients; row j holds (theta_j^1, theta_j^2)."""

    rows: tuple
    precision: PrecisionContext = DEFAULT_PRECISION
    exact: tuple = ()
    labels: tuple = ()
    degenerate: bool = False
    poss_witness: Optional[tuple] = None

    @classmethod
    def from_values(cls, rows, precision: PrecisionContext = DEFAULT_PRECISION, *,
                    labels=None, check_poss: bool = True, allow_degenerate: bool = False,
                    poss_bound: int = DEFAULT_POSS_BOUND) -> "ThetaMatrix":
        """Build from rows of numbers (int, Fraction, str tags, mpf).

        The matrix is screened for integer x with every form integral up to
        ``poss_bound``. A hit raises PossViolation unless ``allow_degenerate``,
        in which case the matrix is flagged degenerate and the enumerators skip
        integer points lying exactly on L.
        """
        rows = [tuple(r) for r in rows]
        if not rows:
            raise InputError("matrix needs at least one row")
        if any(len(r) != 2 for r in rows):
            raise InputError("every row needs exactly two entries (m = 2)")
        fr, ex = [], []
        for r in rows:
            a, ea = _to_fraction(r[0], precision)
            b, eb = _to_fraction(r[1], precision)
            fr.append((a, b))
            ex.append((ea, eb))
        if labels is None:
            labels = tuple(tuple(str(v) if isinstance(v, str) else "" for v in r) for r in rows)
        theta = cls(tuple(fr), precision, tuple(ex), tuple(labels))
        if not check_poss:
            return theta
        witness = poss_screen(theta, poss_bound)
        if witness is not None:
            if not allow_degenerate:
                raise PossViolation(f"x={witness} makes every form integral", witness)
            object.__setattr__(theta, "degenerate", True)
            object.__setattr__(theta, "poss_witness", witness)
        return theta

    @property
    def n(self) -> int:
        return len(self.rows)

    @cached_property
    def denominator(self) -> int:
        D = 1
        for a, b in self.rows:
            D = math.lcm(D, a.denominator, b.denominator)
        return D

    @cached_property
    def numerators(self) -> tuple:
        D = self.denominator
        return tuple((int(a * D), int(b * D)) for a, b in self.rows)

    @cached_property
    def _woodbury(self):
        D = self.denominator
        T = self.numerators
        s11 = D * D + sum(t1 * t1 for t1, _ in T)
        s22 = D * D + sum(t2 * t2 for _, t2 in T)
        s12 = sum(t1 * t2 for t1, t2 in T)
        det = s11 * s22 - s12 * s12
        return (s11, s12, s22, det, D * D * det)

    @property
    def spherical_scale(self) -> int:
        """Integer K with zeta^2 = spherical_key / K."""
        return self._woodbury[4]

    def mp_rows(self):
        ctx = self.precision
        return [(ctx.to_mpf(a), ctx.to_mpf(b)) for a, b in self.rows]

    def float_rows(self):
        return [(float(a), float(b)) for a, b in self.rows]

    def entry_tags(self) -> list:
        """String form of every entry for the matrix file (exact decimals or tags)."""
        out = []
        for (a, b), (la, lb) in zip(self.rows, self.labels or [("", "")] * self.n):
            out.append([la or _fraction_tag(a), lb or _fraction_tag(b)])
        return out

    # exact kernels -----------------------------------------------------------

    def residual_numerators(self, x, y) -> list:
        D = self.denominator
        return [t1 * x[0] + t2 * x[1] - D * yj for (t1, t2), yj in zip(self.numerators, y)]

    def nearest_y(self, x) -> tuple:
        D = self.denominator
        return tuple(nearest_integer_ratio(t1 * x[0] + t2 * x[1], D) for t1, t2 in self.numerators)

    def has_nearest_tie(self, x) -> bool:
        D = self.denominator
        return any(2 * ((t1 * x[0] + t2 * x[1]) % D) == D for t1, t2 in self.numerators)

    def sup_key(self, x, y=None) -> int:
        """max_j |D r_j| -- proportional to zeta^sup."""
        if y is None:
            y = self.nearest_y(x)
        return max(abs(R) for R in self.residual_numerators(x, y))

    def spherical_key(self, x, y) -> int:
        """Integer N with zeta^2 = N / spherical_scale."""
        s11, s12, s22, det, _ = self._woodbury
        R = self.residual_numerators(x, y)
        T = self.numerators
        u1 = sum(t1 * r for (t1, _), r in zip(T, R))
        u2 = sum(t2 * r for (_, t2), r in zip(T, R))
        rr = sum(r * r for r in R)
        return rr * det - (s22 * u1 * u1 - 2 * s12 * u1 * u2 + s11 * u2 * u2)

    def sup_value(self, key: int):
        ctx = self.precision
        with ctx.workprec():
            return mpmath.mpf(key) / self.denominator

    def spherical_value(self, key: int):
        ctx = self.precision
        with ctx.workprec():
            return mpmath.sqrt(mpmath.mpf(key) / self.spherical_scale)


def _fraction_tag(f: Fraction) -> str:
    if f.denominator == 1:
        return str(f.numerator)
    d = f.denominator
    twos = fives = 0
    while d % 2 == 0:
        d //= 2
        twos += 1
    while d % 5 == 0:
        d //= 5
        fives += 1
    if d != 1:
        return f"ratio:{f.numerator}/{f.denominator}"
    digits = max(twos, fives)
    scaled = f * 10 ** digits
    sign = "-" if scaled < 0 else ""
    s = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def poss_screen(theta: ThetaMatrix, H: int = DEFAULT_POSS_BOUND) -> Optional[tuple]:
    """Return the smallest x, |x|_sup <= H, making every form integral, or None.

    With the exact storage theta = T / D this asks for D | T x in every row,
    so the scan is pure integer arithmetic. Candidates are visited by
    sup-norm, then lexicographically among sign-canonical x. Heuristic:
    finding nothing proves nothing beyond H.
    """
    if H < 1:
        raise ParamError("H must be positive")
    D = theta.denominator
    if D == 1:
        return (1, 0)
    T = theta.numerators
    for h in range(1, H + 1):
        shell = [(x1, x2) for x1 in range(0, h + 1) for x2 in range(-h, h + 1)
                 if max(x1, abs(x2)) == h and (x1 > 0 or x2 > 0)]
        for x in sorted(shell):
            if all((t1 * x[0] + t2 * x[1]) % D == 0 for t1, t2 in T):
                return x
    return None


@dataclass(frozen=True)
class SubspaceL:
    """L = {(x, y) : y = Theta x} with cached Gram matrix G = I + M M^T and its inverse."""

    theta: ThetaMatrix
    gram: object = field(init=False, repr=False)
    gram_inverse: object = field(init=False, repr=False)
    eigenvalues: tuple = field(init=False, repr=False)

    def __post_init__(self):
        ctx = self.theta.precision
        rows = self.theta.mp_rows()
        n = self.theta.n
        with ctx.workprec(32):
            G = mpmath.matrix(n, n)
            for j in range(n):
                for k in range(n):
                    G[j, k] = (1 if j == k else 0) + rows[j][0] * rows[k][0] + rows[j][1] * rows[k][1]
            Ginv = mpmath.inverse(G)
            ev = mpmath.eigsy(G, eigvals_only=True)
            E = G * Ginv
            eps = ctx.comparison_epsilon * n * max(1, mpmath.mnorm(G, 1))
            for j in range(n):
                for k in range(n):
                    if abs(E[j, k] - (1 if j == k else 0)) > eps:
                        raise IllConditioned("Gram inverse fails the identity check")
        object.__setattr__(self, "gram", G)
        object.__setattr__(self, "gram_inverse", Ginv)
        object.__setattr__(self, "eigenvalues", tuple(sorted(ev[i] for i in range(n))))

    @property
    def lambda_max(self):
        return self.eigenvalues[-1]

    @property
    def lambda_min(self):
        return self.eigenvalues[0]

    def basis(self):
        """Two generators of L: (1, 0, theta^1) and (0, 1, theta^2)."""
        rows = self.theta.mp_rows()
        return ([1, 0] + [a for a, _ in rows], [0, 1] + [b for _, b in rows])

    def distance(self, z: Sequence) -> mpmath.mpf:
        """Euclidean distance from a real vector z = (x1, x2, y...) to L."""
        ctx = self.theta.precision
        rows = self.theta.mp_rows()
        n = self.theta.n
        with ctx.workprec(32):
            z = [mpmath.mpf(v) if not isinstance(v, Fraction) else ctx.to_mpf(v) for v in z]
            r = [rows[j][0] * z[0] + rows[j][1] * z[1] - z[2 + j] for j in range(n)]
            q = mpmath.mpf(0)
            Gi = self.gram_inverse
            for j in range(n):
                for k in range(n):
                    q += r[j] * Gi[j, k] * r[k]
            q = max(q, mpmath.mpf(0))
            return +mpmath.sqrt(q)


@dataclass(frozen=True)
class ExtendedVector:
    """Integer vector z = (x1, x2, y1..yn) with cached heights and distances.

    ``zeta_sup`` is max_j |r_j| for the stored y, which equals the sup-norm
    distance when y holds the nearest integers. Integer keys are kept when the
    vector was evaluated against a matrix, so records compare exactly.
    """

    x: tuple
    y: tuple
    zeta_sup: mpmath.mpf
    zeta_spherical: mpmath.mpf
    Z_euclid: mpmath.mpf
    X_sup: int
    Z_sq: int
    sup_key: Optional[int] = None
    spherical_key: Optional[int] = None
    nearest_tie: bool = False

    @property
    def z(self) -> tuple:
        return tuple(self.x) + tuple(self.y)

    def __post_init__(self):
        if not any(self.z):
            raise ParamError("extended vector must be nonzero")


def residual_vector(theta: ThetaMatrix, x, y) -> list:
    """r_j = theta_j^1 x1 + theta_j^2 x2 - y_j at working precision."""
    ctx = theta.precision
    D = theta.denominator
    with ctx.workprec():
        return [mpmath.mpf(R) / D for R in theta.residual_numerators(x, y)]


def sup_height(theta: ThetaMatrix, x):
    """Return (zeta_sup, y) with y the nearest integers (ties to the smaller)."""
    if not any(x):
        raise ParamError("x must be nonzero")
    y = theta.nearest_y(x)
    return theta.sup_value(theta.sup_key(x, y)), y


def make_vector(theta: ThetaMatrix, x, y) -> ExtendedVector:
    x = (int(x[0]), int(x[1]))
    y = tuple(int(v) for v in y)
    if len(y) != theta.n:
        raise ParamError("y has the wrong length")
    ctx = theta.precision
    zsq = x[0] ** 2 + x[1] ** 2 + sum(v * v for v in y)
    skey = theta.sup_key(x, y)
    pkey = theta.spherical_key(x, y)
    with ctx.workprec():
        Z = mpmath.sqrt(zsq)
    return ExtendedVector(
        x=x, y=y,
        zeta_sup=theta.sup_value(skey),
        zeta_spherical=theta.spherical_value(pkey),
        Z_euclid=Z, X_sup=max(abs(x[0]), abs(x[1])), Z_sq=zsq,
        sup_key=skey, spherical_key=pkey,
        nearest_tie=theta.has_nearest_tie(x),
    )


def extend_vector(theta: ThetaMatrix, x) -> ExtendedVector:
    """x together with its nearest-integer y."""
    if not any(x):
        raise ParamError("x must be nonzero")
    return make_vector(theta, x, theta.nearest_y(x))


def spherical_distance(L: SubspaceL, z) -> mpmath.mpf:
    """dist(z, L) through the Gram system; z is an ExtendedVector or a real vector."""
    if isinstance(z, ExtendedVector):
        z = z.z
    if not any(z):
        raise ParamError("z must be nonzero")
    return L.distance(z)


def canonical(z: Sequence[int]) -> tuple:
    """Representative of {z, -z} whose first nonzero coordinate is positive."""
    for a in z:
        if a:
            return tuple(z) if a > 0 else tuple(-b for b in z)
    return tuple(z)
