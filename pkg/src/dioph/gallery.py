"""Test matrices with known or engineered approximation behaviour.

Random draws use ``random.Random(seed)`` (Mersenne Twister); an entry is
``getrandbits(bits) / 2**bits``, i.e. uniform on the dyadic grid of the
working precision. Everything is deterministic in (kind, n, seed, bits, params).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import ParamError
from .geometry import ThetaMatrix
from .numerics import DEFAULT_PRECISION, PrecisionContext

KINDS = ("random", "remark4", "liouville", "algebraic")


@dataclass(frozen=True)
class GallerySpec:
    kind: str
    n: int
    seed: int = 0
    precision: PrecisionContext = DEFAULT_PRECISION
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class GalleryMatrix:
    theta: ThetaMatrix
    spec: GallerySpec
    notes: tuple


def _uniform(rng, bits):
    while True:
        v = rng.getrandbits(bits)
        if v:
            return Fraction(v, 1 << bits)


def _random(spec, rng):
    rows = [(_uniform(rng, spec.precision.bits), _uniform(rng, spec.precision.bits))
            for _ in range(spec.n)]
    notes = (f"generic matrix: expect alpha_hat and beta_hat near 2/n = {2 / spec.n:.4g}",)
    return rows, notes


def _remark4(spec, rng):
    if spec.n < 3:
        raise ParamError("remark4 needs n >= 3")
    xi = spec.params.get("xi", "golden")
    if xi != "golden":
        raise ParamError("only xi = golden is supported")
    ctx = spec.precision
    rows = []
    with ctx.workprec():
        phi = (1 + mpmath.sqrt(5)) / 2
        for _ in range(spec.n):
            t = _uniform(rng, ctx.bits)
            # product rounded once at working precision, so theta2 = phi*theta1 bit-exactly
            rows.append((t, phi * ctx.to_mpf(t)))
    notes = (
        "second column = golden ratio times first column, rounded at working precision",
        "expect all but finitely many spherical records in one plane (tail rank 2)",
        "expect alpha_hat and beta_hat near 1; the source construction states alpha = 2 "
        "in one place and beta = alpha = 1 in its conclusion; the conclusion is used here",
    )
    return rows, notes


def liouville_denominators(a, bits):
    """q_0 = 10, q_{k+1} = q_k^ceil(a), while 1/q_k is visible at ``bits`` bits."""
    e = math.ceil(a)
    qs = [10]
    while qs[-1].bit_length() <= bits:
        qs.append(qs[-1] ** e)
    return qs[:-1]


def _liouville(spec, rng):
    a = spec.params.get("a", 3)
    if a <= 1:
        raise ParamError("liouville growth exponent a must exceed 1")
    qs = liouville_denominators(a, spec.precision.bits)
    rows = []
    for j in range(spec.n):
        row = []
        for col in range(2):
            if j == 0 and col == 0:
                digits = [1] * len(qs)
            else:
                digits = [rng.randint(1, 9) for _ in qs]
            row.append(sum(Fraction(d, q) for d, q in zip(digits, qs)))
        rows.append(tuple(row))
    notes = (
        f"lacunary series with denominators {', '.join('10^%d' % (len(str(q)) - 1) for q in qs)}",
        "expect beta_hat well above alpha_hat; the link between a and the exponents is heuristic",
    )
    return rows, notes


def _primes(count):
    out, k = [], 2
    while len(out) < count:
        if all(k % p for p in out if p * p <= k):
            out.append(k)
        k += 1
    return out


def _algebraic(spec, rng):
    ps = _primes(2 * spec.n)
    rows = []
    for j in range(spec.n):
        row = []
        for p in ps[2 * j:2 * j + 2]:
            row.append(f"sqrt:{p}")
        rows.append(tuple(row))
    ctx = spec.precision
    out = []
    with ctx.workprec():
        for r in rows:
            out.append(tuple(mpmath.frac(mpmath.sqrt(int(t[5:]))) for t in r))
    notes = ("fractional parts of square roots of distinct primes; "
             "expect alpha_hat and beta_hat near 2/n",)
    return out, notes


_BUILDERS = {"random": _random, "remark4": _remark4, "liouville": _liouville,
             "algebraic": _algebraic}


def build(spec: GallerySpec) -> GalleryMatrix:
    if spec.kind not in _BUILDERS:
        raise ParamError(f"unknown gallery kind {spec.kind!r}; choose from {', '.join(KINDS)}")
    if spec.n < 1:
        raise ParamError("n must be at least 1")
    rng = random.Random(spec.seed)
    rows, notes = _BUILDERS[spec.kind](spec, rng)
    theta = ThetaMatrix.from_values(rows, spec.precision)
    return GalleryMatrix(theta, spec, tuple(notes))
