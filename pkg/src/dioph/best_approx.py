"""Sequences of sup-norm and spherical best approximation vectors.

The fast enumerators jump from one record to the next. Given the current
record distance eps, the next record is the point of least height among
integer z with distance < eps. All such points of height <= T lie in an
ellipsoid (see ``_sup_form`` / ``_spherical_form``), which is enumerated
with LLL + Fincke-Pohst; T doubles until a point is found. By Minkowski's
theorem the ellipsoid holds O(1) lattice points once T reaches the next
height, so the cost per record does not grow with the height.

``brute_force`` is the independent oracle: it scans every integer point of
the box/ball with a float64 prefilter and applies the record definition
exactly to the survivors.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

import mpmath
import numpy as np

from . import _kernels
from .lattice import short_vectors
from .errors import BudgetExceeded, ParamError, PossViolation, PrecisionExhausted
from .geometry import (
    ExtendedVector,
    SubspaceL,
    ThetaMatrix,
    canonical,
    extend_vector,
    make_vector,
)

SUP = "sup"
SPHERICAL = "spherical"
KINDS = (SUP, SPHERICAL)

DEFAULT_ORACLE_LIMITS = {SPHERICAL: 10**3, SUP: 10**4}


@dataclass(frozen=True)
class ApproxSequence:
    """Ordered best approximation records of one kind.

    ``alternatives[i]`` lists the vectors that tied with record i (same height,
    same distance) and were not chosen; ``ambiguity_flags[i]`` is True exactly
    when that list is nonempty.
    """

    kind: str
    records: tuple
    ambiguity_flags: tuple = ()
    alternatives: tuple = ()
    bound: Optional[Fraction] = None
    notes: tuple = ()
    theta: Optional[ThetaMatrix] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParamError(f"unknown sequence kind {self.kind!r}")
        if not self.ambiguity_flags:
            object.__setattr__(self, "ambiguity_flags", tuple(False for _ in self.records))
        if not self.alternatives:
            object.__setattr__(self, "alternatives", tuple(() for _ in self.records))

    def __len__(self):
        return len(self.records)

    @property
    def heights(self) -> list:
        if self.kind == SUP:
            return [r.X_sup for r in self.records]
        return [r.Z_euclid for r in self.records]

    @property
    def minima(self) -> list:
        if self.kind == SUP:
            return [r.zeta_sup for r in self.records]
        return [r.zeta_spherical for r in self.records]

    def same_records(self, other: "ApproxSequence") -> bool:
        """Record-by-record equality including ambiguity flags."""
        return (self.kind == other.kind
                and [r.z for r in self.records] == [r.z for r in other.records]
                and list(self.ambiguity_flags) == list(other.ambiguity_flags))


@dataclass(frozen=True)
class Staircase:
    """Right-continuous step function: value minima[i] on [heights[i], heights[i+1])."""

    breakpoints: tuple
    kind: str

    def value_at(self, t):
        """psi(t); None for t below the first height."""
        val = None
        for h, v in self.breakpoints:
            if h <= t:
                val = v
            else:
                break
        return val


def staircase(seq: ApproxSequence) -> Staircase:
    if not seq.records:
        raise ParamError("staircase of an empty sequence")
    return Staircase(tuple(zip(seq.heights, seq.minima)), seq.kind)


# ---------------------------------------------------------------------------
# helpers shared by both kinds


def _height_key(kind, v: ExtendedVector) -> int:
    return v.X_sup if kind == SUP else v.Z_sq


def _dist_key(kind, v: ExtendedVector) -> int:
    return v.sup_key if kind == SUP else v.spherical_key


def _dist_value(kind, v: ExtendedVector):
    return v.zeta_sup if kind == SUP else v.zeta_spherical


class _Cand(NamedTuple):
    """Integer-only view of a candidate: canonical z, height key, distance key."""

    z: tuple
    h: int
    key: int


def _cand(theta, kind, z) -> Optional[_Cand]:
    """Candidate for an integer point; sup uses the nearest y for its x."""
    if kind == SUP:
        x = canonical(z[:2])
        if not any(x):
            return None
        y = theta.nearest_y(x)
        return _Cand(x + y, max(abs(x[0]), abs(x[1])), theta.sup_key(x, y))
    if not any(z):
        return None
    z = canonical(z)
    return _Cand(z, sum(a * a for a in z), theta.spherical_key(z[:2], z[2:]))


def _vector(theta, c: _Cand) -> ExtendedVector:
    return make_vector(theta, c.z[:2], c.z[2:])


def _key_value(theta, kind, key):
    return theta.sup_value(key) if kind == SUP else theta.spherical_value(key)


def _tolerance(theta, height):
    return theta.precision.comparison_epsilon * max(1, height)


def _near(theta, kind, k1, k2, h) -> bool:
    """Distinct keys whose distances differ by at most the comparison tolerance.

    Keys that differ in relative terms by more than 2^-30 give distances far
    apart compared with the tolerance, so big floats are only formed for
    keys that agree to about 30 bits.
    """
    if k1 == k2:
        return False
    if abs(k1 - k2) << 30 > max(k1, k2):
        return False
    return abs(_key_value(theta, kind, k1) - _key_value(theta, kind, k2)) <= _tolerance(theta, h)


def _on_L(theta, c: _Cand):
    """Integer points lying exactly on L are skipped (only possible for degenerate Theta)."""
    if c.key != 0:
        return False
    if not theta.degenerate:
        raise PossViolation(f"integer point {c.z} lies on L", c.z[:2])
    return True


def _choose(theta, kind, group, prev_key=None):
    """Pick the record among same-height candidates; returns (record, alternatives)."""
    best_key = min(c.key for c in group)
    tied = sorted(c.z for c in group if c.key == best_key)
    h = group[0].h
    for c in group:
        if _near(theta, kind, c.key, best_key, h):
            raise PrecisionExhausted(
                f"{kind} candidates {tied[0]} and {c.z} at height {h} "
                f"differ by less than the comparison tolerance; rerun with more bits")
    if prev_key is not None and _near(theta, kind, prev_key, best_key, h):
        raise PrecisionExhausted(
            f"{kind} record candidate {tied[0]} is within tolerance of the previous minimum")
    by_z = {c.z: c for c in group}
    rec = _vector(theta, by_z[tied[0]])
    return rec, tuple(_vector(theta, by_z[z]) for z in tied[1:])


# ---------------------------------------------------------------------------
# fast enumeration


class _FormBuilder:
    """Quadratic forms for the ellipsoid search, cached per working precision."""

    def __init__(self, theta: ThetaMatrix):
        self.theta = theta
        self._cache = {}

    def _mats(self, prec):
        if prec in self._cache:
            return self._cache[prec]
        theta = self.theta
        n = theta.n
        d = n + 2
        with mpmath.mp.workprec(prec):
            M = [[mpmath.mpf(a.numerator) / a.denominator, mpmath.mpf(b.numerator) / b.denominator]
                 for a, b in theta.rows]
            V = mpmath.matrix(n, d)
            for j in range(n):
                V[j, 0], V[j, 1] = M[j][0], M[j][1]
                V[j, 2 + j] = -1
            VtV = V.T * V
            G = V * V.T
            P = V.T * mpmath.inverse(G) * V
        self._cache[prec] = (VtV, P)
        return VtV, P

    def sup_form(self, T, eps, prec):
        VtV, _ = self._mats(prec)
        d = VtV.rows
        with mpmath.mp.workprec(prec):
            Q = VtV / (mpmath.mpf(eps) ** 2)
            Q[0, 0] += mpmath.mpf(1) / T ** 2
            Q[1, 1] += mpmath.mpf(1) / T ** 2
        return Q, mpmath.mpf(2 + (d - 2))

    def spherical_form(self, T, eps, prec):
        _, P = self._mats(prec)
        d = P.rows
        with mpmath.mp.workprec(prec):
            inv_t2 = mpmath.mpf(1) / T ** 2
            if eps is None:
                Q = mpmath.eye(d) * inv_t2
                return Q, mpmath.mpf(1)
            c = mpmath.mpf(1) / mpmath.mpf(eps) ** 2 - inv_t2
            Q = mpmath.eye(d) * inv_t2 + P * c
        return Q, mpmath.mpf(2)


def _precision_for(theta, T, eps):
    bits = theta.precision.bits
    if eps is None or eps <= 0:
        return bits + 64
    ratio = max(1.0, float(mpmath.log(mpmath.mpf(T) / eps, 2)))
    # round up to a multiple of 64 so the form cache gets reused
    need = bits + 2 * int(math.ceil(ratio)) + 96
    return int(math.ceil(need / 64.0)) * 64


def _enumerate(theta: ThetaMatrix, bound, kind) -> ApproxSequence:
    bound = Fraction(bound)
    if bound < 1:
        return ApproxSequence(kind, (), bound=bound, theta=theta)
    bound_sq = bound * bound
    top = math.floor(bound)
    forms = _FormBuilder(theta)
    records, flags, alts = [], [], []
    eps_key = eps_val = None
    T = 1
    U = None
    last_prec = None
    while True:
        T = min(T, top)
        if kind == SUP:
            eps_for_form = eps_val if eps_val is not None else mpmath.mpf(1)
            prec = _precision_for(theta, T, eps_for_form)
            Q, R = forms.sup_form(T, eps_for_form, prec)
        else:
            prec = _precision_for(theta, T, eps_val)
            Q, R = forms.spherical_form(T, eps_val, prec)
        if prec != last_prec:
            U = None
            last_prec = prec
        with mpmath.mp.workprec(prec):
            pts, U = short_vectors(Q, R * (1 + mpmath.mpf(2) ** -20), U, prec)
        cands = {}
        for z in pts:
            c = _cand(theta, kind, z)
            if c is None:
                continue
            if kind == SUP:
                if c.h > T:
                    continue
            elif c.h > T * T or c.h > bound_sq:
                continue
            if _on_L(theta, c):
                continue
            if eps_key is not None and c.key >= eps_key:
                if _near(theta, kind, c.key, eps_key, c.h):
                    raise PrecisionExhausted(
                        f"{kind} candidate {c.z} is within tolerance of the current minimum")
                continue
            cands[c.z] = c
        if cands:
            hmin = min(c.h for c in cands.values())
            group = [c for c in cands.values() if c.h == hmin]
            rec, tied = _choose(theta, kind, group, eps_key)
            records.append(rec)
            flags.append(bool(tied))
            alts.append(tied)
            eps_key, eps_val = _dist_key(kind, rec), _dist_value(kind, rec)
            if kind == SUP:
                T = hmin + 1
            else:
                T = math.isqrt(hmin) + 1
            T = max(T, int(T * 1.25))
            continue
        if T >= top:
            break
        T = 2 * T
    return ApproxSequence(kind, tuple(records), tuple(flags), tuple(alts), bound=bound,
                          notes=_notes(theta), theta=theta)


def _notes(theta):
    if theta.degenerate:
        return (f"degenerate matrix: x={theta.poss_witness} makes every form integral; "
                "integer points on L are skipped",)
    return ()


def enumerate_sup(theta: ThetaMatrix, X_max) -> ApproxSequence:
    """All sup-norm best approximation records with X^sup <= X_max."""
    return _enumerate(theta, X_max, SUP)


def enumerate_spherical(theta: ThetaMatrix, Z_max) -> ApproxSequence:
    """All spherical best approximation records with Z <= Z_max."""
    return _enumerate(theta, Z_max, SPHERICAL)


# ---------------------------------------------------------------------------
# brute-force oracle


def oracle_limit(kind) -> int:
    env = os.environ.get("DIOPH_ORACLE_LIMIT")
    if env:
        return int(float(env))
    return DEFAULT_ORACLE_LIMITS[kind]


def minkowski_constant(n: int) -> float:
    """Explicit C(n) with zeta_nu * Z_{nu+1}^(2/n) <= C(n) for spherical records.

    The open set {zeta(z) < zeta_nu, Z(z) < Z_{nu+1}} holds no nonzero integer
    point. Since zeta_nu < 1 and Z_{nu+1} >= sqrt(2), it contains the cylinder
    {|P_L z| < Z_{nu+1}/sqrt(2), |P_perp z| < zeta_nu} of volume
    pi Z^2 / 2 * v_n zeta^n, where v_n is the volume of the unit n-ball.
    Minkowski: that volume is at most 2^(n+2), so
    zeta^n Z^2 <= 2^(n+3) / (pi v_n).
    """
    v_n = math.pi ** (n / 2) / math.gamma(n / 2 + 1)
    return (2 ** (n + 3) / (math.pi * v_n)) ** (1.0 / n)


def _float_delta(theta, bound, lam_max):
    th = theta.float_rows()
    size = 1.0 + sum(abs(a) + abs(b) for a, b in th)
    return 1e3 * 2.0 ** -52 * (bound + 1) * size * (1.0 + lam_max)


def _split(lo, hi, parts):
    parts = max(1, min(parts, hi - lo + 1))
    step = (hi - lo + 1 + parts - 1) // parts
    return [(a, min(hi, a + step - 1)) for a in range(lo, hi + 1, step)]


def _run_chunks(fn, args_list, workers):
    if workers <= 1 or len(args_list) == 1:
        return [fn(*a) for a in args_list]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futures = [ex.submit(fn, *a) for a in args_list]
        return [f.result() for f in futures]


def _sup_kernel(backend, *args):
    return _kernels.get_backend(backend)[0](*args)


def _sph_kernel(backend, *args):
    return _kernels.get_backend(backend)[1](*args)


def brute_force(theta: ThetaMatrix, bound, kind, *, limit: Optional[int] = None,
                workers: int = 1, backend: Optional[str] = None) -> ApproxSequence:
    """Record sequence by exhaustive scan of the box (sup) or ball (spherical)."""
    if kind not in KINDS:
        raise ParamError(f"unknown kind {kind!r}")
    bound = Fraction(bound)
    limit = oracle_limit(kind) if limit is None else limit
    if bound > limit:
        raise BudgetExceeded(f"oracle bound {float(bound)} exceeds limit {limit}")
    if bound < 1:
        return ApproxSequence(kind, (), bound=bound, theta=theta)
    n = theta.n
    th = theta.float_rows()
    th1 = np.array([a for a, _ in th], dtype=np.float64)
    th2 = np.array([b for _, b in th], dtype=np.float64)
    mink_exp = -1.0 if theta.degenerate else 2.0 / n
    if kind == SUP:
        B = math.floor(bound)
        shell1 = [extend_vector(theta, x) for x in ((1, -1), (1, 0), (1, 1), (0, 1))]
        live = [v for v in shell1 if v.sup_key != 0]
        cap = float(min(v.zeta_sup for v in live)) if live else 0.5
        if theta.degenerate:
            cap = 0.5
        delta = _float_delta(theta, B, 0.0)
        chunks = [(backend, th1, th2, B, lo, hi, cap, mink_exp, 1.0, delta)
                  for lo, hi in _split(0, B, workers)]
        arrays = _run_chunks(_sup_kernel, chunks, workers)
        pts = np.concatenate(arrays) if arrays else np.zeros((0, 2), dtype=np.int64)
        cands = [_cand(theta, SUP, (int(a), int(b))) for a, b in pts]
    else:
        L = SubspaceL(theta)
        lam = float(L.lambda_max) * (1 + 1e-12)
        units = []
        for i in range(n + 2):
            e = [0] * (n + 2)
            e[i] = 1
            units.append(make_vector(theta, e[:2], e[2:]))
        live = [v for v in units if v.spherical_key != 0]
        cap = float(min(v.zeta_spherical for v in live))
        B2 = math.floor(bound * bound)
        delta = _float_delta(theta, math.isqrt(B2) + 1, lam)
        ainv = _ainv_float(theta)
        top = math.isqrt(B2)
        chunks = [(backend, th1, th2, ainv, math.sqrt(lam), B2, lo, hi, cap, mink_exp,
                   minkowski_constant(n), delta)
                  for lo, hi in _split(0, top, workers)]
        arrays = _run_chunks(_sph_kernel, chunks, workers)
        pts = np.concatenate(arrays) if arrays else np.zeros((0, n + 2), dtype=np.int64)
        bsq = bound * bound
        cands = [_cand(theta, SPHERICAL, tuple(int(v) for v in r)) for r in pts]
        cands = [c for c in cands if c.h <= bsq]
    return _records_by_definition(theta, kind, cands, bound)


def _ainv_float(theta):
    th = theta.float_rows()
    a11 = 1.0 + sum(a * a for a, _ in th)
    a22 = 1.0 + sum(b * b for _, b in th)
    a12 = sum(a * b for a, b in th)
    det = a11 * a22 - a12 * a12
    return np.array([[a22 / det, -a12 / det], [-a12 / det, a11 / det]], dtype=np.float64)


def _records_by_definition(theta, kind, cands, bound) -> ApproxSequence:
    """Sweep candidates by height; a height group yields a record when its
    smallest distance is strictly below every distance at smaller heights."""
    uniq = {}
    for c in cands:
        if c is None or _on_L(theta, c):
            continue
        uniq[c.z] = c
    ordered = sorted(uniq.values(), key=lambda c: (c.h, c.key, c.z))
    records, flags, alts = [], [], []
    run_key = None
    i = 0
    while i < len(ordered):
        h = ordered[i].h
        j = i
        while j < len(ordered) and ordered[j].h == h:
            j += 1
        group = ordered[i:j]
        i = j
        gkey = group[0].key
        if run_key is not None:
            if _near(theta, kind, gkey, run_key, h):
                raise PrecisionExhausted(
                    f"{kind} height {h}: distance within tolerance of the running minimum")
            if gkey >= run_key:
                continue
        for c in group:
            if _near(theta, kind, c.key, gkey, h):
                raise PrecisionExhausted(
                    f"{kind} height {h}: two candidate minima within tolerance")
        tied = [c for c in group if c.key == gkey]
        records.append(_vector(theta, tied[0]))
        flags.append(len(tied) > 1)
        alts.append(tuple(_vector(theta, c) for c in tied[1:]))
        run_key = gkey
    return ApproxSequence(kind, tuple(records), tuple(flags), tuple(alts), bound=bound,
                          notes=_notes(theta), theta=theta)
