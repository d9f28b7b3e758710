"""Structural checks on spherical record sequences.

Indices are 1-based throughout (record nu is ``seq.records[nu - 1]``).
Planarity, independence and determinants are decided with exact integer
arithmetic; only the ellipse diagnostics and the distance-function probe use
big floats.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import mpmath

from .errors import DegeneratePlane, DomainError, ParamError
from .geometry import SubspaceL
from .numerics import IntegerMatrix, bounded_integer_relation, integer_matrix_rank

HOLDS = "holds"
VIOLATED = "violated"
NOT_APPLICABLE = "not_applicable"

DEFAULT_ANGLE_THRESHOLD = 1e-3
DEFAULT_LI_BOUND = 5


def lemma3_constant(ctx=None):
    """(C3, a, b) with C3 = 12/sqrt(sqrt(52) - 5), a = sqrt(sqrt(52) - 5)/3, b = sqrt(1 - a^2)."""
    with mpmath.mp.workprec(ctx.bits if ctx else mpmath.mp.prec):
        r = mpmath.sqrt(mpmath.sqrt(52) - 5)
        a = r / 3
        return 12 / r, a, mpmath.sqrt(1 - a * a)


def _rank(vectors) -> int:
    return integer_matrix_rank(IntegerMatrix.from_rows([list(v) for v in vectors]))


@dataclass(frozen=True)
class LemmaReport:
    lemma_id: str
    index_range: tuple
    lhs: object
    rhs: object
    constant_used: object
    verdict: str
    notes: tuple = ()


@dataclass(frozen=True)
class SubspaceRun:
    start_nu: int
    end_k: int
    basis: tuple
    lattice_det: object
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def length(self) -> int:
        return self.end_k - self.start_nu + 1


@dataclass(frozen=True)
class AbcPair:
    nu: int
    k: int
    triples_independent: tuple
    run: SubspaceRun
    quad_independent: bool


# ---------------------------------------------------------------------------
# plane geometry


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def plane_forms(L: SubspaceL, b1, b2):
    """Euclidean Gram E and squared-distance form K of the plane span(b1, b2).

    Returns (mu_min, mu_max, p, q): the generalized eigenvalues of K against E
    and the unit vectors of the plane where dist(., L) is smallest (p) and
    largest (q). p spans the common major axis of the level ellipses.
    """
    ctx = L.theta.precision
    with ctx.workprec(32):
        b1 = [mpmath.mpf(v) for v in b1]
        b2 = [mpmath.mpf(v) for v in b2]
        E = [[_dot(b1, b1), _dot(b1, b2)], [_dot(b2, b1), _dot(b2, b2)]]
        rows = L.theta.mp_rows()
        n = L.theta.n

        def res(z):
            return [rows[j][0] * z[0] + rows[j][1] * z[1] - z[2 + j] for j in range(n)]

        r1, r2 = res(b1), res(b2)
        Gi = L.gram_inverse

        def form(r, s):
            return sum(r[j] * Gi[j, k] * s[k] for j in range(n) for k in range(n))

        K = [[form(r1, r1), form(r1, r2)], [form(r2, r1), form(r2, r2)]]
        # Cholesky E = C C^T, then eigen-decompose C^-1 K C^-T
        c11 = mpmath.sqrt(E[0][0])
        c21 = E[1][0] / c11
        c22 = mpmath.sqrt(E[1][1] - c21 * c21)
        inv = [[1 / c11, 0], [-c21 / (c11 * c22), 1 / c22]]

        def mul(A, B):
            return [[sum(A[i][t] * B[t][j] for t in range(2)) for j in range(2)] for i in range(2)]

        invT = [[inv[0][0], inv[1][0]], [inv[0][1], inv[1][1]]]
        S = mul(mul(inv, K), invT)
        tr = S[0][0] + S[1][1]
        dif = S[0][0] - S[1][1]
        disc = mpmath.sqrt(dif * dif + 4 * S[0][1] ** 2)
        mu_max, mu_min = (tr + disc) / 2, (tr - disc) / 2
        mu_min = max(mu_min, mpmath.mpf(0))
        # eigenvector of S for mu_max, in orthonormal plane coordinates
        if abs(S[0][1]) > 0:
            w = [S[0][1], mu_max - S[0][0]]
        else:
            w = [1, 0] if S[0][0] >= S[1][1] else [0, 1]
        nw = mpmath.sqrt(w[0] ** 2 + w[1] ** 2)
        w = [w[0] / nw, w[1] / nw]
        wp = [-w[1], w[0]]
        # back to plane coefficients u = C^-T w, then to R^{n+2}
        def lift(v):
            u = [invT[0][0] * v[0] + invT[0][1] * v[1], invT[1][0] * v[0] + invT[1][1] * v[1]]
            return [u[0] * x + u[1] * y for x, y in zip(b1, b2)]

        q = lift(w)
        p = lift(wp)
    return mu_min, mu_max, p, q


def _run_diagnostics(seq, start, end):
    theta = seq.theta
    if theta is None:
        return {}
    L = SubspaceL(theta)
    z1, z2 = seq.records[start - 1].z, seq.records[start].z
    mu_min, mu_max, p, q = plane_forms(L, z1, z2)
    with theta.precision.workprec(32):
        xi, Xi = [], []
        for l in range(start, end + 1):
            v = seq.records[l - 1]
            xi.append(abs(_dot(v.z, q)))
            Xi.append(v.zeta_spherical / mpmath.sqrt(mu_max) if mu_max > 0 else mpmath.inf)
        tol = theta.precision.comparison_epsilon * max(1, mu_max)
    if mu_max <= tol:
        case = "plane_in_L"
    elif mu_min <= tol:
        case = "meets_L_in_line"
    else:
        case = "transversal"
    return {"xi": xi, "Xi": Xi, "mu_min": mu_min, "mu_max": mu_max, "case": case}


def _lattice_det(z1, z2):
    g = _dot(z1, z1) * _dot(z2, z2) - _dot(z1, z2) ** 2
    return mpmath.sqrt(g)


def _plane_end(seq, s):
    """Largest e with records s..e all in span(z_s, z_{s+1})."""
    zs, zt = seq.records[s - 1].z, seq.records[s].z
    e = s + 1
    while e < len(seq.records) and _rank([zs, zt, seq.records[e].z]) == 2:
        e += 1
    return e


def find_runs(seq, min_length: int = 3) -> list:
    """Maximal stretches of consecutive records spanning a 2-dimensional space."""
    if min_length < 2:
        raise ParamError("runs have at least two records")
    N = len(seq.records)
    runs = []
    for s in range(1, N):
        e = _plane_end(seq, s)
        if e - s + 1 < min_length:
            continue
        if s > 1 and _rank([seq.records[s - 1].z, seq.records[s].z, seq.records[s - 2].z]) == 2:
            continue
        z1, z2 = seq.records[s - 1].z, seq.records[s].z
        runs.append(SubspaceRun(s, e, (seq.records[s - 1], seq.records[s]),
                                _lattice_det(z1, z2), _run_diagnostics(seq, s, e)))
    return runs


# ---------------------------------------------------------------------------
# lemmas


def _lemma3(seq, nu, k, C3):
    r = seq.records
    lhs = r[nu - 1].zeta_spherical * r[nu].Z_euclid
    rhs = C3 * r[k - 2].zeta_spherical * r[k - 1].Z_euclid
    return LemmaReport("L3", (nu, k), lhs, rhs, C3, HOLDS if lhs <= rhs else VIOLATED)


def lemma3_check(run: SubspaceRun, seq) -> LemmaReport:
    """zeta_nu Z_{nu+1} <= C3 zeta_{k-1} Z_k over the run's endpoints."""
    if run.length < 3:
        raise ParamError("Lemma 3 needs a run of at least three records")
    C3, a, b = lemma3_constant()
    rep = _lemma3(seq, run.start_nu, run.end_k, C3)
    return replace(rep, notes=(f"a={mpmath.nstr(a, 12)}", f"b={mpmath.nstr(b, 12)}"))


def lemma3_subintervals(run: SubspaceRun, seq) -> list:
    """The same inequality for every [nu', k'] inside the run with k' >= nu' + 2."""
    C3, _, _ = lemma3_constant()
    return [_lemma3(seq, i, j, C3)
            for i in range(run.start_nu, run.end_k - 1)
            for j in range(i + 2, run.end_k + 1)]


def lemma4_deltas(seq, estimate=None) -> list:
    """Delta_nu = det of the x-parts of z_nu, z_{nu+1}; reported as 1 <= |Delta_nu|."""
    r = seq.records
    deltas = [r[i].x[0] * r[i + 1].x[1] - r[i].x[1] * r[i + 1].x[0] for i in range(len(r) - 1)]
    zeros = [i + 1 for i, d in enumerate(deltas) if d == 0]
    burn_in = (zeros[-1] + 1) if zeros else 1
    if estimate is None:
        hyp = "hypothesis alpha > 1: unknown (no estimate supplied)"
    else:
        hyp = (f"hypothesis alpha > 1: alpha_hat = {mpmath.nstr(estimate.alpha_hat, 8)} "
               f"({'satisfied' if estimate.alpha_hat > 1 else 'not satisfied'} by the estimate)")
    notes = (hyp, f"no zero determinant from index {burn_in} on")
    return [LemmaReport("L4", (i + 1, i + 2), 1, abs(d), None, HOLDS if d != 0 else VIOLATED, notes)
            for i, d in enumerate(deltas)]


def find_abc_pairs(seq, min_run: int = 3) -> list:
    """Pairs (nu, k) bracketing a maximal planar run with independent flanks.

    With the default ``min_run=3`` only runs of three or more records count;
    ``min_run=2`` also admits a plane spanned by two consecutive records.
    """
    r = seq.records
    N = len(r)
    out = []
    for run in find_runs(seq, min_run):
        nu, k = run.start_nu, run.end_k
        if nu < 2 or k > N - 1:
            continue
        za, zb = r[nu - 2].z, r[k].z
        tri1 = _rank([za, r[nu - 1].z, r[nu].z]) == 3
        tri2 = _rank([r[k - 2].z, r[k - 1].z, zb]) == 3
        quad = _rank([za, r[nu - 1].z, r[k - 1].z, zb]) == 4
        if tri1 and tri2 and quad:
            out.append(AbcPair(nu, k, (tri1, tri2), run, quad))
    return out


def lemma5_constant(Z_nu, Z_k, Z_k1, alpha):
    return mpmath.mpf(Z_k1) / (mpmath.mpf(Z_nu) ** alpha * mpmath.mpf(Z_k) ** (alpha - 1))


def lemma5_report(pair: AbcPair, seq, alpha) -> LemmaReport:
    """Empirical constant c = Z_{k+1} / (Z_nu^alpha Z_k^(alpha-1)); no verdict."""
    alpha = mpmath.mpf(alpha)
    if alpha <= 1:
        raise DomainError("Lemma 5 needs alpha > 1")
    r = seq.records
    Zn, Zk, Zk1 = r[pair.nu - 1].Z_euclid, r[pair.k - 1].Z_euclid, r[pair.k].Z_euclid
    rhs = Zn ** alpha * Zk ** (alpha - 1)
    c = Zk1 / rhs
    return LemmaReport("L5", (pair.nu, pair.k), Zk1, rhs, c, NOT_APPLICABLE,
                       ("the inequality holds up to an unspecified constant; c is empirical",))


def lemma5_summary(reports) -> dict:
    cs = sorted(rep.constant_used for rep in reports)
    if not cs:
        return {"count": 0}
    med = cs[len(cs) // 2]
    last = reports[-1].constant_used
    return {"count": len(cs), "min": cs[0], "median": med,
            "drift_to_zero": bool(len(cs) >= 3 and last < med / 1000)}


def lemma6_threshold(Z_nu, alpha, epsilon):
    return mpmath.mpf(Z_nu) ** (mpmath.mpf(alpha) - epsilon - 1)


def lemma6_report(seq, alpha, epsilon) -> list:
    """For independent triples z_{nu-1}, z_nu, z_{nu+1}: Z_nu^(alpha-eps-1) <= Z_{nu+1}."""
    alpha = mpmath.mpf(alpha)
    epsilon = mpmath.mpf(epsilon)
    if alpha <= 2:
        raise DomainError("Lemma 6 needs alpha > 2")
    if epsilon <= 0:
        raise ParamError("epsilon must be positive")
    r = seq.records
    out = []
    for nu in range(2, len(r)):
        if _rank([r[nu - 2].z, r[nu - 1].z, r[nu].z]) < 3:
            out.append(LemmaReport("L6", (nu - 1, nu + 1), None, None, alpha - epsilon - 1,
                                   NOT_APPLICABLE, ("dependent triple",)))
            continue
        lhs = lemma6_threshold(r[nu - 1].Z_euclid, alpha, epsilon)
        rhs = r[nu].Z_euclid
        out.append(LemmaReport("L6", (nu - 1, nu + 1), lhs, rhs, alpha - epsilon - 1,
                               HOLDS if lhs <= rhs else VIOLATED))
    return out


# ---------------------------------------------------------------------------
# dimension diagnostics


def _project_to_L(L: SubspaceL, z):
    """Orthogonal projection of z onto L as a vector of R^{n+2}."""
    theta = L.theta
    rows = theta.mp_rows()
    n = theta.n
    r = [rows[j][0] * z[0] + rows[j][1] * z[1] - z[2 + j] for j in range(n)]
    Gi = L.gram_inverse
    c = [sum(Gi[j, k] * r[k] for k in range(n)) for j in range(n)]
    # z minus the component along span{v_j}, v_j = (theta_j^1, theta_j^2, -e_j)
    out = list(map(mpmath.mpf, z))
    for j in range(n):
        out[0] -= c[j] * rows[j][0]
        out[1] -= c[j] * rows[j][1]
        out[2 + j] += c[j]
    return out


def li_screen(theta, H: int = DEFAULT_LI_BOUND):
    """Look for four of the vectors (theta_j^1, theta_j^2), (1, 0), (0, 1) with no
    integer relation of height <= H. Heuristic: a hit is not a proof."""
    vecs = [(a, b) for a, b in theta.rows] + [(1, 0), (0, 1)]
    labels = [f"theta_{j + 1}" for j in range(theta.n)] + ["e1", "e2"]
    for combo in itertools.combinations(range(len(vecs)), 4):
        if bounded_integer_relation([vecs[i] for i in combo], H, ctx=theta.precision) is None:
            return tuple(labels[i] for i in combo)
    return None


def dimension_diagnostics(seq, tail_fraction=mpmath.mpf(1) / 3, *,
                          angle_threshold: float = DEFAULT_ANGLE_THRESHOLD,
                          li_bound: int = DEFAULT_LI_BOUND) -> dict:
    """Tail rank (a lower bound for dim R), suggested dim K and the rank prediction check."""
    tail_fraction = mpmath.mpf(tail_fraction)
    if not 0 < tail_fraction <= 1:
        raise ParamError("tail_fraction must lie in (0, 1]")
    N = len(seq.records)
    if N == 0:
        raise ParamError("empty sequence")
    size = max(1, int(mpmath.ceil(tail_fraction * N)))
    tail = seq.records[-size:]
    rank = _rank([v.z for v in tail])
    out = {"tail_size": size, "tail_rank": rank, "K_suggestion": None, "max_angle": None,
           "li_screen": None, "rank_prediction": None,
           "notes": ["tail rank is a lower bound for dim R over this prefix only",
                     "dim K is a clustering heuristic, not a verdict"]}
    theta = seq.theta
    if theta is None:
        return out
    L = SubspaceL(theta)
    with theta.precision.workprec(32):
        dirs = []
        for v in tail:
            pz = _project_to_L(L, v.z)
            nrm = mpmath.sqrt(_dot(pz, pz))
            if nrm > 0:
                dirs.append([c / nrm for c in pz])
        angle = mpmath.mpf(0)
        for u in dirs[1:]:
            cos = min(mpmath.mpf(1), abs(_dot(u, dirs[0])))
            angle = max(angle, mpmath.acos(cos))
    out["max_angle"] = angle
    out["K_suggestion"] = 1 if angle < angle_threshold else 2
    hit = li_screen(theta, li_bound)
    out["li_screen"] = {"bound": li_bound, "independent_four": hit,
                        "note": "no relation up to the bound; a heuristic, not a certificate"}
    if hit is not None and out["K_suggestion"] == 2:
        out["rank_prediction"] = {"expected_min_rank": 4, "tail_rank": rank, "consistent": rank >= 4}
    return out


# ---------------------------------------------------------------------------
# distance function along the unit circle of a plane


def verify_f_monotonicity(L: SubspaceL, plane_basis, samples: int = 1000) -> dict:
    """Sample f(t) = dist(A(t), L)/sin t for A(t) = cos t p + sin t q, t in (0, pi/2]."""
    if samples < 2:
        raise ParamError("need at least two samples")
    b1, b2 = plane_basis
    mu_min, mu_max, p, q = plane_forms(L, b1, b2)
    ctx = L.theta.precision
    tol = ctx.comparison_epsilon * 16
    if abs(mu_min - 1) <= tol and abs(mu_max - 1) <= tol:
        raise DegeneratePlane("the plane lies in the orthogonal complement of L")
    with ctx.workprec(32):
        vals = []
        for i in range(1, samples + 1):
            t = mpmath.pi / 2 * i / samples
            A = [mpmath.cos(t) * a + mpmath.sin(t) * b for a, b in zip(p, q)]
            vals.append(L.distance(A) / mpmath.sin(t))
        if mu_max <= tol:
            case = "plane_in_L"
        elif mu_min <= tol:
            case = "meets_L_in_line"
        else:
            case = "transversal"
        scale = max(1, max(vals))
        slack = tol * scale
        monotone = all(vals[i + 1] <= vals[i] + slack for i in range(len(vals) - 1))
        constant = max(vals) - min(vals) <= slack
        closed_form_gap = max(abs(v ** 2 - (mu_min / mpmath.sin(mpmath.pi / 2 * (i + 1) / samples) ** 2
                                             + mu_max - mu_min)) for i, v in enumerate(vals))
    ok = monotone and (constant if case != "transversal" else True)
    return {"case": case, "mu_min": mu_min, "mu_max": mu_max, "samples": samples,
            "monotone": monotone, "constant": constant, "first": vals[0], "last": vals[-1],
            "closed_form_gap": closed_form_gap, "ok": ok}


# ---------------------------------------------------------------------------
# tie alternatives


def alternate_sequences(seq):
    """Yield (index, sequence) with record ``index`` replaced by each tied alternative."""
    for i, alts in enumerate(seq.alternatives):
        for alt in alts:
            recs = list(seq.records)
            recs[i] = alt
            yield i + 1, replace(seq, records=tuple(recs))
