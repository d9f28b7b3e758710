"""Short-vector enumeration for positive definite quadratic forms on Z^d.

Used to find every integer point of an ellipsoid {z : z^T Q z <= R}. The form
is first LLL-reduced (Gram-matrix variant, floating point at a caller-chosen
precision), then Fincke-Pohst enumeration runs on the reduced form. Rounding
in either step can only cost efficiency or points right at the boundary; the
callers enlarge R slightly and re-check every point exactly.
"""
from __future__ import annotations

import mpmath
from mpmath import mp


def _identity(d):
    return [[1 if i == j else 0 for j in range(d)] for i in range(d)]


def transform_gram(Q, U):
    """U Q U^T for an integer matrix U (lists) and an mp matrix Q."""
    d = len(U)
    QU = [[sum(Q[i, k] * U[j][k] for k in range(d) if U[j][k]) for j in range(d)] for i in range(d)]
    G = mpmath.matrix(d, d)
    for a in range(d):
        for b in range(a, d):
            v = sum(U[a][i] * QU[i][b] for i in range(d) if U[a][i])
            G[a, b] = v
            G[b, a] = v
    return G


def lll_gram(Q, U=None, delta=0.99):
    """LLL-reduce the form Q starting from basis rows U; returns the new U.

    Cohen's algorithm 2.6.3 run on the Gram matrix. The returned U is
    unimodular, whatever the rounding, since it is built only from integer
    row operations.
    """
    d = Q.rows
    U = [row[:] for row in (U or _identity(d))]
    G = transform_gram(Q, U)
    mu = [[mpmath.mpf(0)] * d for _ in range(d)]
    B = [mpmath.mpf(0)] * d
    B[0] = G[0, 0]
    k, kmax = 1, 0
    guard = 0
    while k < d:
        guard += 1
        if guard > 200000:
            break
        if k > kmax:
            kmax = k
            for j in range(k):
                s = G[k, j] - sum(mu[j][i] * mu[k][i] * B[i] for i in range(j))
                mu[k][j] = s / B[j]
            B[k] = G[k, k] - sum(mu[k][j] ** 2 * B[j] for j in range(k))
        _red(k, k - 1, G, U, mu, d)
        if B[k] < (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            _swap(k, kmax, G, U, mu, B, d)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                _red(k, l, G, U, mu, d)
            k += 1
    return U


def _red(k, l, G, U, mu, d):
    if abs(mu[k][l]) <= 0.5:
        return
    q = int(mpmath.nint(mu[k][l]))
    U[k] = [a - q * b for a, b in zip(U[k], U[l])]
    gkl, gll = G[k, l], G[l, l]
    for i in range(d):
        if i != k:
            v = G[k, i] - q * G[l, i]
            G[k, i] = v
            G[i, k] = v
    G[k, k] = G[k, k] - 2 * q * gkl + q * q * gll
    mu[k][l] -= q
    for i in range(l):
        mu[k][i] -= q * mu[l][i]


def _swap(k, kmax, G, U, mu, B, d):
    U[k], U[k - 1] = U[k - 1], U[k]
    for i in range(d):
        G[k, i], G[k - 1, i] = G[k - 1, i], G[k, i]
    for i in range(d):
        G[i, k], G[i, k - 1] = G[i, k - 1], G[i, k]
    for j in range(k - 1):
        mu[k][j], mu[k - 1][j] = mu[k - 1][j], mu[k][j]
    m = mu[k][k - 1]
    Bn = B[k] + m * m * B[k - 1]
    mu[k][k - 1] = m * B[k - 1] / Bn
    B[k] = B[k - 1] * B[k] / Bn
    B[k - 1] = Bn
    for i in range(k + 1, kmax + 1):
        t = mu[i][k]
        mu[i][k] = mu[i][k - 1] - m * t
        mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k]


def _fp_coefficients(G):
    """q_ii and q_ij (j > i) with c^T G c = sum_i q_ii (c_i + sum_j q_ij c_j)^2."""
    d = G.rows
    q = [[mpmath.mpf(0)] * d for _ in range(d)]
    A = [[G[i, j] for j in range(d)] for i in range(d)]
    for i in range(d):
        q[i][i] = A[i][i]
        for j in range(i + 1, d):
            q[i][j] = A[i][j] / A[i][i]
        for k in range(i + 1, d):
            for l in range(k, d):
                A[k][l] = A[k][l] - q[i][k] * q[i][l] * q[i][i]
                A[l][k] = A[k][l]
    return q


def fincke_pohst(G, bound, node_limit=5_000_000):
    """All nonzero c in Z^d with c^T G c <= bound, one of each pair {c, -c}."""
    d = G.rows
    q = _fp_coefficients(G)
    if any(q[i][i] <= 0 for i in range(d)):
        raise ValueError("form is not positive definite at this precision")
    out = []
    c = [0] * d
    nodes = 0

    def rec(i, remaining):
        nonlocal nodes
        center = -sum(q[i][j] * c[j] for j in range(i + 1, d))
        if remaining < 0:
            return
        rad = mpmath.sqrt(remaining / q[i][i])
        lo = int(mpmath.ceil(center - rad))
        hi = int(mpmath.floor(center + rad))
        top = all(v == 0 for v in c[i + 1:])
        if top:
            lo = max(lo, 0)
        for v in range(lo, hi + 1):
            nodes += 1
            if nodes > node_limit:
                raise OverflowError("enumeration node limit exceeded")
            c[i] = v
            t = v - center
            rem = remaining - q[i][i] * t * t
            if rem < 0:
                continue
            if i == 0:
                if any(c):
                    out.append(tuple(c))
            else:
                rec(i - 1, rem)
        c[i] = 0

    rec(d - 1, mpmath.mpf(bound))
    return out


def short_vectors(Q, bound, U=None, prec=None):
    """Integer points z != 0 with z^T Q z <= bound (up to sign).

    Returns (points, U) where U is the reduced basis, reusable as a warm start
    for a nearby form.
    """
    ctx = mp.workprec(prec) if prec else mp.workprec(mp.prec)
    with ctx:
        U = lll_gram(Q, U)
        G = transform_gram(Q, U)
        coeffs = fincke_pohst(G, bound)
    d = len(U)
    pts = []
    for c in coeffs:
        z = tuple(sum(c[i] * U[i][j] for i in range(d)) for j in range(d))
        pts.append(z)
    return pts, U
