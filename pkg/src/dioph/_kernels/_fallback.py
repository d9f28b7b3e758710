"""Pure numpy versions of the scan kernels (same contract as ``_scan.pyx``)."""
import itertools

import numpy as np


def sup_scan(th1, th2, bound, x1_lo, x1_hi, cap, mink_exp, mink_const, delta):
    th1 = np.asarray(th1, dtype=np.float64)
    th2 = np.asarray(th2, dtype=np.float64)
    x2 = np.arange(-bound, bound + 1, dtype=np.int64)
    out = []
    # several x1 rows per numpy call keeps arrays near 1e6 elements
    step = max(1, 1_000_000 // (len(x2) * max(1, len(th1))))
    for start in range(x1_lo, x1_hi + 1, step):
        x1 = np.arange(start, min(start + step, x1_hi + 1), dtype=np.int64)
        X1, X2 = np.meshgrid(x1, x2, indexing="ij")
        X1 = X1.ravel()
        X2 = X2.ravel()
        keep = ~((X1 == 0) & (X2 <= 0))
        X1, X2 = X1[keep], X2[keep]
        v = np.outer(X1, th1) + np.outer(X2, th2)
        zeta = np.abs(v - np.rint(v)).max(axis=1)
        X = np.maximum(np.abs(X1), np.abs(X2))
        env = np.full(X.shape, cap, dtype=np.float64)
        if mink_exp > 0:
            env = np.minimum(env, mink_const * X.astype(np.float64) ** (-mink_exp))
        mask = (X == 1) | (zeta <= env + delta)
        if mask.any():
            out.append(np.stack([X1[mask], X2[mask]], axis=1))
    if not out:
        return np.zeros((0, 2), dtype=np.int64)
    return np.concatenate(out)


def spherical_scan(th1, th2, ainv, lam_sqrt, bound2, x1_lo, x1_hi, cap, mink_exp,
                   mink_const, delta):
    th1 = np.asarray(th1, dtype=np.float64)
    th2 = np.asarray(th2, dtype=np.float64)
    ainv = np.asarray(ainv, dtype=np.float64)
    n = len(th1)
    out = []
    for x1 in range(x1_lo, x1_hi + 1):
        if x1 * x1 > bound2:
            break
        s = int(np.floor(np.sqrt(bound2 - x1 * x1))) + 1
        x2 = np.arange(0 if x1 == 0 else -s, s + 1, dtype=np.int64)
        xsq = x1 * x1 + x2 * x2
        x2 = x2[xsq <= bound2]
        xsq = x1 * x1 + x2 * x2
        if x2.size == 0:
            continue
        xn = np.sqrt(xsq.astype(np.float64))
        w = np.full(xn.shape, cap, dtype=np.float64)
        if mink_exp > 0:
            with np.errstate(divide="ignore"):
                w = np.minimum(w, mink_const * np.where(xn > 0, xn, 1.0) ** (-mink_exp))
            w = np.where(xn > 0, w, cap)
        W = (w + delta) * lam_sqrt + delta
        center = np.outer(x1 * np.ones_like(x2, dtype=np.float64), th1) + np.outer(x2, th2)
        lo = np.ceil(center - W[:, None]).astype(np.int64)
        hi = np.floor(center + W[:, None]).astype(np.int64)
        span = int((hi - lo).max()) + 1 if lo.size else 0
        if span <= 0:
            continue
        for offs in itertools.product(range(span), repeat=n):
            y = lo + np.array(offs, dtype=np.int64)
            ok = (y <= hi).all(axis=1)
            zsq = xsq + (y * y).sum(axis=1)
            ok &= zsq <= bound2
            if x1 == 0:
                ok &= _canonical_zero_x(x2, y)
            if not ok.any():
                continue
            r = center - y
            u1 = r @ th1
            u2 = r @ th2
            rr = (r * r).sum(axis=1)
            z2 = rr - (ainv[0, 0] * u1 * u1 + 2 * ainv[0, 1] * u1 * u2 + ainv[1, 1] * u2 * u2)
            zeta = np.sqrt(np.maximum(z2, 0.0))
            env = np.full(zeta.shape, cap, dtype=np.float64)
            if mink_exp > 0:
                env = np.minimum(env, mink_const * np.sqrt(np.maximum(zsq, 1).astype(np.float64)) ** (-mink_exp))
            env = np.where(zsq == 1, np.inf, env)
            mask = ok & (zeta <= env + delta)
            if mask.any():
                out.append(np.concatenate(
                    [np.full((mask.sum(), 1), x1, dtype=np.int64), x2[mask, None], y[mask]], axis=1))
    if not out:
        return np.zeros((0, 2 + n), dtype=np.int64)
    return np.concatenate(out)


def _canonical_zero_x(x2, y):
    """Rows with x1 = 0: keep x2 > 0, or x2 = 0 with y nonzero and first nonzero y positive."""
    ok = x2 > 0
    zero = x2 == 0
    if zero.any():
        nz = y != 0
        has = nz.any(axis=1)
        first = np.argmax(nz, axis=1)
        lead = y[np.arange(len(y)), first]
        ok = ok | (zero & has & (lead > 0))
    return ok
