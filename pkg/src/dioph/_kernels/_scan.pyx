# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled float64 prefilters for the brute-force oracle.

Both scans visit every canonical integer point of the search region and keep
the ones whose float distance is below the record envelope plus ``delta``.
They decide nothing on their own: survivors are re-evaluated exactly.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, floor, ceil, fabs, pow, fmin, rint


def sup_scan(double[:] th1, double[:] th2, long bound, long x1_lo, long x1_hi,
             double cap, double mink_exp, double mink_const, double delta):
    cdef Py_ssize_t n = th1.shape[0]
    cdef long x1, x2, X
    cdef Py_ssize_t j
    cdef double v, r, zeta, env
    out = []
    for x1 in range(x1_lo, x1_hi + 1):
        for x2 in range(-bound, bound + 1):
            if x1 == 0 and x2 <= 0:
                continue
            X = x1 if x1 >= (x2 if x2 >= 0 else -x2) else (x2 if x2 >= 0 else -x2)
            zeta = 0.0
            for j in range(n):
                v = th1[j] * x1 + th2[j] * x2
                r = fabs(v - rint(v))
                if r > zeta:
                    zeta = r
            if X == 1:
                out.append((x1, x2))
                continue
            env = cap
            if mink_exp > 0:
                env = fmin(cap, mink_const * pow(<double>X, -mink_exp))
            if zeta <= env + delta:
                out.append((x1, x2))
    if not out:
        return np.zeros((0, 2), dtype=np.int64)
    return np.array(out, dtype=np.int64)


def spherical_scan(double[:] th1, double[:] th2, double[:, :] ainv, double lam_sqrt,
                   long bound2, long x1_lo, long x1_hi, double cap, double mink_exp,
                   double mink_const, double delta):
    cdef Py_ssize_t n = th1.shape[0]
    cdef long x1, x2, xsq, zsq, rad, s
    cdef Py_ssize_t j, k
    cdef double W, w, xn, u1, u2, rr, zeta2, zeta, env
    cdef long[:] lo = np.zeros(n, dtype=np.int64)
    cdef long[:] hi = np.zeros(n, dtype=np.int64)
    cdef long[:] y = np.zeros(n, dtype=np.int64)
    cdef double[:] center = np.zeros(n, dtype=np.float64)
    cdef double[:] r = np.zeros(n, dtype=np.float64)
    cdef bint done, yzero, canon_ok
    out = []
    rad = <long>floor(sqrt(<double>bound2)) + 1
    for x1 in range(x1_lo, x1_hi + 1):
        if x1 * x1 > bound2:
            break
        s = <long>floor(sqrt(<double>(bound2 - x1 * x1))) + 1
        for x2 in range(-s, s + 1):
            if x1 == 0 and x2 < 0:
                continue
            xsq = x1 * x1 + x2 * x2
            if xsq > bound2:
                continue
            if xsq == 0:
                w = cap + delta
            else:
                xn = sqrt(<double>xsq)
                w = cap
                if mink_exp > 0:
                    w = fmin(cap, mink_const * pow(xn, -mink_exp))
                w = w + delta
            W = w * lam_sqrt + delta
            for j in range(n):
                center[j] = th1[j] * x1 + th2[j] * x2
                lo[j] = <long>ceil(center[j] - W)
                hi[j] = <long>floor(center[j] + W)
                if lo[j] > hi[j]:
                    break
            else:
                for j in range(n):
                    y[j] = lo[j]
                done = False
                while not done:
                    zsq = xsq
                    for j in range(n):
                        zsq += y[j] * y[j]
                    canon_ok = True
                    if xsq == 0:
                        yzero = True
                        for j in range(n):
                            if y[j] != 0:
                                canon_ok = y[j] > 0
                                yzero = False
                                break
                        if yzero:
                            canon_ok = False
                    if canon_ok and zsq <= bound2:
                        u1 = 0.0
                        u2 = 0.0
                        rr = 0.0
                        for j in range(n):
                            r[j] = center[j] - y[j]
                            u1 += th1[j] * r[j]
                            u2 += th2[j] * r[j]
                            rr += r[j] * r[j]
                        zeta2 = rr - (ainv[0, 0] * u1 * u1 + 2.0 * ainv[0, 1] * u1 * u2
                                      + ainv[1, 1] * u2 * u2)
                        if zeta2 < 0:
                            zeta2 = 0.0
                        zeta = sqrt(zeta2)
                        if zsq == 1:
                            env = 1e300
                        else:
                            env = cap
                            if mink_exp > 0:
                                env = fmin(cap, mink_const * pow(sqrt(<double>zsq), -mink_exp))
                        if zeta <= env + delta:
                            out.append((x1, x2) + tuple([y[k] for k in range(n)]))
                    # odometer over the y box
                    j = 0
                    while True:
                        if j == n:
                            done = True
                            break
                        y[j] += 1
                        if y[j] <= hi[j]:
                            break
                        y[j] = lo[j]
                        j += 1
    if not out:
        return np.zeros((0, 2 + n), dtype=np.int64)
    return np.array(out, dtype=np.int64)
