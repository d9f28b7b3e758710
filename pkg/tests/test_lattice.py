import itertools
import random

import mpmath
from mpmath import mp

from dioph.lattice import lll_gram, short_vectors, transform_gram


def _det(U):
    return int(round(mpmath.det(mpmath.matrix(U))))


def _random_form(d, rng):
    with mp.workprec(128):
        B = mpmath.matrix([[rng.uniform(-5, 5) for _ in range(d)] for _ in range(d)])
        return B.T * B + mpmath.eye(d) * mpmath.mpf("0.01")


def test_lll_is_unimodular():
    rng = random.Random(3)
    for d in (2, 3, 4, 5):
        with mp.workprec(128):
            U = lll_gram(_random_form(d, rng))
        assert abs(_det(U)) == 1


def test_short_vectors_match_box_scan():
    rng = random.Random(5)
    for d in (2, 3, 4):
        with mp.workprec(128):
            Q = _random_form(d, rng)
            R = mpmath.mpf(30)
            pts, _ = short_vectors(Q, R)
            got = {p if next(a for a in p if a) > 0 else tuple(-a for a in p) for p in pts}
            want = set()
            # the ellipsoid fits in a box of half-width sqrt(R * (Q^-1)_ii)
            Qi = mpmath.inverse(Q)
            w = [int(mpmath.floor(mpmath.sqrt(R * Qi[i, i]))) for i in range(d)]
            for z in itertools.product(*[range(-a, a + 1) for a in w]):
                if any(z) and next(a for a in z if a) > 0:
                    v = mpmath.matrix(z)
                    if (v.T * Q * v)[0] <= R:
                        want.add(tuple(z))
        assert got == want


def test_transform_gram_identity():
    with mp.workprec(64):
        Q = mpmath.matrix([[2, 1], [1, 3]])
        G = transform_gram(Q, [[1, 0], [0, 1]])
        assert G == Q
