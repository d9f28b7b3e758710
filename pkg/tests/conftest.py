import functools
import math
from fractions import Fraction

import mpmath
import pytest

from dioph.best_approx import SPHERICAL, ApproxSequence
from dioph.gallery import GallerySpec, build
from dioph.geometry import ExtendedVector


def hand_sequence(zs, zetas=None, kind=SPHERICAL):
    """ApproxSequence from raw integer vectors, for structure tests with no matrix."""
    recs = []
    for i, z in enumerate(zs):
        zsq = sum(a * a for a in z)
        zeta = mpmath.mpf(zetas[i]) if zetas else mpmath.mpf(1) / (i + 2)
        recs.append(ExtendedVector(x=tuple(z[:2]), y=tuple(z[2:]), zeta_sup=zeta,
                                   zeta_spherical=zeta, Z_euclid=mpmath.sqrt(zsq),
                                   X_sup=max(abs(z[0]), abs(z[1])), Z_sq=zsq))
    return ApproxSequence(kind, tuple(recs), tuple(False for _ in recs))


@functools.lru_cache(maxsize=None)
def random_matrix(n, seed):
    return build(GallerySpec("random", n, seed)).theta


@pytest.fixture(scope="session")
def remark4_matrix():
    return build(GallerySpec("remark4", 3, 7)).theta


@pytest.fixture(scope="session")
def golden_degenerate():
    from dioph.geometry import ThetaMatrix
    return ThetaMatrix.from_values([["golden:-1", "0"]], allow_degenerate=True)


def modular_rank(rows, p=2_147_483_647):
    """Rank over GF(p) by plain Gaussian elimination."""
    A = [[a % p for a in r] for r in rows]
    rank, ncols = 0, len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], p - 2, p)
        for i in range(len(A)):
            if i != rank and A[i][c]:
                f = A[i][c] * inv % p
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[rank])]
        rank += 1
    return rank


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
