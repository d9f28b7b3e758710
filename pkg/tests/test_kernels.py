"""The compiled scan kernels and the numpy fallback must agree exactly."""
import numpy as np
import pytest

from dioph import _kernels
from dioph import best_approx as ba

from conftest import random_matrix

compiled = pytest.mark.skipif(_kernels.BACKEND != "compiled", reason="extension not built")


def _rows(arr):
    return sorted(map(tuple, np.asarray(arr).tolist()))


@compiled
@pytest.mark.parametrize("n, seed", [(1, 1), (2, 2), (3, 3)])
def test_sup_scan_agree(n, seed):
    th = random_matrix(n, seed)
    fl = th.float_rows()
    t1 = np.array([a for a, _ in fl])
    t2 = np.array([b for _, b in fl])
    args = (t1, t2, 300, 0, 300, 0.4, 2.0 / n, 1.0, 1e-9)
    c = _kernels.get_backend("compiled")[0](*args)
    p = _kernels.get_backend("python")[0](*args)
    assert _rows(c) == _rows(p)


@compiled
@pytest.mark.parametrize("n, seed", [(1, 1), (2, 2), (3, 3)])
def test_spherical_scan_agree(n, seed):
    th = random_matrix(n, seed)
    fl = th.float_rows()
    t1 = np.array([a for a, _ in fl])
    t2 = np.array([b for _, b in fl])
    ainv = ba._ainv_float(th)
    lam = float(ba.SubspaceL(th).lambda_max)
    args = (t1, t2, ainv, lam ** 0.5, 200 ** 2, 0, 200, 0.5, 2.0 / n, ba.minkowski_constant(n), 1e-9)
    c = _kernels.get_backend("compiled")[1](*args)
    p = _kernels.get_backend("python")[1](*args)
    assert _rows(c) == _rows(p)


@pytest.mark.parametrize("kind", ba.KINDS)
def test_oracle_same_under_both_backends(kind):
    th = random_matrix(2, 8)
    ref = ba.brute_force(th, 200, kind, backend="python")
    assert ref.same_records(ba.brute_force(th, 200, kind))
    if _kernels.BACKEND == "compiled":
        assert ref.same_records(ba.brute_force(th, 200, kind, backend="compiled"))


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.get_backend("fortran")
