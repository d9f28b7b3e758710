from fractions import Fraction

import mpmath
import pytest

from dioph import best_approx as ba
from dioph.errors import ParamError
from dioph.exponents import estimate
from dioph.gallery import GallerySpec, build, liouville_denominators
from dioph.geometry import poss_screen
from dioph.numerics import PrecisionContext


def test_remark4_proportional_bit_exact():
    ctx = PrecisionContext(256)
    g = build(GallerySpec("remark4", 3, 7, ctx))
    with ctx.workprec():
        phi = (1 + mpmath.sqrt(5)) / 2
        for a, b in g.theta.rows:
            assert ctx.to_mpf(b) == phi * ctx.to_mpf(a)
    assert any("inconsisten" in n or "conclusion" in n for n in g.notes)


@pytest.mark.parametrize("kind, n, params", [
    ("random", 2, {}), ("remark4", 3, {}), ("liouville", 1, {"a": 3}), ("algebraic", 2, {}),
])
def test_deterministic_and_screened(kind, n, params):
    a = build(GallerySpec(kind, n, 5, params=params))
    b = build(GallerySpec(kind, n, 5, params=params))
    assert a.theta.rows == b.theta.rows
    assert not a.theta.degenerate and poss_screen(a.theta) is None
    assert a.notes


def test_seed_changes_random():
    assert build(GallerySpec("random", 2, 1)).theta.rows != build(GallerySpec("random", 2, 2)).theta.rows


def test_entries_in_unit_interval():
    for kind in ("random", "algebraic"):
        for a, b in build(GallerySpec(kind, 3, 0)).theta.rows:
            assert 0 < a < 1 and 0 < b < 1


def test_param_errors():
    with pytest.raises(ParamError):
        build(GallerySpec("remark4", 2, 0))
    with pytest.raises(ParamError):
        build(GallerySpec("liouville", 1, 0, params={"a": 1}))
    with pytest.raises(ParamError):
        build(GallerySpec("cantor", 1, 0))
    with pytest.raises(ParamError):
        build(GallerySpec("random", 0, 0))


def test_liouville_denominators():
    qs = liouville_denominators(3, 256)
    assert qs[:3] == [10, 1000, 10**9]
    assert all(q.bit_length() <= 256 for q in qs)
    assert liouville_denominators(2.5, 256)[:2] == [10, 1000]


def test_liouville_beta_above_alpha():
    g = build(GallerySpec("liouville", 1, 0, params={"a": 3}))
    seq = ba.enumerate_spherical(g.theta, 10**4)
    est = estimate(seq, 3)
    assert est.beta_hat > est.alpha_hat
