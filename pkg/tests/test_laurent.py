"""Banded arithmetic, grid transforms, and certified circle operations."""

import numpy as np
import pytest

from todafrob import laurent as la
from todafrob.laurent import LaurentSeries as LS


def random_series(rng, lo, hi, scale=1.0):
    n = hi - lo + 1
    c = scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))
    return LS(lo, c)


# -- ring operations ---------------------------------------------------


def test_mul_matches_dict_oracle():
    # brute-force convolution over a dict of degree -> coefficient
    rng = np.random.default_rng(11)
    f = random_series(rng, -4, 3)
    g = random_series(rng, -2, 5)
    prod = {}
    for a in range(f.lo, f.hi + 1):
        for b in range(g.lo, g.hi + 1):
            prod[a + b] = prod.get(a + b, 0.0) + f.coeff(a) * g.coeff(b)
    h = f * g
    assert h.lo == f.lo + g.lo and h.hi == f.hi + g.hi
    for d, v in prod.items():
        assert abs(h.coeff(d) - v) < 1e-13


def test_ring_identities():
    rng = np.random.default_rng(7)
    f = random_series(rng, -6, 4)
    g = random_series(rng, -3, 6)
    h = random_series(rng, -5, 2)
    assert la.series_dist(f * g, g * f) < 1e-12
    assert la.series_dist((f * g) * h, f * (g * h)) < 1e-12
    assert la.series_dist(f * (g + h), f * g + f * h) < 1e-12
    assert (f - f).is_zero
    assert la.series_dist(f * LS.one(), f) == 0.0


def test_projection_partition_and_adjoint():
    rng = np.random.default_rng(13)
    f = random_series(rng, -7, 7)
    g = random_series(rng, -6, 8)
    assert la.series_dist(f.project("geq", 0) + f.project("leq", -1), f) == 0.0
    # adjoint identity: res(f * (g)_{>=k}) == res((f)_{<=-k-1} * g)
    for k in (-3, -1, 0, 2):
        lhs = (f * g.project("geq", k)).residue()
        rhs = (f.project("leq", -k - 1) * g).residue()
        assert abs(lhs - rhs) < 1e-12


def test_pi_op_splits_sign():
    f = LS(-2, [3.0, 2.0, 1.0, 5.0, 7.0])  # degrees -2..2
    p = la.pi_op(f)
    assert p.coeff(-2) == -3.0 and p.coeff(-1) == -2.0
    assert p.coeff(0) == 1.0 and p.coeff(1) == 5.0 and p.coeff(2) == 7.0


def test_derivatives():
    f = LS(-2, [1.0, 0.0, 2.0, 3.0])  # z^-2 + 2 + 3z
    d = f.derivative()
    assert d.coeff(-3) == -2.0 and d.coeff(0) == 3.0 and d.coeff(-1) == 0.0
    zd = f.z_derivative()
    assert zd.coeff(-2) == -2.0 and zd.coeff(0) == 0.0 and zd.coeff(1) == 3.0
    # product rule
    rng = np.random.default_rng(3)
    g = random_series(rng, -3, 3)
    lhs = (f * g).derivative()
    rhs = f.derivative() * g + f * g.derivative()
    assert la.series_dist(lhs, rhs) < 1e-12


def test_residue_is_cm1():
    f = LS(-3, [4.0, 0.5, 2.0, 9.0])
    assert f.residue() == f.coeff(-1) == 2.0


# -- grid transforms ---------------------------------------------------


def test_grid_roundtrip_exact_when_band_fits():
    rng = np.random.default_rng(5)
    f = random_series(rng, -9, 12)
    m = 32
    vals = la.grid_eval(f, m)
    back = la.grid_to_series(vals, -9, 12)
    assert la.series_dist(back, f) < 1e-13


def test_grid_eval_matches_pointwise_evaluation():
    rng = np.random.default_rng(6)
    f = random_series(rng, -5, 5)
    m = 64
    direct = f.evaluate(la.unit_roots(m))
    assert np.max(np.abs(la.grid_eval(f, m) - direct)) < 1e-12


def test_aliasing_detected_by_roundtrip():
    # z^5 on 4 nodes aliases onto degree 1: recovery on [-1, 1] returns z
    f = LS.monomial(5)
    vals = la.grid_eval(f, 4)
    back = la.grid_to_series(vals, -1, 1)
    assert la.series_dist(back, LS.monomial(1)) < 1e-14
    assert la.series_dist(back, f) > 0.5  # roundtrip flags the aliasing


def test_band_too_wide():
    with pytest.raises(la.BandTooWide):
        la.grid_to_series(np.ones(2), -1, 1)


def test_contour_mean_is_residue():
    rng = np.random.default_rng(9)
    f = random_series(rng, -6, 6)
    vals = la.grid_eval(f, 64)
    assert abs(la.contour_mean(vals) - f.residue()) < 1e-12


def test_default_grid_size_policy():
    assert la.default_grid_size(0) == 64    # > 32
    assert la.default_grid_size(24) == 256  # > 128
    assert la.default_grid_size(120) == 1024


# -- certified circle operations ---------------------------------------

# frozen long-division oracle for 1/(2 + z): (1/2) sum (-z/2)^k
GEOMETRIC_RECIP = [
    0.5, -0.25, 0.125, -0.0625, 0.03125, -0.015625, 0.0078125,
    -0.00390625, 0.001953125, -0.0009765625, 0.00048828125,
]

# frozen Mercator oracle for log(1 + z/2): sum (-1)^{k+1} (z/2)^k / k
MERCATOR_LOG = [0.5, -0.125, 1.0 / 24.0, -0.015625, 0.00625]


def test_reciprocal_matches_long_division():
    f = LS(0, [2.0, 1.0])
    g = la.reciprocal_on_circle(f, 0, 48)
    for k, want in enumerate(GEOMETRIC_RECIP):
        assert abs(g.coeff(k) - want) < 1e-14
    m = 256
    resid = np.max(np.abs(la.grid_eval(f, m) * la.grid_eval(g, m) - 1.0))
    assert resid < 1e-11


def test_reciprocal_band_too_narrow_raises():
    with pytest.raises(la.TruncationLoss):
        la.reciprocal_on_circle(LS(0, [2.0, 1.0]), 0, 10)


def test_reciprocal_zero_on_circle():
    with pytest.raises(la.ZeroOnCircle):
        la.reciprocal_on_circle(LS(0, [1.0, -1.0]), -20, 20)  # vanishes at z=1


def test_log_matches_mercator():
    f = LS(0, [1.0, 0.5])
    g = la.log_on_circle(f, 0, 60)
    assert abs(g.coeff(0)) < 1e-15
    for k, want in enumerate(MERCATOR_LOG, start=1):
        assert abs(g.coeff(k) - want) < 1e-14
    m = 256
    resid = np.max(np.abs(np.exp(la.grid_eval(g, m)) - la.grid_eval(f, m)))
    assert resid < 1e-11


def test_log_two_sided_band():
    # winding-zero perturbation of 1 with coefficients on both sides
    f = LS(-1, [0.2, 1.0, -0.15 + 0.1j])
    g = la.log_on_circle(f, -40, 40)
    m = 512
    resid = np.max(np.abs(np.exp(la.grid_eval(g, m)) - la.grid_eval(f, m)))
    assert resid < 1e-11


def test_log_winding_errors():
    with pytest.raises(la.WindingNonzero):
        la.log_on_circle(LS.monomial(1), -5, 5)
    with pytest.raises(la.ZeroOnCircle):
        la.log_on_circle(LS(0, [1.0, -1.0]), -5, 5)
    with pytest.raises(la.WindingUnresolved):
        la.log_on_circle(LS.monomial(5), -5, 5, grid_size=16)


def test_divide_inverts_multiply():
    rng = np.random.default_rng(21)
    f = random_series(rng, -3, 3, scale=0.1) + LS.one()
    h = random_series(rng, -2, 2, scale=0.1) + LS(0, [2.0])
    q = la.divide_on_circle(f * h, h, -30, 30)
    assert la.series_dist(q, f) < 1e-12


def test_taylor_reciprocal_geometric():
    f = LS(0, [1.0, -0.5])
    g = la.taylor_reciprocal_at_zero(f, 12)
    for k in range(13):
        assert abs(g.coeff(k) - 0.5**k) < 1e-14
    prod = (f * g).restrict(0, 12)
    assert la.series_dist(prod, LS.one()) < 1e-13


def test_taylor_reciprocal_singular_inputs():
    with pytest.raises(la.SingularAtZero):
        la.taylor_reciprocal_at_zero(LS(-1, [1.0, 1.0]), 5)
    with pytest.raises(la.SingularAtZero):
        la.taylor_reciprocal_at_zero(LS.monomial(1), 5)


def test_unwrap_winding_values():
    m = 128
    zs = la.unit_roots(m)
    assert la.circle_winding(zs) == 1
    assert la.circle_winding(np.ones(m) + 0.3 * zs) == 0
    assert la.circle_winding(zs**-2) == -2


# -- serialization -----------------------------------------------------


def test_json_roundtrip_bit_exact():
    rng = np.random.default_rng(33)
    f = random_series(rng, -5, 7, scale=np.pi)
    g = la.loads(la.dumps(f))
    assert g.lo == f.lo
    assert np.array_equal(g.c, f.c)


def test_json_zero_series():
    z = LS.zero()
    assert la.loads(la.dumps(z)).is_zero
