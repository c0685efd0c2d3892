"""Tests for the flat chart.

Independent oracle: additive Cauchy splitting of log(z(w)/w) along the
image curve.  The part holomorphic inside the curve carries the
nonnegative coefficients, the part vanishing at infinity the negative
ones; both are recovered by evaluating the Cauchy transform on control
circles and reading Fourier coefficients, with no reference to the
moment-integral formula used by the implementation.
"""

from __future__ import annotations

import numpy as np
import pytest

from todafrob import flatcoords as fc
from todafrob import laurent as la
from todafrob import manifold as mf
from todafrob.laurent import LaurentSeries as LS

PT = mf.sample_point(11)


def rh_split_coefficients(pt, n_min, n_max, m=2048, k=128):
    zs = la.unit_roots(m)
    wv = la.grid_eval(pt.w, m)
    wpv = la.grid_eval(pt.w_p, m)
    h = la.log_values_on_circle(zs / wv)
    base = h * wpv

    def cauchy(zetas):
        # (1/2 pi i) contour of h(w) dw / (w - zeta), sampled in z
        return np.array([la.contour_mean(base / (wv - zeta)) for zeta in zetas])

    r_in = 0.4 * float(np.min(np.abs(wv)))
    r_out = 2.5 * float(np.max(np.abs(wv)))
    ring = la.unit_roots(k)
    inside = cauchy(r_in * ring)
    outside = -cauchy(r_out * ring)
    f_in = np.fft.fft(inside) / k
    f_out = np.fft.fft(outside) / k
    out = {}
    for n in range(0, n_max + 1):
        out[n] = complex(f_in[n] / r_in**n)
    for n in range(n_min, 0):
        out[n] = complex(f_out[n % k] / r_out**n)
    return out


def test_chart_matches_cauchy_splitting():
    t = fc.flat_coordinates(PT, -6, 6)
    t_rh = rh_split_coefficients(PT, -6, 6)
    for n in range(-6, 7):
        assert abs(t[n] - t_rh[n]) < 1e-8, n


def test_locus_chart_vanishes():
    pt = mf.locus_point(-0.3 + 0.1j, 0.25 - 0.05j)
    t = fc.flat_coordinates(pt, -8, 8)
    assert max(abs(c) for c in t.values()) < 1e-14


def test_gram_matrix_is_constant():
    frames = {n: fc.flat_frame(PT, n) for n in range(-4, 5)}
    frames["u"] = mf.frame_u(PT)
    frames["v"] = mf.frame_v()
    keys = list(frames)
    worst = 0.0
    for i in keys:
        for j in keys:
            got = mf.metric_tangent(PT, frames[i], frames[j])
            if i == "u":
                want = 1.0 if j == "v" else 0.0
            elif i == "v":
                want = 1.0 if j == "u" else 0.0
            elif j in ("u", "v"):
                want = 0.0
            else:
                want = 1.0 if i + j == -1 else 0.0
            worst = max(worst, abs(got - want))
    assert worst < 1e-9


def test_roundtrip_point_chart_point():
    # coefficients decay like 0.8^|n| here, so +-140 puts the dropped
    # tail near machine precision
    t = fc.flat_coordinates(PT, -140, 140, grid_size=2048)
    edge = max(abs(t[-140]), abs(t[140]))
    assert edge < 1e-12  # chart truncation provably negligible
    pt2 = fc.point_from_flat(t, PT.u, PT.v, band_n=40)
    assert la.series_dist(PT.lam, pt2.lam) < 1e-10
    assert la.series_dist(PT.lbar, pt2.lbar) < 1e-10


def test_roundtrip_chart_point_chart():
    t = {-3: 0.02 + 0.01j, -1: -0.03 + 0.0j, 0: 0.04 - 0.02j, 2: 0.015j, 5: -0.01 + 0.0j}
    u, v = -0.4 + 0.1j, 0.2 - 0.05j
    pt = fc.point_from_flat(t, u, v, band_n=64)
    assert abs(pt.u - u) < 1e-12
    assert abs(pt.v - v) < 1e-13
    t2 = fc.flat_coordinates(pt, -12, 12)
    for n in range(-12, 13):
        assert abs(t2[n] - t.get(n, 0.0)) < 1e-11, n


def test_frame_and_differential_duality():
    for n in (-3, -1, 0, 2):
        dt = fc.flat_differential(PT, n)
        # raising the index with the metric sends dt_n to the t_{-1-n} frame
        raised = mf.eta_apply(PT, dt)
        assert raised.dist(fc.flat_frame(PT, -1 - n)) < 1e-10
        for m in (-3, -1, 0, 2):
            got = mf.pair(dt, fc.flat_frame(PT, m))
            assert abs(got - (1.0 if m == n else 0.0)) < 1e-11
        assert abs(mf.pair(dt, mf.frame_u(PT))) < 1e-12
        assert abs(mf.pair(dt, mf.frame_v())) < 1e-12


def _bump_point(pt, deg, h):
    mono = LS.monomial(deg, h)
    if deg <= 0:
        return mf.Point(pt.lam + mono, pt.lbar)
    return mf.Point(pt.lam, pt.lbar + mono)


def test_jacobian_matches_finite_differences():
    h = 1e-6
    for n, m_deg in [(0, 0), (2, -3), (-3, 2), (-1, 1)]:
        plus = fc.flat_coordinates(_bump_point(PT, m_deg, h), n, n)[n]
        minus = fc.flat_coordinates(_bump_point(PT, m_deg, -h), n, n)[n]
        fd = (plus - minus) / (2 * h)
        exact = fc.jacobian_t_w(PT, n, m_deg)
        assert abs(fd - exact) < 1e-8
        bump = (
            mf.Tangent(LS.monomial(m_deg, 1.0), LS.zero())
            if m_deg <= 0
            else mf.Tangent(LS.zero(), LS.monomial(m_deg, 1.0))
        )
        assert abs(mf.pair(fc.flat_differential(PT, n), bump) - exact) < 1e-10


def test_scalar_identities():
    t = fc.flat_coordinates(PT, -100, 100, grid_size=2048)
    assert max(abs(t[-100]), abs(t[100])) < 1e-10
    lhs = fc.log_ratio_pairing(PT)
    rhs = 0.5 * sum(t[i] * t[-1 - i] for i in range(-100, 100)) - t[-1]
    assert abs(lhs - rhs) < 1e-9
    # the constant coefficient of lam is -t_{-1} - v
    assert abs(PT.u0 + t[-1] + PT.v) < 1e-11


def test_newton_divergence_is_reported():
    with pytest.raises(fc.NewtonDiverged):
        fc.point_from_flat({1: 10.0}, 0.0, 0.0, band_n=16)
