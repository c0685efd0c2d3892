"""Canonical coordinate tests: pointwise definitions, the closed-form
self-intersecting example, duality identities, reconstruction, and the
smeared delta relations (diagonal metric and multiplication)."""

from __future__ import annotations

import numpy as np

import todafrob.canonical as ca
import todafrob.flatcoords as fc
import todafrob.laurent as la
import todafrob.manifold as mf
from todafrob.laurent import LaurentSeries as LS

PT = mf.sample_point(11)
PTF = mf.sample_point(7, n=8, scale=0.03)


def test_pointwise_definitions():
    data = ca.canonical_data(PT, 256)
    lp = PT.lam_p.evaluate(data.p)
    bp = PT.lbar_p.evaluate(data.p)
    assert np.max(np.abs(data.sigma - lp / (lp + bp))) < 1e-14
    assert np.max(np.abs(data.f + data.p**2 * lp * bp / (lp + bp))) < 1e-14
    assert data.critical_residual < 1e-14
    assert not data.self_intersecting


def test_self_intersecting_example():
    q = mf.Point(LS(-1, [-1.0, 0.0, 1.0]), LS(-1, [1.0]))  # lam = z - 1/z, lbar = 1/z
    data = ca.canonical_data(q, 128)
    assert np.max(np.abs(data.sigma - (1.0 + data.p**-2))) < 1e-14
    assert np.max(np.abs(data.u_sigma - 2.0 / data.p)) < 1e-14
    assert data.self_intersecting
    assert data.critical_residual < 1e-14


def test_du_pair_unit_and_euler():
    p = la.unit_roots(256)
    for pt in (PT, PTF):
        assert np.max(np.abs(ca.du_pair(pt, p, mf.unit_tangent()) - 1.0)) < 1e-13
        data = ca.canonical_data(pt, 256)
        vals = ca.du_pair(pt, p, mf.euler_field(pt))
        assert np.max(np.abs(vals - data.u_sigma)) < 1e-12


def test_velocities_are_du_eigenvalues():
    p = la.unit_roots(256)
    for i in (-2, 0, 1):
        a_i = ca.char_velocities(PT, ("t", i), 256)
        eig = ca.du_pair(PT, p, fc.flat_frame(PT, i))
        assert np.max(np.abs(a_i - eig)) < 1e-10, i
    a_u = ca.char_velocities(PT, "u", 256)
    assert np.max(np.abs(a_u - ca.du_pair(PT, p, mf.frame_u(PT)))) < 1e-14
    assert np.max(np.abs(a_u - PT.ubarm1 / p)) < 1e-14


def test_velocity_at_locus():
    q = mf.locus_point(0.3, -0.1)
    data = ca.canonical_data(q, 128)
    a_0 = ca.char_velocities(q, ("t", 0), 128)
    assert np.max(np.abs(a_0 + data.p * data.sigma)) < 1e-13


def test_lax_velocity_reduces_to_printed_case():
    # the printed n-independent form is the n = 1 specialization
    c_1 = ca.char_velocities(PT, ("s", 1), 256)
    p = la.unit_roots(256)
    direct = PT.lam_p.shift(1).project("geq", 0).evaluate(p)
    assert np.max(np.abs(c_1 - direct)) < 1e-13
    cb_1 = ca.char_velocities(PT, ("sbar", 1), 256)
    directb = PT.lbar_p.shift(1).project("leq", -1).evaluate(p)
    assert np.max(np.abs(cb_1 - directb)) < 1e-13


def test_reconstruction_roundtrip():
    x = mf.sample_tangent(5)
    p = la.unit_roots(1024)
    vals = ca.mu_pair(PT, p, x)
    y = ca.reconstruct_tangent(PT, vals)
    assert (x.a - y.a).max_abs() < 1e-9 and (x.ab - y.ab).max_abs() < 1e-9
    # consistency of the two pairings: du = -(lam' lbar'/w') dmu
    lp = PT.lam_p.evaluate(p)
    bp = PT.lbar_p.evaluate(p)
    assert np.max(np.abs(ca.du_pair(PT, p, x) + lp * bp / (lp + bp) * vals)) < 1e-11


def test_semisimplicity():
    e = mf.unit_tangent()
    assert ca.semisimplicity_residual(PT, e, e) < 1e-12
    x = mf.sample_tangent(5)
    y = mf.sample_tangent(6)
    assert ca.semisimplicity_residual(PT, x, y) < 1e-8
    assert ca.semisimplicity_residual(PTF, x, y) < 1e-8
    assert ca.semisimplicity_residual(PT, x, mf.frame_u(PT)) < 1e-8


def test_metric_diagonality_witness():
    e = mf.unit_tangent()
    assert abs(ca.metric_diagonality_residual(PT, e, e)) < 1e-8
    assert abs(ca.metric_diagonality_residual(PT, e, mf.frame_u(PT))) < 1e-8
    x = mf.sample_tangent(5)
    y = mf.sample_tangent(6)
    assert abs(ca.metric_diagonality_residual(PT, x, y)) < 1e-8
    assert abs(ca.metric_diagonality_residual(PTF, x, y)) < 1e-8
