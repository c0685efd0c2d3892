"""Canonical coordinates on the semisimple stratum.

The curve sigma(p) = lam'/w' labels a continuous family of canonical
coordinates u_sigma; the one-forms du(p) diagonalize both the metric
(with weight f(p)) and the multiplication.  Everything is evaluated on
unit-circle grids; delta-function relations are only ever tested in
smeared form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import laurent as la
from .manifold import Point, Tangent, tan_mul


@dataclass(frozen=True)
class CanonicalData:
    p: np.ndarray
    sigma: np.ndarray
    u_sigma: np.ndarray
    f: np.ndarray
    self_intersecting: bool
    critical_residual: float


def canonical_data(pt: Point, m: int | None = None) -> CanonicalData:
    """sigma, u_sigma and the metric weight f on an m-point circle grid."""
    m = m or max(pt.quad_m(8), 256)
    p = la.unit_roots(m)
    lam = la.grid_eval(pt.lam, m)
    lbar = la.grid_eval(pt.lbar, m)
    lp = la.grid_eval(pt.lam_p, m)
    bp = la.grid_eval(pt.lbar_p, m)
    wp = lp + bp
    if float(np.min(np.abs(wp))) <= 1e-10 * max(float(np.max(np.abs(wp))), 1.0):
        raise la.ZeroOnCircle("w' vanishes on the circle")

    sigma = lp / wp
    u_sigma = sigma * lbar + (sigma - 1.0) * lam
    f = -(p**2) * lp * bp / wp
    residual = float(np.max(np.abs(sigma * bp + (sigma - 1.0) * lp)))

    # the curve is traced simply iff non-adjacent samples stay apart
    diam = float(np.max(np.abs(sigma[:, None] - sigma[None, :])))
    idx = np.arange(m)
    sep = np.minimum((idx[:, None] - idx[None, :]) % m, (idx[None, :] - idx[:, None]) % m)
    gaps = np.abs(sigma[:, None] - sigma[None, :])[sep >= 3]
    gap_ratio = float(np.min(gaps) / diam) if diam > 0 else 0.0

    return CanonicalData(
        p=p,
        sigma=sigma,
        u_sigma=u_sigma,
        f=f,
        self_intersecting=gap_ratio <= 1e-6,
        critical_residual=residual,
    )


def du_pair(pt: Point, p, x: Tangent):
    """<du(p), x> = (lam'(p) ab(p) - lbar'(p) a(p)) / w'(p)."""
    p = np.asarray(p, dtype=complex)
    lp = pt.lam_p.evaluate(p)
    bp = pt.lbar_p.evaluate(p)
    a = x.a.evaluate(p) if not x.a.is_zero else np.zeros_like(p)
    ab = x.ab.evaluate(p) if not x.ab.is_zero else np.zeros_like(p)
    return (lp * ab - bp * a) / (lp + bp)


def mu_pair(pt: Point, p, x: Tangent):
    """<dmu(p), x> = a(p)/lam'(p) - ab(p)/lbar'(p); du = -(lam' lbar'/w') dmu."""
    p = np.asarray(p, dtype=complex)
    lp = pt.lam_p.evaluate(p)
    bp = pt.lbar_p.evaluate(p)
    a = x.a.evaluate(p) if not x.a.is_zero else np.zeros_like(p)
    ab = x.ab.evaluate(p) if not x.ab.is_zero else np.zeros_like(p)
    return a / lp - ab / bp


def reconstruct_tangent(pt: Point, mu_values: np.ndarray) -> Tangent:
    """Rebuild x from samples of <dmu(p), x> on the full circle grid.

    The two expansions a/lam' and -ab/lbar' live in complementary
    degree ranges, so a single projection splits them:
    a = lam' [m]_{<=0}, ab = -lbar' [m]_{>=1}.
    """
    m = len(mu_values)
    half = m // 2
    full = la.grid_to_series(mu_values, -half, half - 1)
    a = pt.lam_p * full.project("leq", 0)
    ab = pt.lbar_p.scale(-1.0) * full.project("geq", 1)
    return Tangent(a.project("leq", 0), ab.project("geq", -1))


def semisimplicity_residual(pt: Point, x: Tangent, y: Tangent, m: int = 256) -> float:
    """max_p |<du(p), x . y> - <du(p), x><du(p), y>|."""
    p = la.unit_roots(m)
    cx = du_pair(pt, p, x)
    cy = du_pair(pt, p, y)
    cxy = du_pair(pt, p, tan_mul(pt, x, y))
    return float(np.max(np.abs(cxy - cx * cy)))


def metric_diagonality_residual(pt: Point, x: Tangent, y: Tangent, m: int = 512) -> complex:
    """<x, y> - (1/2 pi i) contour of <du(p),x><du(p),y>/f(p) dp."""
    from .manifold import metric_tangent

    data = canonical_data(pt, m)
    cx = du_pair(pt, data.p, x)
    cy = du_pair(pt, data.p, y)
    witness = la.contour_mean(cx * cy / data.f)
    return metric_tangent(pt, x, y) - witness


def char_velocities(pt: Point, flow, m: int | None = None) -> np.ndarray:
    """Characteristic velocities on the circle grid for one flow.

    flow is ("t", i), "u", ("s", n) or ("sbar", n).  The Lax-sector
    velocities carry no 1/n: they are z d/dz of the Lax generators
    (lam^n)_{>=0} and (lbar^n)_{<0}, matching the flows themselves.
    """
    m = m or max(pt.quad_m(8), 256)
    p = la.unit_roots(m)
    if flow == "u":
        return pt.ubarm1 / p
    if flow == "v":
        return np.ones(m, dtype=complex)
    kind, n = flow
    if kind == "t":
        lp = pt.lam_p.evaluate(p)
        bp = pt.lbar_p.evaluate(p)
        sigma = lp / (lp + bp)
        f = pt.w_pow(n) * pt.w_p
        plus = f.project("geq", 0).evaluate(p)
        minus = f.project("leq", -1).evaluate(p)
        return -p * (sigma * plus + (sigma - 1.0) * minus)
    if kind == "s":
        gen = _power(pt.lam, n).derivative().shift(1).project("geq", 0)
        return gen.evaluate(p)
    if kind == "sbar":
        gen = _power(pt.lbar, n).derivative().shift(1).project("leq", -1)
        return gen.evaluate(p)
    raise ValueError(f"unknown flow {flow!r}")


def _power(f: la.LaurentSeries, n: int) -> la.LaurentSeries:
    out = la.LaurentSeries.one()
    for _ in range(n):
        out = out * f
    return out
