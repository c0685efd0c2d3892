"""Banded Laurent series on an annulus around the unit circle.

Coefficients are complex doubles indexed by integer degree.  Ring
operations (add, multiply, project, differentiate) keep exact bands.
Truncation enters only through the circle-grid routines (division,
reciprocal, logarithm): those sample on a uniform grid of roots of
unity, reconstruct coefficients by FFT, and certify both the discarded
tail and the residual of the defining equation before returning.
"""

from __future__ import annotations

import json
import math
from functools import lru_cache

import numpy as np

DEFAULT_TAIL_TOL = 1e-12
CERT_RESIDUAL_TOL = 1e-11


class BandTooWide(ValueError):
    """Requested band does not fit on the sampling grid."""


class ZeroOnCircle(ArithmeticError):
    """Divisor vanishes (to working precision) somewhere on the circle."""


class TruncationLoss(ArithmeticError):
    """Discarded tail or defining-equation residual exceeds tolerance."""


class WindingNonzero(ArithmeticError):
    """Logarithm requested for a function of nonzero winding number."""


class WindingUnresolved(ArithmeticError):
    """Phase steps too large to unwrap reliably on this grid."""


class SingularAtZero(ArithmeticError):
    """Taylor reciprocal requested for a series not invertible at z=0."""


class GridMismatch(ValueError):
    """Operands sampled on incompatible grids."""


class LaurentSeries:
    """Finite band of complex coefficients c[d] for lo <= d <= hi.

    Normal form trims exact zeros at both ends; the zero series has an
    empty coefficient array.  Instances are treated as immutable.
    """

    __slots__ = ("lo", "c")

    def __init__(self, lo: int, coeffs) -> None:
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim != 1:
            raise ValueError("coefficients must be one-dimensional")
        nz = np.nonzero(c)[0]
        if len(nz) == 0:
            self.lo = 0
            self.c = np.zeros(0, dtype=complex)
        else:
            a, b = nz[0], nz[-1] + 1
            self.lo = int(lo) + int(a)
            self.c = c[a:b].copy()

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "LaurentSeries":
        return LaurentSeries(0, [])

    @staticmethod
    def one() -> "LaurentSeries":
        return LaurentSeries(0, [1.0])

    @staticmethod
    def monomial(deg: int, coeff: complex = 1.0) -> "LaurentSeries":
        return LaurentSeries(deg, [coeff])

    # -- basic queries ------------------------------------------------

    @property
    def hi(self) -> int:
        return self.lo + len(self.c) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.c) == 0

    def coeff(self, d: int) -> complex:
        if self.is_zero or d < self.lo or d > self.hi:
            return 0.0 + 0.0j
        return complex(self.c[d - self.lo])

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Coefficients on [lo, hi] as a dense array (zero padded)."""
        out = np.zeros(hi - lo + 1, dtype=complex)
        if not self.is_zero:
            a = max(self.lo, lo)
            b = min(self.hi, hi)
            if a <= b:
                out[a - lo : b - lo + 1] = self.c[a - self.lo : b - self.lo + 1]
        return out

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.c))) if len(self.c) else 0.0

    def __repr__(self) -> str:
        if self.is_zero:
            return "LaurentSeries(0)"
        return f"LaurentSeries(lo={self.lo}, hi={self.hi})"

    # -- ring operations (exact bands) ---------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        lo = min(self.lo, other.lo)
        hi = max(self.hi, other.hi)
        out = self.window(lo, hi)
        out += other.window(lo, hi)
        return LaurentSeries(lo, out)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.lo, -self.c)

    def scale(self, a: complex) -> "LaurentSeries":
        return LaurentSeries(self.lo, a * self.c)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            if self.is_zero or other.is_zero:
                return LaurentSeries.zero()
            return LaurentSeries(self.lo + other.lo, np.convolve(self.c, other.c))
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by z**k."""
        return LaurentSeries(self.lo + k, self.c)

    def project(self, kind: str, k: int) -> "LaurentSeries":
        """Keep degrees >= k ("geq") or <= k ("leq")."""
        if self.is_zero:
            return self
        if kind == "geq":
            if self.lo >= k:
                return self
            if self.hi < k:
                return LaurentSeries.zero()
            return LaurentSeries(k, self.c[k - self.lo :])
        if kind == "leq":
            if self.hi <= k:
                return self
            if self.lo > k:
                return LaurentSeries.zero()
            return LaurentSeries(self.lo, self.c[: k - self.lo + 1])
        raise ValueError(f"unknown projection kind {kind!r}")

    def restrict(self, lo: int, hi: int) -> "LaurentSeries":
        return LaurentSeries(lo, self.window(lo, hi))

    def derivative(self) -> "LaurentSeries":
        """d/dz: degree d coefficient contributes d*c[d] at degree d-1."""
        if self.is_zero:
            return self
        degs = np.arange(self.lo, self.hi + 1)
        return LaurentSeries(self.lo - 1, degs * self.c)

    def z_derivative(self) -> "LaurentSeries":
        """z d/dz: multiplies the degree-d coefficient by d."""
        if self.is_zero:
            return self
        degs = np.arange(self.lo, self.hi + 1)
        return LaurentSeries(self.lo, degs * self.c)

    def residue(self) -> complex:
        """Coefficient extraction form of (1/2 pi i) contour integral."""
        return self.coeff(-1)

    def evaluate(self, z) -> np.ndarray:
        """Evaluate at arbitrary nonzero complex points."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        if self.is_zero:
            return out
        # Horner on the polynomial part, then shift by z**lo.
        for ck in self.c[::-1]:
            out = out * z + ck
        return out * z**self.lo


def pi_op(f: LaurentSeries) -> LaurentSeries:
    """Projection difference (f)_{>=0} - (f)_{<=-1}."""
    return f.project("geq", 0) - f.project("leq", -1)


def almost_equal(f: LaurentSeries, g: LaurentSeries, tol: float) -> bool:
    return series_dist(f, g) <= tol


def series_dist(f: LaurentSeries, g: LaurentSeries) -> float:
    d = f - g
    return d.max_abs()


# -- circle grid ------------------------------------------------------


@lru_cache(maxsize=32)
def unit_roots(m: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(m) / m)


def default_grid_size(width: int) -> int:
    """Smallest power of two exceeding 4*(width + 8)."""
    m = 2
    while m <= 4 * (width + 8):
        m *= 2
    return m


def grid_eval(f: LaurentSeries, m: int) -> np.ndarray:
    """Values at the m-th roots of unity.  Exact for any m (degrees fold
    mod m before the inverse FFT, which is the identity they satisfy on
    the grid)."""
    folded = np.zeros(m, dtype=complex)
    if not f.is_zero:
        degs = np.arange(f.lo, f.hi + 1)
        np.add.at(folded, degs % m, f.c)
    return m * np.fft.ifft(folded)


def grid_to_series(values: np.ndarray, lo: int, hi: int) -> LaurentSeries:
    """Recover coefficients on [lo, hi] from values at len(values) roots
    of unity.  Exact when the function is supported on the band; degrees
    outside it alias onto the band mod m."""
    values = np.asarray(values, dtype=complex)
    m = len(values)
    if m <= hi - lo:
        raise BandTooWide(f"band [{lo},{hi}] needs more than {m} samples")
    chat = np.fft.fft(values) / m
    degs = np.arange(lo, hi + 1)
    return LaurentSeries(lo, chat[degs % m])


# -- certified circle operations --------------------------------------


def _recovery_window(lo: int, hi: int, m: int) -> tuple[int, int]:
    """Window of m consecutive degrees centered on [lo, hi]."""
    center = (lo + hi) // 2
    wlo = center - m // 2
    return wlo, wlo + m - 1


def _certify(full: LaurentSeries, lo: int, hi: int, tail_tol: float) -> LaurentSeries:
    gmax = full.max_abs()
    out = full.restrict(lo, hi)
    tail = max(
        full.project("leq", lo - 1).max_abs(),
        full.project("geq", hi + 1).max_abs(),
    )
    if tail > tail_tol * max(gmax, 1e-300):
        raise TruncationLoss(
            f"tail {tail:.3e} exceeds {tail_tol:.1e} * max-coefficient on [{lo},{hi}]"
        )
    return out


def divide_on_circle(
    num: LaurentSeries,
    den: LaurentSeries,
    lo: int,
    hi: int,
    tail_tol: float = DEFAULT_TAIL_TOL,
    grid_size: int | None = None,
) -> LaurentSeries:
    """Certified num/den on the band [lo, hi].

    Samples both operands on the grid, divides pointwise, reconstructs
    on a window of full grid length, and checks that everything dropped
    outside [lo, hi] sits below tail_tol relative to the largest
    recovered coefficient.  The returned truncation is re-checked
    against the defining equation den*g = num on the grid.
    """
    m = grid_size or default_grid_size(hi - lo)
    den_vals = grid_eval(den, m)
    dmax = float(np.max(np.abs(den_vals)))
    if dmax == 0.0 or float(np.min(np.abs(den_vals))) <= 1e-10 * dmax:
        raise ZeroOnCircle("divisor vanishes on the unit circle")
    num_vals = grid_eval(num, m)
    wlo, whi = _recovery_window(lo, hi, m)
    full = grid_to_series(num_vals / den_vals, wlo, whi)
    g = _certify(full, lo, hi, tail_tol)
    resid = np.max(np.abs(grid_eval(g, m) * den_vals - num_vals))
    scale = max(float(np.max(np.abs(num_vals))), dmax * max(g.max_abs(), 1.0))
    if resid > CERT_RESIDUAL_TOL * scale:
        raise TruncationLoss(f"division residual {resid:.3e} not certified on [{lo},{hi}]")
    return g


def reciprocal_on_circle(
    f: LaurentSeries,
    lo: int,
    hi: int,
    tail_tol: float = DEFAULT_TAIL_TOL,
    grid_size: int | None = None,
) -> LaurentSeries:
    """Certified 1/f on the band [lo, hi]."""
    return divide_on_circle(LaurentSeries.one(), f, lo, hi, tail_tol, grid_size)


def unwrap_on_circle(values: np.ndarray) -> tuple[np.ndarray, int]:
    """Continuous phases along the circle and the winding number.

    Raises WindingUnresolved when any step between adjacent samples
    exceeds pi/2, i.e. when the grid is too coarse to track the phase.
    """
    values = np.asarray(values, dtype=complex)
    if np.min(np.abs(values)) == 0.0:
        raise ZeroOnCircle("cannot unwrap a phase through zero")
    steps = np.angle(np.roll(values, -1) / values)
    if np.max(np.abs(steps)) > np.pi / 2:
        raise WindingUnresolved("phase step above pi/2 between adjacent samples")
    winding = int(round(float(np.sum(steps)) / (2 * np.pi)))
    phases = np.angle(values[0]) + np.concatenate(([0.0], np.cumsum(steps[:-1])))
    return phases, winding


def circle_winding(values: np.ndarray) -> int:
    return unwrap_on_circle(values)[1]


def log_values_on_circle(values: np.ndarray) -> np.ndarray:
    """Pointwise log with a globally consistent winding-zero branch.

    Principal branch at the first node, continued by unwrapping; raises
    WindingNonzero if the values wind around the origin.
    """
    phases, winding = unwrap_on_circle(values)
    if winding != 0:
        raise WindingNonzero(f"winding {winding} != 0, no single-valued logarithm")
    return np.log(np.abs(values)) + 1j * phases


def log_on_circle(
    f: LaurentSeries,
    lo: int,
    hi: int,
    tail_tol: float = DEFAULT_TAIL_TOL,
    grid_size: int | None = None,
) -> LaurentSeries:
    """Certified log f on [lo, hi] for winding-zero f.

    The branch is the principal logarithm at the first grid node,
    continued around the circle by unwrapped phases.
    """
    m = grid_size or default_grid_size(hi - lo)
    vals = grid_eval(f, m)
    fmax = float(np.max(np.abs(vals)))
    if fmax == 0.0 or float(np.min(np.abs(vals))) <= 1e-10 * fmax:
        raise ZeroOnCircle("logarithm of a function vanishing on the circle")
    phases, winding = unwrap_on_circle(vals)
    if winding != 0:
        raise WindingNonzero(f"winding {winding} != 0, no single-valued logarithm")
    log_vals = np.log(np.abs(vals)) + 1j * phases
    wlo, whi = _recovery_window(lo, hi, m)
    full = grid_to_series(log_vals, wlo, whi)
    g = _certify(full, lo, hi, tail_tol)
    resid = np.max(np.abs(np.exp(grid_eval(g, m)) - vals))
    if resid > CERT_RESIDUAL_TOL * fmax:
        raise TruncationLoss(f"log residual {resid:.3e} not certified on [{lo},{hi}]")
    return g


def taylor_reciprocal_at_zero(f: LaurentSeries, order: int) -> LaurentSeries:
    """Taylor expansion of 1/f at z=0 through degree `order`.

    Requires f regular at 0 with f(0) != 0; exact long-division
    recurrence, no sampling involved.
    """
    if f.is_zero or f.lo < 0:
        raise SingularAtZero("reciprocal at z=0 needs a regular nonvanishing germ")
    c0 = f.coeff(0)
    if abs(c0) < 1e-300:
        raise SingularAtZero("series vanishes at z=0")
    a = f.window(0, order)
    g = np.zeros(order + 1, dtype=complex)
    g[0] = 1.0 / c0
    for n in range(1, order + 1):
        g[n] = -np.dot(a[1 : n + 1], g[n - 1 :: -1]) / c0
    return LaurentSeries(0, g)


def contour_mean(values: np.ndarray, radius: float = 1.0) -> complex:
    """(1/2 pi i) * contour integral of f dz from samples on |z|=radius.

    Trapezoidal rule on a circle: exact for banded integrands once the
    grid resolves the band, exponentially accurate for analytic ones.
    """
    m = len(values)
    zs = radius * unit_roots(m)
    return complex(np.mean(values * zs))


# -- serialization ----------------------------------------------------


def to_json_dict(f: LaurentSeries) -> dict:
    return {
        "lo": int(f.lo) if not f.is_zero else 0,
        "re": [float(x) for x in np.real(f.c)],
        "im": [float(x) for x in np.imag(f.c)],
    }


def from_json_dict(d: dict) -> LaurentSeries:
    re = np.asarray(d["re"], dtype=float)
    im = np.asarray(d["im"], dtype=float)
    if len(re) != len(im):
        raise ValueError("re/im length mismatch")
    return LaurentSeries(int(d["lo"]), re + 1j * im)


def dumps(f: LaurentSeries) -> str:
    return json.dumps(to_json_dict(f), separators=(",", ":"))


def loads(s: str) -> LaurentSeries:
    return from_json_dict(json.loads(s))
