"""Frobenius-manifold structure of the dispersionless 2D Toda hierarchy.

Banded Laurent series with certified circle arithmetic, the manifold of
symbol pairs (lam, lbar) with its flat and intersection metrics, flat
and canonical coordinates, the WDVV potential, the loop-space Poisson
pencil with its commuting flows, and a command line for running the
identity suites.
"""
from __future__ import annotations

from .laurent import LaurentSeries
from .manifold import Cotangent, Point, Tangent

__version__ = "0.1.0"

__all__ = ["LaurentSeries", "Point", "Tangent", "Cotangent", "__version__"]
