"""Acceptance gate: the ten primary criteria at their stated sizes.

Each test prints one pass/fail line with the measured residuals against
the stated tolerances, then asserts.
"""
from __future__ import annotations

import todafrob.verify as vf


def _emit(num: int, label: str, parts) -> None:
    ok = all(p.passed for p in parts)
    detail = "  ".join(
        f"{p.name}={p.max_residual:.3e}/{p.tolerance:.1e}" for p in parts
    )
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {num} ({label}): {detail}")
    for p in parts:
        assert p.passed, p.line()


def test_criterion_01_gram_constancy():
    _emit(1, "Gram constancy at 20 points, N=24, |k|<=6",
          [vf.suite_gram(42, points=20, n=24, kmax=6)])


def test_criterion_02_frobenius_axioms():
    _emit(2, "Frobenius axioms on 50 samples",
          [vf.suite_frobenius(42, samples=50)])


def test_criterion_03_potential_consistency():
    _emit(3, "potential consistency", [
        vf.suite_potential(42, points=5, triples=10),
        vf.suite_potential_fd(42),
        vf.suite_quasihomogeneity(42, points=4),
    ])


def test_criterion_04_multiplication_tables():
    _emit(4, "closed-form multiplication tables, |i|,|j|<=5",
          [vf.suite_tables(kmax=5)])


def test_criterion_05_intersection_form():
    _emit(5, "intersection form on 30 samples",
          [vf.suite_intersection(42, samples=30)])


def test_criterion_06_semisimplicity():
    _emit(6, "semisimple factorization and Euler evaluation", [
        vf.suite_semisimplicity(42, samples=8),
        vf.suite_canonical(42, points=4),
    ])


def test_criterion_07_chart_roundtrips():
    _emit(7, "flat chart round-trips", [vf.suite_charts(42, points=4)])


def test_criterion_08_hierarchy():
    _emit(8, "hierarchy: pencil, recursion, conservation, commutators", [
        vf.suite_poisson(42),
        vf.suite_hierarchy(42, T=0.1, h=1e-3),
        vf.suite_commutators(42),
    ])


def test_criterion_09_riemann_transport():
    res, printed = vf.suite_transport(42)
    print(f"    cross-check: n-divided printed velocity residual "
          f"{printed:.3e} vs corrected {res.max_residual:.3e}")
    _emit(9, "Riemann-invariant transport", [res])


def test_criterion_10_numerical_kernel():
    _emit(10, "RK4 order, residue adjointness, certificates", [
        vf.suite_rk4(42),
        vf.suite_kernel_adjoint(42, trials=60),
        vf.suite_certificates(42, trials=12),
    ])
