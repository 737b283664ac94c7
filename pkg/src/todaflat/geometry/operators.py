"""Bers Laplacian, bi-complex projections, del_J / delbar_J, curvature defect.

Conventions (pinned by oracles in the test suite):

- Delta_h f = (4 / (lam s)) dzbar( dz f - m dzbar f ), which gives
  Delta_h log lam = +2 on hyperbolic-disc data and Delta f = 4 dzbar dz f
  on the flat chart.
- One-forms are pairs (P, Q) meaning P dz + Q dzbar.
- Projections: Pi1(P dz + Q dzbar) = (P - m Q) dz;  Pi2 = Q (m dz + dzbar).
- del_J f = (dz f - m dzbar f) dz;  delbar_J f = dzbar f (m dz + dzbar).
- Two-forms carry a single coefficient with respect to dz wedge dzbar;
  dz wedge dzbar = -2i dx wedge dy.
"""

from __future__ import annotations

import numpy as np

from .metric import ComplexMetricField


def directional_D(metric: ComplexMetricField, f: np.ndarray) -> np.ndarray:
    """D f = dz f - m dzbar f (the coefficient of dz in del_J f)."""
    ch = metric.chart
    return ch.dz(f) - metric.m * ch.dzbar(f)


def bers_laplacian_apply(metric: ComplexMetricField, f: np.ndarray) -> np.ndarray:
    ch = metric.chart
    inner = ch.dz(f) - metric.m * ch.dzbar(f)
    return (4.0 / (metric.lam * metric.s)) * ch.dzbar(inner)


def project_forms(metric: ComplexMetricField, omega):
    """Split P dz + Q dzbar into (Pi1 omega, Pi2 omega); both as (P, Q) pairs."""
    P, Q = omega
    m = metric.m
    pi1 = (P - m * Q, np.zeros_like(Q))
    pi2 = (m * Q, Q)
    return pi1, pi2


def del_J(metric: ComplexMetricField, f: np.ndarray):
    D = directional_D(metric, f)
    return (D, np.zeros_like(D))


def delbar_J(metric: ComplexMetricField, f: np.ndarray):
    q = metric.chart.dzbar(f)
    return (metric.m * q, q)


def del_ops(metric: ComplexMetricField, f: np.ndarray):
    return del_J(metric, f), delbar_J(metric, f)


def dbar_del_two_form(metric: ComplexMetricField, f: np.ndarray) -> np.ndarray:
    """Coefficient of dz wedge dzbar in delbar_J del_J f.

    For omega = del_J f = D f dz, the exterior derivative is
    d(D f dz) = -dzbar(D f) dz wedge dzbar, and its Pi2 projection is the
    whole (2,0)-free part on a surface.  The Laplace identity states this
    equals (i/2) Delta_h f dA_h, i.e. -(lam s / 4) Delta_h f dz wedge dzbar.
    """
    D = directional_D(metric, f)
    return -metric.chart.dzbar(D)


def gauss_curvature_defect(metric: ComplexMetricField) -> np.ndarray:
    """(1/2) Delta_h log lam - 1; zero iff the curvature identity holds."""
    return 0.5 * bers_laplacian_apply(metric, np.log(metric.lam)) - 1.0
