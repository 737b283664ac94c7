"""Bers-metric data h = lambda dz dwbar on a discretized chart.

The stored map `w` is the anti-holomorphic coordinate (the wbar of the second
complex structure expressed in the z chart); at the Fuchsian point w = zbar.
On a periodic chart w is represented as zbar plus a linear part plus a
periodic deviation, so its derivative fields

    p = dz w,    s = dzbar w,    m = p / s  (Beltrami-type quotient)

are grid fields.  Positivity of the metric requires |m| < 1 pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class DegenerateMetricError(ValueError):
    """Metric positivity (|m| < 1, lambda bounded away from 0) violated."""


class DegenerateChartError(ValueError):
    """Chart derivative s = dzbar w vanishes somewhere."""


_MU_LIMIT = 1.0 - 1e-9


@dataclass(frozen=True)
class ComplexMetricField:
    chart: object
    lam: np.ndarray          # coefficient of dz dwbar
    p: np.ndarray            # dz w
    s: np.ndarray            # dzbar w
    w_linear: tuple = (0.0 + 0.0j, 0.0 + 0.0j)  # (a, b): w = zbar + a z + b zbar + w_per
    w_per: np.ndarray = field(default=None)

    def __post_init__(self):
        mask = self.chart.interior_mask(2) if not self.chart.periodic else slice(None)
        lam = np.asarray(self.lam, dtype=complex)
        s = np.asarray(self.s, dtype=complex)
        p = np.asarray(self.p, dtype=complex)
        if np.min(np.abs(lam[mask])) < 1e-12:
            raise DegenerateMetricError("lambda not bounded away from 0")
        if np.min(np.abs(s[mask])) < 1e-9:
            raise DegenerateChartError("chart derivative dzbar(w) vanishes")
        if np.max(np.abs(p[mask] / s[mask])) >= _MU_LIMIT:
            raise DegenerateMetricError("|mu| >= 1: metric positivity violated")
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "s", s)
        if self.w_per is None:
            object.__setattr__(self, "w_per", np.zeros_like(lam))

    @property
    def m(self) -> np.ndarray:
        """The quotient dz(w) / dzbar(w); Beltrami-type, |m| < 1."""
        return self.p / self.s

    def w_values(self) -> np.ndarray:
        """The w map sampled at the grid nodes."""
        z = self.chart.z()
        a, b = self.w_linear
        return np.conj(z) + a * z + b * np.conj(z) + self.w_per

    @property
    def area_density(self) -> np.ndarray:
        """dA_h = lam * s dx dy (coefficient with respect to dx dy)."""
        return self.lam * self.s


def _const(chart, value) -> np.ndarray:
    return np.full((chart.N, chart.N), value, dtype=complex)


def fuchsian_flat(chart, lam=1.0) -> ComplexMetricField:
    """lam dz dzbar with constant (or given field) lam and w = zbar."""
    lam_field = _const(chart, lam) if np.isscalar(lam) else np.asarray(lam, dtype=complex)
    return ComplexMetricField(
        chart=chart,
        lam=lam_field,
        p=_const(chart, 0.0),
        s=_const(chart, 1.0),
    )


def poincare_patch_metric(chart) -> ComplexMetricField:
    """Hyperbolic-disc data lambda = 4 / (1 - |z|^2)^2 on a patch chart."""
    z = chart.z()
    r2 = np.abs(z) ** 2
    if np.max(r2) >= 1.0:
        raise DegenerateMetricError("patch leaves the unit disc")
    lam = 4.0 / (1.0 - r2) ** 2
    return ComplexMetricField(
        chart=chart,
        lam=lam.astype(complex),
        p=_const(chart, 0.0),
        s=_const(chart, 1.0),
    )


def metric_from_lambda_w(chart, lam, w_linear=(0.0, 0.0), w_per=None) -> ComplexMetricField:
    """Build the metric from lambda and the w map, differentiating w on the grid."""
    a, b = complex(w_linear[0]), complex(w_linear[1])
    if w_per is None:
        w_per = np.zeros((chart.N, chart.N), dtype=complex)
    p = a + chart.dz(w_per)
    s = 1.0 + b + chart.dzbar(w_per)
    lam_field = _const(chart, lam) if np.isscalar(lam) else np.asarray(lam, dtype=complex)
    return ComplexMetricField(
        chart=chart, lam=lam_field, p=p, s=s, w_linear=(a, b), w_per=w_per
    )


def bers_from_quadratic_perturbation(
    chart, lam0, phi0, tol: float = 1e-14, max_iter: int = 400
) -> ComplexMetricField:
    """Represent lam0 dz dzbar + phi0 dz^2 as lam dz dwbar.

    Solves for the w map from the pointwise relation lam dw = lam0 dzbar
    + phi0 dz (so p/s = phi0/lam0 and lam = lam0/s) with the integrability
    condition dz(s) = dzbar(p) enforced by a spectral fixed point for
    s = 1 + sigma.  Requires |phi0/lam0| < 1 pointwise.
    """
    lam0 = _const(chart, lam0) if np.isscalar(lam0) else np.asarray(lam0, dtype=complex)
    phi0 = _const(chart, phi0) if np.isscalar(phi0) else np.asarray(phi0, dtype=complex)
    g = phi0 / lam0
    if np.max(np.abs(g)) >= _MU_LIMIT:
        raise DegenerateMetricError("|phi0/lam0| >= 1: perturbation not admissible")
    if not chart.periodic:
        raise ValueError("perturbation construction requires a periodic chart")
    sigma = np.zeros_like(g)
    for _ in range(max_iter):
        rhs = chart.dzbar(g * (1.0 + sigma))
        new = chart.antiderivative_z(rhs)
        delta = np.max(np.abs(new - sigma))
        sigma = new
        if delta < tol:
            break
    else:
        raise DegenerateMetricError("integrability fixed point did not converge")
    s = 1.0 + sigma
    p = g * s
    # reconstruct the w map: w = zbar + a z + b zbar + w_per with
    # dz w_per = p - mean(p), dzbar w_per = sigma - mean(sigma)
    a = complex(np.mean(p))
    b = complex(np.mean(sigma))
    w_per = chart.antiderivative_z(p - a)
    return ComplexMetricField(
        chart=chart, lam=lam0 / s, p=p, s=s, w_linear=(a, b), w_per=w_per
    )
