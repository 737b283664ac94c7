"""Grid, metric, and operator oracles."""

import numpy as np
import pytest

from todaflat.geometry.grid import BackendError, GridChart, PatchChart
from todaflat.geometry.metric import (
    ComplexMetricField,
    DegenerateChartError,
    DegenerateMetricError,
    bers_from_quadratic_perturbation,
    fuchsian_flat,
    metric_from_lambda_w,
    poincare_patch_metric,
)
from todaflat.geometry.operators import (
    bers_laplacian_apply,
    dbar_del_two_form,
    del_J,
    delbar_J,
    directional_D,
    gauss_curvature_defect,
    project_forms,
)


def _trig(chart, seed=0):
    X, Y = chart.nodes()
    return np.exp(np.sin(2 * np.pi * X) + 0.5 * np.cos(2 * np.pi * Y))


def test_spectral_derivative_exact_on_modes():
    # [DERIVED] spectral differentiation is exact on resolved Fourier modes
    ch = GridChart(16)
    X, Y = ch.nodes()
    f = np.exp(2j * np.pi * (3 * X - 2 * Y))
    assert np.max(np.abs(ch.dx(f) - 6j * np.pi * f)) < 1e-10
    assert np.max(np.abs(ch.dy(f) + 4j * np.pi * f)) < 1e-10


def test_dz_dzbar_on_modes():
    # [DERIVED] dz e^{2 pi i (kx+ly)} = pi i (k - i l) e^{...};
    # dzbar gives pi i (k + i l)
    ch = GridChart(32)
    X, Y = ch.nodes()
    k, l = 3, -2
    f = np.exp(2j * np.pi * (k * X + l * Y))
    assert np.max(np.abs(ch.dz(f) - 1j * np.pi * (k - 1j * l) * f)) < 1e-10
    assert np.max(np.abs(ch.dzbar(f) - 1j * np.pi * (k + 1j * l) * f)) < 1e-10


def test_fd4_order():
    # [DERIVED] fd4 backend converges at 4th order against spectral truth
    errs = []
    for N in (16, 32):
        fd, sp = GridChart(N, backend="fd4"), GridChart(N)
        X, Y = fd.nodes()
        f = np.exp(np.sin(2 * np.pi * X) + 0.3 * np.cos(2 * np.pi * (X + Y)))
        errs.append(float(np.max(np.abs(fd.dx(f) - sp.dx(f)))))
    assert errs[0] / errs[1] > 10


def test_antiderivative_inverts_dz():
    # [TRIVIAL] dz(antiderivative(f)) = f for mean-zero f
    ch = GridChart(16)
    X, Y = ch.nodes()
    f = np.exp(2j * np.pi * (2 * X + Y)) + 0.3 * np.exp(-2j * np.pi * X)
    g = ch.antiderivative_z(f)
    assert np.max(np.abs(ch.dz(g) - f)) < 1e-10


def test_grid_validation():
    with pytest.raises(ValueError):
        GridChart(7)
    with pytest.raises(BackendError):
        GridChart(16, backend="fd2")


def test_metric_validation():
    ch = GridChart(16)
    N = ch.N
    with pytest.raises(DegenerateMetricError):
        ComplexMetricField(chart=ch, lam=np.zeros((N, N)),
                          p=np.zeros((N, N)), s=np.ones((N, N)))
    with pytest.raises(DegenerateChartError):
        ComplexMetricField(chart=ch, lam=np.ones((N, N)),
                          p=np.zeros((N, N)), s=np.zeros((N, N)))
    with pytest.raises(DegenerateMetricError):
        # |mu| = |p/s| >= 1
        ComplexMetricField(chart=ch, lam=np.ones((N, N)),
                          p=np.ones((N, N)), s=np.ones((N, N)))


def test_poincare_patch_curvature():
    # [DERIVED] (1/2) Delta_h log lam = 1 on the hyperbolic disk metric
    chart = PatchChart(64)
    met = poincare_patch_metric(chart)
    mask = chart.interior_mask(4)
    defect = np.max(np.abs(gauss_curvature_defect(met)[mask]))
    assert defect < 1e-6


def test_flat_metric_zero_defect_shifted():
    # [DERIVED] constant-lambda metric has Delta_h log lam = 0, defect -1...
    # the defect field equals -1 exactly for constant lambda
    ch = GridChart(16)
    met = fuchsian_flat(ch, 2.0)
    assert np.max(np.abs(gauss_curvature_defect(met) + 1.0)) < 1e-14


def test_laplacian_identity():
    # [DERIVED] dbar_J del_J two-form equals -(lam s / 4) Delta_h f
    ch = GridChart(32)
    lam = _trig(ch)
    met = fuchsian_flat(ch, lam)
    X, Y = ch.nodes()
    f = np.sin(2 * np.pi * X) * np.cos(2 * np.pi * Y)
    lhs = dbar_del_two_form(met, f)
    rhs = -(met.lam * met.s / 4.0) * bers_laplacian_apply(met, f)
    assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_projections_resolve_identity():
    # [TRIVIAL] Pi1 + Pi2 reproduces the form coefficients
    ch = GridChart(16)
    met = metric_from_lambda_w(ch, _trig(ch), w_linear=(0.1 + 0.05j, 0.02))
    X, Y = ch.nodes()
    omega = (np.exp(2j * np.pi * X), np.cos(2 * np.pi * Y) + 0j)
    (p1z, p1zb), (p2z, p2zb) = project_forms(met, omega)
    assert np.max(np.abs(p1z + p2z - omega[0])) < 1e-12
    assert np.max(np.abs(p1zb + p2zb - omega[1])) < 1e-12


def test_del_ops_against_directional():
    ch = GridChart(16)
    met = metric_from_lambda_w(ch, _trig(ch), w_linear=(0.1, 0.0))
    X, Y = ch.nodes()
    f = np.exp(2j * np.pi * X)
    dz_leg, dzb_leg = del_J(met, f)
    assert np.max(np.abs(dz_leg - directional_D(met, f))) < 1e-12
    assert np.max(np.abs(dzb_leg)) == 0
    dzl, dzbl = delbar_J(met, f)
    assert np.max(np.abs(dzbl - ch.dzbar(f))) < 1e-12


def test_perturbation_construction_exact():
    # [DERIVED] the quadratic perturbation satisfies lam*p = phi0 and
    # lam*s = lam0 identically (machine exact by construction)
    ch = GridChart(32)
    X, Y = ch.nodes()
    lam0 = np.exp(0.3 * np.sin(2 * np.pi * X) + 1.0)
    phi0 = 0.2 * np.exp(2j * np.pi * Y) + 0.1
    met = bers_from_quadratic_perturbation(ch, lam0, phi0)
    assert np.max(np.abs(met.lam * met.p - phi0)) < 1e-12
    assert np.max(np.abs(met.lam * met.s - lam0)) < 1e-12
    # integrability: the reconstructed w map has dz/dzbar consistent
    assert np.max(np.abs(ch.dzbar(met.p) - ch.dz(met.s))) < 1e-10
