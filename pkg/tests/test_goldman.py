"""Goldman pairing oracles."""

import numpy as np
import pytest

from todaflat.geometry.grid import GridChart
from todaflat.geometry.metric import fuchsian_flat, metric_from_lambda_w
from todaflat.goldman import (
    PreconditionError,
    fiber_pairing_closed_form,
    lagrangian_check,
    nu_delta,
    pairing,
    variation_cartan,
    variation_g1,
    variation_q1,
    variation_q2,
)
from todaflat.lie import (
    build_chevalley_basis,
    build_root_system,
    principal_triple,
    toda_coefficients,
)
from todaflat.toda import real_locus_q2bar

ALL = [("A", 1), ("A", 2), ("C", 2), ("G", 2)]

# [DERIVED] adjoint trace form values nu(x_delta, x_{-delta}) per type,
# measured once from the exact structure constants and locked
NU_DELTA = {("A", 1): -4.0, ("A", 2): -6.0, ("C", 2): -6.0, ("G", 2): -8.0}


def _stack(typ, rank):
    rs = build_root_system(typ, rank)
    cb = build_chevalley_basis(rs)
    pt = principal_triple(cb)
    td = toda_coefficients(cb, pt)
    return rs, cb, pt, td


@pytest.mark.parametrize("typ,rank", ALL)
def test_nu_delta_values(typ, rank):
    rs, cb, pt, td = _stack(typ, rank)
    assert nu_delta(cb) == NU_DELTA[(typ, rank)]


@pytest.mark.parametrize("typ,rank", ALL)
def test_antisymmetry(typ, rank):
    # [TRIVIAL] omega(A, B) = -omega(B, A)
    rs, cb, pt, td = _stack(typ, rank)
    N = 16
    ch = GridChart(N)
    rng = np.random.default_rng(5)
    f = rng.standard_normal((rank, N, N)) + 1j * rng.standard_normal((rank, N, N))
    g = rng.standard_normal((rank, N, N)) + 1j * rng.standard_normal((rank, N, N))
    va = variation_cartan(cb, f, side="z")
    vb = variation_cartan(cb, g, side="zbar")
    ab = pairing(va, vb, ch).value
    ba = pairing(vb, va, ch).value
    assert abs(ab + ba) < 1e-12 * max(1.0, abs(ab))


@pytest.mark.parametrize("typ,rank", ALL)
def test_fiber_pairing_closed_form(typ, rank):
    # [DERIVED] pairing of the two fiber directions matches the closed form
    rs, cb, pt, td = _stack(typ, rank)
    N = 32
    ch = GridChart(N)
    X, Y = ch.nodes()
    lam = np.exp(0.3 * np.sin(2 * np.pi * X) + 1.0)
    met = fuchsian_flat(ch, lam)
    q1dot = np.exp(2j * np.pi * X) + 0.3 * np.cos(2 * np.pi * Y)
    q2dot = 0.7 * np.exp(-2j * np.pi * Y) + 0.2
    scale = td.invariant_form_scale
    got = pairing(variation_q1(cb, q1dot),
                  variation_q2(cb, td, q2dot, met), ch, scale).value
    want = fiber_pairing_closed_form(cb, td, q1dot, q2dot, met, scale)
    assert abs(got - want) < 1e-10 * max(1.0, abs(want))


def test_closed_form_requires_fuchsian():
    # [TRIVIAL] precondition mu = 0 is enforced
    rs, cb, pt, td = _stack("A", 2)
    ch = GridChart(16)
    met = metric_from_lambda_w(ch, 2.0, w_linear=(0.2, 0.0))
    q = np.ones((16, 16), dtype=complex)
    with pytest.raises(PreconditionError):
        fiber_pairing_closed_form(cb, td, q, q, met)


@pytest.mark.parametrize("typ,rank", ALL)
def test_lagrangian_same_side_vanishes(typ, rank):
    # [DERIVED] same-side variations have identically zero pairing density
    rs, cb, pt, td = _stack(typ, rank)
    N = 16
    rng = np.random.default_rng(6)
    f = rng.standard_normal((rank, N, N)) + 1j * rng.standard_normal((rank, N, N))
    g = rng.standard_normal((rank, N, N)) + 1j * rng.standard_normal((rank, N, N))
    assert lagrangian_check(variation_cartan(cb, f, side="z"),
                            variation_g1(cb, g, side="zbar")) == 0.0
    assert lagrangian_check(variation_cartan(cb, f, side="zbar"),
                            variation_g1(cb, g, side="z")) == 0.0
    # mixed fiber directions do pair (non-vacuity)
    ch = GridChart(N)
    met = fuchsian_flat(ch, 2.0)
    q = np.ones((N, N), dtype=complex)
    assert lagrangian_check(variation_q1(cb, q),
                            variation_q2(cb, td, q, met)) > 0.1


@pytest.mark.parametrize("typ,rank", ALL)
def test_fiber_quadratic_form_definite(typ, rank):
    # [DERIVED] -2i omega(qdot, real-locus partner) is real and negative
    rs, cb, pt, td = _stack(typ, rank)
    N = 24
    ch = GridChart(N)
    met = fuchsian_flat(ch, 2.0)
    rng = np.random.default_rng(7)
    for _ in range(5):
        qd = rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))
        partner = real_locus_q2bar(td, qd)
        val = -2j * pairing(variation_q1(cb, qd),
                            variation_q2(cb, td, partner, met), ch,
                            td.invariant_form_scale).value
        assert abs(val.imag) < 1e-10 * abs(val)
        assert val.real < 0
