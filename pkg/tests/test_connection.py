"""Connection assembly, curvature, and holonomy oracles."""

import numpy as np
import pytest
from scipy.linalg import expm

from todaflat.connection import (
    ConnectionForm,
    assemble_connection,
    curvature,
    curvature_sup_norm,
    holonomy,
    loop_path,
    trace_invariants,
)
from todaflat.geometry.grid import GridChart
from todaflat.geometry.metric import fuchsian_flat, metric_from_lambda_w
from todaflat.lie import (
    build_chevalley_basis,
    build_root_system,
    defining_representation,
    principal_triple,
    toda_coefficients,
)
from todaflat.toda import make_problem, newton_solve

ALL = [("A", 1), ("A", 2), ("C", 2), ("G", 2)]


def _stack(typ, rank):
    rs = build_root_system(typ, rank)
    cb = build_chevalley_basis(rs)
    pt = principal_triple(cb)
    td = toda_coefficients(cb, pt)
    return rs, cb, pt, td


def _trig_lambda(chart):
    X, Y = chart.nodes()
    return np.exp(0.3 * np.sin(2 * np.pi * X)
                  + 0.2 * np.cos(2 * np.pi * (X + Y)) + 1.0)


@pytest.mark.parametrize("typ,rank", ALL)
def test_flatness_constant_data(typ, rank):
    # [DERIVED] the connection at the constant Toda solution is flat to
    # machine precision (pure algebra, no discretization error)
    rs, cb, pt, td = _stack(typ, rank)
    ch = GridChart(16)
    met = fuchsian_flat(ch, 2.0)
    prob = make_problem(td, met, q1=0.3, q2bar=0.2, form="unreduced")
    sol = newton_solve(prob, tol=1e-12)
    conn = assemble_connection(cb, pt, prob, sol.u)
    assert curvature_sup_norm(conn) < 1e-12


@pytest.mark.parametrize("typ,rank", [("A", 2), ("G", 2)])
def test_flatness_curved_metric(typ, rank):
    # [DERIVED] curved metric + constant differentials: flat after solving
    rs, cb, pt, td = _stack(typ, rank)
    N = 32
    ch = GridChart(N)
    X, Y = ch.nodes()
    w_per = 0.01 * np.sin(2 * np.pi * Y) + 0.004j * np.cos(2 * np.pi * X)
    met = metric_from_lambda_w(ch, _trig_lambda(ch), w_per=w_per)
    prob = make_problem(td, met, q1=0.1, q2bar=0.05, form="unreduced")
    sol = newton_solve(prob, tol=1e-11)
    assert sol.converged
    conn = assemble_connection(cb, pt, prob, sol.u)
    assert curvature_sup_norm(conn) < 1e-9


def test_wrong_convention_not_flat():
    # [DERIVED] the flatness oracle rejects the absolute-value convention
    rs, cb, pt, td = _stack("A", 2)
    ch = GridChart(16)
    met = fuchsian_flat(ch, 2.0)
    prob = make_problem(td, met, q1=0.3, q2bar=0.2, form="unreduced",
                        a_convention="abs-offdiag")
    sol = newton_solve(prob, tol=1e-11)
    conn = assemble_connection(cb, pt, prob, sol.u)
    assert curvature_sup_norm(conn) > 1e-2


def test_basepoint_shapes():
    rs, cb, pt, td = _stack("A", 2)
    ch = GridChart(16)
    met = fuchsian_flat(ch, 2.0)
    prob = make_problem(td, met, q1=0.3, q2bar=0.2, form="unreduced")
    u = np.zeros((2, 16, 16), dtype=complex)
    a = assemble_connection(cb, pt, prob, u, basepoint_shape="(q,0)")
    b = assemble_connection(cb, pt, prob, u, basepoint_shape="(0,qbar)")
    idx_top = cb.x_index(rs.highest_root)
    idx_bot = cb.x_index(rs.neg(rs.highest_root))
    assert np.max(np.abs(a.A_z[idx_top])) > 0.1
    assert np.max(np.abs(b.A_z[idx_top])) == 0.0
    assert np.max(np.abs(b.A_zbar[idx_bot])) > 0.0
    with pytest.raises(ValueError):
        assemble_connection(cb, pt, prob, u, basepoint_shape="bogus")


def test_holonomy_zero_connection_identity():
    # [TRIVIAL] zero connection transports to the identity
    rs, cb, pt, td = _stack("A", 2)
    ch = GridChart(16)
    Z = np.zeros((cb.dim, 16, 16), dtype=complex)
    conn = ConnectionForm(basis=cb, chart=ch, A_z=Z, A_zbar=Z)
    hol = holonomy(conn, loop_path("x"), rep=defining_representation(cb))
    assert np.max(np.abs(hol.matrix - np.eye(3))) < 1e-12


def test_holonomy_constant_matches_expm():
    # [DERIVED] constant A_z on the x-loop gives exp(A_z zdot)
    rs, cb, pt, td = _stack("A", 2)
    ch = GridChart(16)
    rho = defining_representation(cb)
    rng = np.random.default_rng(4)
    c = 0.3 * (rng.standard_normal(cb.dim) + 1j * rng.standard_normal(cb.dim))
    Az = np.broadcast_to(c[:, None, None], (cb.dim, 16, 16)).astype(complex)
    Zb = np.zeros_like(Az)
    conn = ConnectionForm(basis=cb, chart=ch, A_z=Az, A_zbar=Zb)
    hol = holonomy(conn, loop_path("x"), rep=rho)
    M = np.einsum("k,kij->ij", c, rho)
    assert np.max(np.abs(hol.matrix - expm(M))) < 1e-9


def test_holonomy_invariants_flat_connection():
    # [DERIVED] for a flat connection: generators commute, traces are
    # basepoint-independent, determinant is 1, reversal inverts
    rs, cb, pt, td = _stack("A", 2)
    N = 32
    ch = GridChart(N)
    met = fuchsian_flat(ch, _trig_lambda(ch))
    prob = make_problem(td, met, q1=0.1, q2bar=0.05, form="unreduced")
    sol = newton_solve(prob, tol=1e-11)
    conn = assemble_connection(cb, pt, prob, sol.u)
    rho = defining_representation(cb)
    hx = holonomy(conn, loop_path("x"), rep=rho)
    hy = holonomy(conn, loop_path("y"), rep=rho)
    assert np.max(np.abs(hx.matrix @ hy.matrix - hy.matrix @ hx.matrix)) < 1e-7
    assert abs(hx.determinant - 1.0) < 1e-8
    hx2 = holonomy(conn, loop_path("x", base=(0.25, 0.4)), rep=rho)
    assert abs(hx.trace - hx2.trace) < 1e-7
    rev = holonomy(conn, [(1.0, 0.0), (0.0, 0.0)], rep=rho)
    assert np.max(np.abs(rev.matrix @ hx.matrix - np.eye(3))) < 1e-7
    inv = trace_invariants(hx)
    assert inv.shape == (2,)
    assert abs(inv[0] - hx.trace) < 1e-12
