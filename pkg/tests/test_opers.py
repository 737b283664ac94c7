"""Oper connection oracles."""

import numpy as np
import pytest

from todaflat.connection.assemble import ConnectionForm, assemble_connection
from todaflat.geometry.grid import GridChart
from todaflat.geometry.metric import fuchsian_flat, metric_from_lambda_w
from todaflat.goldman import PreconditionError
from todaflat.lie import (
    build_chevalley_basis,
    build_root_system,
    highest_weight_vectors,
    principal_triple,
    toda_coefficients,
)
from todaflat.opers import (
    OperConnection,
    bd_oper_connection,
    connection_relation_check,
    log_identity_check,
    relative_position_check,
    tau_correction,
)
from todaflat.toda import make_problem

ALL = [("A", 1), ("A", 2), ("C", 2), ("G", 2)]


def _stack(typ, rank):
    rs = build_root_system(typ, rank)
    cb = build_chevalley_basis(rs)
    pt = principal_triple(cb)
    td = toda_coefficients(cb, pt)
    hwv = highest_weight_vectors(cb, pt)
    return rs, cb, pt, td, hwv


def _trig_lambda(chart):
    X, Y = chart.nodes()
    return np.exp(0.3 * np.sin(2 * np.pi * X)
                  + 0.2 * np.cos(2 * np.pi * (X + Y)) + 1.0)


@pytest.mark.parametrize("typ,rank", ALL)
def test_bd_equals_marginal_connection_constant(typ, rank):
    # [DERIVED] BD oper = marginal-locus connection on constant data, exactly
    rs, cb, pt, td, hwv = _stack(typ, rank)
    N = 16
    ch = GridChart(N)
    lam0 = np.full((N, N), 3.7)
    met0 = fuchsian_flat(ch, lam0)
    q1 = 0.8 - 0.3j
    prob = make_problem(td, met0, q1=q1, q2bar=0.0, form="reduced")
    u0 = np.zeros((rank, N, N), dtype=complex)
    A = assemble_connection(cb, pt, prob, u0, basepoint_shape="(q,0)")
    q = [np.zeros((N, N), dtype=complex) for _ in range(rank)]
    q[-1] = np.full((N, N), q1, dtype=complex)
    op = bd_oper_connection(cb, pt, td, hwv, met0, q)
    assert np.max(np.abs(A.A_z - op.conn.A_z)) < 1e-12
    assert np.max(np.abs(A.A_zbar - op.conn.A_zbar)) < 1e-12


@pytest.mark.parametrize("typ,rank", ALL)
def test_relative_position_and_mutant(typ, rank):
    rs, cb, pt, td, hwv = _stack(typ, rank)
    N = 16
    ch = GridChart(N)
    met0 = fuchsian_flat(ch, 3.7)
    q = [np.zeros((N, N), dtype=complex) for _ in range(rank)]
    q[-1] += 0.8 - 0.3j
    op = bd_oper_connection(cb, pt, td, hwv, met0, q)
    assert relative_position_check(op).passed
    # zero one negative-simple-root coefficient at a single node
    Az_bad = op.conn.A_z.copy()
    Az_bad[cb.x_index(rs.neg(rs.simple_roots[0])), 2, 3] = 0.0
    bad = OperConnection(conn=ConnectionForm(basis=cb, chart=ch,
                                             A_z=Az_bad,
                                             A_zbar=op.conn.A_zbar))
    assert not relative_position_check(bad).passed


@pytest.mark.parametrize("typ,rank", ALL)
def test_relation_constant_exact(typ, rank):
    # [DERIVED] A(perturbed metric) = A_q + tau exactly on constant data
    rs, cb, pt, td, hwv = _stack(typ, rank)
    N = 16
    ch = GridChart(N)
    lam0 = np.full((N, N), 3.7)
    phi0 = np.full((N, N), 0.21 + 0.07j)
    gap = connection_relation_check(cb, pt, td, hwv, ch, lam0, phi0, 0.8 - 0.3j)
    assert gap < 1e-12


@pytest.mark.parametrize("typ,rank", [("A", 2), ("G", 2)])
def test_relation_curved_background(typ, rank):
    # [DERIVED] non-constant lam0 + constant phi0: relation still holds
    rs, cb, pt, td, hwv = _stack(typ, rank)
    N = 32
    ch = GridChart(N)
    phi0 = np.full((N, N), 0.21 + 0.07j)
    gap = connection_relation_check(cb, pt, td, hwv, ch, _trig_lambda(ch),
                                    phi0, 0.8 - 0.3j)
    assert gap < 1e-10


def test_log_identity():
    # [DERIVED] projected log-derivative identity for constant phi0
    ch = GridChart(32)
    phi0 = np.full((32, 32), 0.21 + 0.07j)
    assert log_identity_check(ch, _trig_lambda(ch), phi0) < 1e-12


def test_a2_collapse():
    # [DERIVED] A2: tau is absorbed by shifting the first differential slot
    rs, cb, pt, td, hwv = _stack("A", 2)
    N = 16
    ch = GridChart(N)
    met = fuchsian_flat(ch, _trig_lambda(ch))
    q1 = np.full((N, N), 0.8 - 0.3j)
    phi0 = np.full((N, N), 0.21 + 0.07j)
    A1 = bd_oper_connection(cb, pt, td, hwv, met,
                            [np.zeros((N, N), dtype=complex), q1])
    tau = tau_correction(cb, td, phi0)
    A2 = bd_oper_connection(cb, pt, td, hwv, met, [0.5 * phi0, q1])
    assert np.max(np.abs(A2.conn.A_z - (A1.conn.A_z + tau.a_z))) < 1e-12
    assert np.max(np.abs(A2.conn.A_zbar - A1.conn.A_zbar)) < 1e-12


def test_oper_requires_fuchsian():
    # [TRIVIAL] nonzero Beltrami coefficient is rejected
    rs, cb, pt, td, hwv = _stack("A", 2)
    ch = GridChart(16)
    met = metric_from_lambda_w(ch, 2.0, w_linear=(0.2, 0.0))
    q = [np.zeros((16, 16), dtype=complex) for _ in range(2)]
    with pytest.raises(PreconditionError):
        bd_oper_connection(cb, pt, td, hwv, met, q)
    with pytest.raises(ValueError):
        bd_oper_connection(cb, pt, td, hwv, fuchsian_flat(ch, 2.0), q[:1])
