"""Acceptance battery: the computable identities the package promises.

Each criterion_* function returns a CriterionResult; run_suite executes the
battery (fixed seeds, deterministic) and the CLI serializes the rows as CSV.
The same functions back tests/test_acceptance.py.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .connection.assemble import assemble_connection, curvature_sup_norm, ConnectionForm
from .connection.holonomy import holonomy, loop_path
from .geometry.grid import GridChart, PatchChart
from .geometry.metric import (
    bers_from_quadratic_perturbation,
    fuchsian_flat,
    metric_from_lambda_w,
    poincare_patch_metric,
)
from .geometry.operators import dbar_del_two_form, gauss_curvature_defect
from .goldman import (
    fiber_pairing_closed_form,
    lagrangian_check,
    pairing,
    variation_cartan,
    variation_g1,
    variation_q1,
    variation_q2,
)
from .lie import (
    build_chevalley_basis,
    build_root_system,
    defining_representation,
    highest_weight_vectors,
    jacobi_defect,
    principal_triple,
    toda_coefficients,
    xi_permutation,
)
from .opers import (
    OperConnection,
    bd_oper_connection,
    connection_relation_check,
    relative_position_check,
    tau_correction,
)
from .toda.newton import newton_solve
from .toda.problem import (
    constant_solution,
    jacobian_apply,
    make_problem,
    real_locus_q2bar,
    residual,
)

ALL_TYPES = (("A", 1), ("A", 2), ("C", 2), ("G", 2))


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    measure: float
    tolerance: float
    detail: str

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


def _lie_stack(typ, rank):
    rs = build_root_system(typ, rank)
    cb = build_chevalley_basis(rs)
    pt = principal_triple(cb)
    td = toda_coefficients(cb, pt)
    return rs, cb, pt, td


def _trig_lambda(chart, amp=0.3, offset=1.0):
    X, Y = chart.nodes()
    return np.exp(amp * np.sin(2 * np.pi * X)
                  + 0.6 * amp * np.cos(2 * np.pi * (X + Y)) + offset)


def criterion_1() -> CriterionResult:
    """Low-rank coefficient table, exact rational match.

    The A2 weight vector is asserted at its derived value r = (1, 1): the
    value (1/2, 1/2) quoted alongside the table is inconsistent with the
    principal-triple axioms that define r (see the decisions ledger); all
    other table entries match the quoted values exactly.
    """
    checks = []
    rs1, cb1, pt1, td1 = _lie_stack("A", 1)
    checks.append(("A1.d", td1.d == 2))
    checks.append(("A1.r", pt1.r == (Fraction(1, 2),)))
    checks.append(("A1.a_aa", td1.a_matrix("cartan")[0, 0] == 2))
    checks.append(("A1.a_ad", td1.a_delta()[0] == 2))
    rs2, cb2, pt2, td2 = _lie_stack("A", 2)
    checks.append(("A2.d", td2.d == 3))
    checks.append(("A2.r", pt2.r == (Fraction(1), Fraction(1))))  # derived value
    checks.append(("A2.n", td2.n == (1, 1)))
    checks.append(("A2.a_ad", tuple(td2.a_delta()) == (1, 1)))
    checks.append(("A2.xi", xi_permutation(rs2) == (1, 0)))
    bad = [name for name, ok in checks if not ok]
    return CriterionResult(
        1, "lie-data-table", not bad, float(len(bad)), 0.0,
        "all entries exact (A2 r asserted at derived (1,1); ledgered deviation)"
        if not bad else f"mismatched entries: {bad}",
    )


def criterion_2() -> CriterionResult:
    """Structural algebra: Jacobi, triple relations, grading, centralizer."""
    worst = 0.0
    details = []
    for typ, rank in ALL_TYPES:
        rs, cb, pt, td = _lie_stack(typ, rank)
        jd = jacobi_defect(cb)
        if jd != 0:
            return CriterionResult(2, "structural-algebra", False, float(jd),
                                   0.0, f"{typ}{rank}: Jacobi defect {jd}")
        trip = max(
            np.max(np.abs(cb.bracket(pt.x, pt.e) - pt.e)),
            np.max(np.abs(cb.bracket(pt.x, pt.etilde) + pt.etilde)),
            np.max(np.abs(cb.bracket(pt.e, pt.etilde) - pt.x)),
        )
        grad = 0.0
        for r in rs.roots:
            y = cb.zeros()
            y[cb.x_index(r)] = 1.0
            grad = max(grad, np.max(np.abs(cb.bracket(pt.x, y) - rs.height(r) * y)))
        ker = cb.dim - np.linalg.matrix_rank(cb.ad(pt.e), tol=1e-10)
        if ker != rank:
            return CriterionResult(2, "structural-algebra", False, float(ker),
                                   float(rank), f"{typ}{rank}: dim ker(ad e) = {ker}")
        worst = max(worst, float(trip), float(grad))
        details.append(f"{typ}{rank} ok")
    return CriterionResult(2, "structural-algebra", worst <= 1e-12, worst, 1e-12,
                           f"max triple/grading defect {worst:.2e}")


def criterion_3() -> CriterionResult:
    """Constant solution kills the reduced residual on arbitrary metrics
    with vanishing q-product."""
    N = 24
    chart = GridChart(N)
    X, Y = chart.nodes()
    w_per = 0.01 * np.sin(2 * np.pi * Y) + 0.004j * np.cos(2 * np.pi * X)
    worst = 0.0
    for typ, rank in ALL_TYPES:
        rs, cb, pt, td = _lie_stack(typ, rank)
        met = metric_from_lambda_w(chart, _trig_lambda(chart), w_per=w_per)
        prob = make_problem(td, met, q1=0.7 - 0.2j, q2bar=0.0, form="reduced")
        cs = constant_solution(td, q_tilde=0.0, form="reduced")
        u = np.broadcast_to(cs.u[:, None, None], (rank, N, N)).astype(complex)
        worst = max(worst, float(np.max(np.abs(residual(prob, u)))))
    return CriterionResult(3, "constant-solution", worst <= 1e-14, worst, 1e-14,
                           f"max reduced residual at constant solution {worst:.2e}")


def criterion_4() -> CriterionResult:
    """Curvature identity on the disk patch, and backend-order convergence
    of the Laplace identity."""
    chart = PatchChart(64)
    met = poincare_patch_metric(chart)
    mask = chart.interior_mask(4)
    defect = float(np.max(np.abs(gauss_curvature_defect(met)[mask])))

    errs = []
    for N in (16, 32, 64):
        fd = GridChart(N, backend="fd4")
        sp = GridChart(N, backend="spectral")
        X, Y = fd.nodes()
        f = np.exp(np.sin(2 * np.pi * X) + 0.5 * np.cos(2 * np.pi * Y))
        lam = _trig_lambda(fd)
        m_fd = fuchsian_flat(fd, lam)
        m_sp = fuchsian_flat(sp, lam)
        errs.append(float(np.max(np.abs(
            dbar_del_two_form(m_fd, f) - dbar_del_two_form(m_sp, f)))))
    ratios = [errs[i] / errs[i + 1] for i in range(2)]
    order_ok = all(r > 8.0 for r in ratios)  # 4th order gives ~16
    passed = defect <= 1e-6 and order_ok
    return CriterionResult(
        4, "curvature-identity", passed, defect, 1e-6,
        f"patch defect {defect:.2e}; convergence ratios "
        + "/".join(f"{r:.1f}" for r in ratios),
    )


def criterion_5() -> CriterionResult:
    """Flatness oracle at N = 64; also selects the aggregation convention."""
    N = 64
    chart = GridChart(N)
    lam = 2.0
    met = fuchsian_flat(chart, lam)
    worst_curv = 0.0
    worst_comm = 0.0
    worst_res = 0.0
    best_wrong = np.inf
    for typ, rank in ALL_TYPES:
        rs, cb, pt, td = _lie_stack(typ, rank)
        # keep |q1 q2bar / lam^d| <= 0.1
        q1 = complex(0.05 * lam ** td.d) ** 0.5 * np.exp(0.4j)
        q2bar = complex(0.05 * lam ** td.d) ** 0.5 * np.exp(-0.1j)
        # the two conventions coincide for rank 1 (no off-diagonal entries)
        conventions = ("cartan", "abs-offdiag") if rank >= 2 else ("cartan",)
        for conv in conventions:
            prob = make_problem(td, met, q1=q1, q2bar=q2bar,
                                form="unreduced", a_convention=conv)
            sol = newton_solve(prob, tol=1e-10)
            conn = assemble_connection(cb, pt, prob, sol.u)
            curv = curvature_sup_norm(conn)
            if conv == "cartan":
                if not sol.converged:
                    return CriterionResult(5, "flatness-oracle", False,
                                           sol.residual_norm, 1e-10,
                                           f"{typ}{rank}: Newton did not converge")
                worst_res = max(worst_res, sol.residual_norm)
                worst_curv = max(worst_curv, curv)
                rep = None if typ == "G" else defining_representation(cb)
                hx = holonomy(conn, loop_path("x"), rep=rep).matrix
                hy = holonomy(conn, loop_path("y"), rep=rep).matrix
                worst_comm = max(worst_comm, float(np.max(np.abs(hx @ hy - hy @ hx))))
            else:
                best_wrong = min(best_wrong, curv)
    passed = (worst_curv <= 1e-7 and worst_comm <= 1e-6 and best_wrong > 1e-7)
    return CriterionResult(
        5, "flatness-oracle", passed, worst_curv, 1e-7,
        f"curvature {worst_curv:.2e}, holonomy commutator {worst_comm:.2e}, "
        f"wrong-convention curvature >= {best_wrong:.2e} (selects 'cartan')",
    )


def criterion_6() -> CriterionResult:
    """Jacobian vs central finite differences, 10 random directions/type."""
    rng = np.random.default_rng(6)
    N = 16
    chart = GridChart(N)
    met = fuchsian_flat(chart, _trig_lambda(chart))
    worst = 0.0
    for typ, rank in ALL_TYPES:
        rs, cb, pt, td = _lie_stack(typ, rank)
        prob = make_problem(td, met, q1=0.4 - 0.1j, q2bar=0.2 + 0.3j,
                            form="unreduced")
        u = 0.3 * (rng.standard_normal((rank, N, N))
                   + 1j * rng.standard_normal((rank, N, N)))
        for _ in range(10):
            v = rng.standard_normal((rank, N, N)) + 1j * rng.standard_normal((rank, N, N))
            eps = 1e-6
            fd = (residual(prob, u + eps * v) - residual(prob, u - eps * v)) / (2 * eps)
            jv = jacobian_apply(prob, u, v)
            rel = float(np.max(np.abs(fd - jv)) / np.max(np.abs(jv)))
            worst = max(worst, rel)
    return CriterionResult(6, "jacobian-correctness", worst < 1e-6, worst, 1e-6,
                           f"max relative FD error {worst:.2e}")


def _dense_jacobian(prob, u):
    rank, N, _ = u.shape
    n = rank * N * N
    J = np.empty((n, n), dtype=complex)
    eye = np.eye(n)
    for j in range(n):
        J[:, j] = jacobian_apply(prob, u, eye[:, j].reshape(rank, N, N)).ravel()
    return J


def criterion_7() -> CriterionResult:
    """Real locus: real solved fields, and Jacobian lower bound at the
    Fuchsian point against the flat Helmholtz analogue."""
    N = 32
    chart = GridChart(N)
    worst_imag = 0.0
    worst_ratio = np.inf
    for typ, rank in ALL_TYPES:
        rs, cb, pt, td = _lie_stack(typ, rank)
        lam = _trig_lambda(chart).real  # real positive, mu = 0
        met = fuchsian_flat(chart, lam)
        q1 = 0.12 + 0.05j
        q2bar = complex(real_locus_q2bar(td, np.array(q1)))
        prob = make_problem(td, met, q1=q1, q2bar=q2bar, form="reduced")
        sol = newton_solve(prob, tol=1e-11)
        if not sol.converged:
            return CriterionResult(7, "real-locus", False, sol.residual_norm,
                                   1e-11, f"{typ}{rank}: solve failed")
        worst_imag = max(worst_imag, float(np.max(np.abs(sol.u.imag))))

        # sigma_min of the N = 16 Jacobian at the Fuchsian point (u = 0, q = 0)
        Nf = 16
        cf = GridChart(Nf)
        mf = fuchsian_flat(cf, 1.0)
        pf = make_problem(td, mf, q1=0.0, q2bar=0.0, form="reduced")
        u0 = np.zeros((rank, Nf, Nf), dtype=complex)
        J = _dense_jacobian(pf, u0)
        smin = float(np.linalg.svd(J, compute_uv=False)[-1])
        # analogue: flat Laplacian with the same uniform zeroth-order shift
        pf1 = make_problem(toda_coefficients(*_lie_stack("A", 1)[1:3]), mf,
                           q1=0.0, q2bar=0.0, form="reduced")
        Jh = _dense_jacobian(pf1, np.zeros((1, Nf, Nf), dtype=complex))
        smin_h = float(np.linalg.svd(Jh, compute_uv=False)[-1])
        worst_ratio = min(worst_ratio, smin / smin_h)
    passed = worst_imag < 1e-10 and worst_ratio > 0.1
    return CriterionResult(
        7, "real-locus", passed, worst_imag, 1e-10,
        f"max imaginary part {worst_imag:.2e}; sigma_min ratio >= {worst_ratio:.3f}",
    )


def criterion_8() -> CriterionResult:
    """Goldman identities: Lagrangian density, fiber closed form, and
    definiteness of the fiber quadratic form on the real locus."""
    rng = np.random.default_rng(8)
    N = 64
    chart = GridChart(N)
    X, Y = chart.nodes()
    worst_lag = 0.0
    worst_gap = 0.0
    sign_ok = True
    imag_worst = 0.0
    for typ, rank in ALL_TYPES:
        rs, cb, pt, td = _lie_stack(typ, rank)
        lam = _trig_lambda(chart)
        met = fuchsian_flat(chart, lam)
        scale = td.invariant_form_scale
        # same-side Lagrangian pairs (both product-parametrization patterns)
        fields_h = (rng.standard_normal((rank, N, N))
                    + 1j * rng.standard_normal((rank, N, N)))
        fields_g = (rng.standard_normal((rank, N, N))
                    + 1j * rng.standard_normal((rank, N, N)))
        q1dot = np.exp(2j * np.pi * X) + 0.3 * np.cos(2 * np.pi * Y)
        q2dot = 0.7 * np.exp(-2j * np.pi * Y) + 0.2
        worst_lag = max(
            worst_lag,
            lagrangian_check(variation_cartan(cb, fields_h, side="z"),
                             variation_g1(cb, fields_g, side="zbar"), scale),
            lagrangian_check(variation_cartan(cb, fields_h, side="zbar"),
                             variation_g1(cb, fields_g, side="z"), scale),
            lagrangian_check(variation_g1(cb, fields_g, side="zbar"),
                             variation_g1(cb, fields_h, side="zbar"), scale),
        )
        # fiber pairing vs closed form
        rep = pairing(variation_q1(cb, q1dot),
                      variation_q2(cb, td, q2dot, met), chart, scale)
        closed = fiber_pairing_closed_form(cb, td, q1dot, q2dot, met, scale)
        worst_gap = max(worst_gap, abs(rep.value - closed))
        # fiber quadratic form on the real locus: -2i omega(qdot, partner)
        for _ in range(5):
            qd = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N)))
            partner = real_locus_q2bar(td, qd)
            val = -2j * pairing(variation_q1(cb, qd),
                                variation_q2(cb, td, partner, met), chart,
                                scale).value
            imag_worst = max(imag_worst, abs(val.imag) / abs(val))
            if not (val.real < 0):
                sign_ok = False
    passed = worst_lag <= 1e-14 and worst_gap <= 1e-8 and sign_ok and imag_worst < 1e-10
    return CriterionResult(
        8, "goldman-identities", passed, worst_gap, 1e-8,
        f"Lagrangian density {worst_lag:.2e}; closed-form gap {worst_gap:.2e}; "
        f"quadratic form real (rel imag {imag_worst:.2e}) and negative definite",
    )


def criterion_9() -> CriterionResult:
    """Oper suite: relative position (and mutants), agreement with the
    marginal-locus connection, and the relation A = A_q + tau."""
    N = 64
    chart = GridChart(N)
    X, Y = chart.nodes()
    lam_trig = _trig_lambda(chart)
    worst_const = 0.0
    worst_bd = 0.0
    worst_trig = 0.0
    mutants_fail = True
    relpos_pass = True
    for typ, rank in ALL_TYPES:
        rs, cb, pt, td = _lie_stack(typ, rank)
        hwv = highest_weight_vectors(cb, pt)
        lam0 = np.full((N, N), 3.7)
        q1 = 0.8 - 0.3j
        phi0 = np.full((N, N), 0.21 + 0.07j)

        met0 = fuchsian_flat(chart, lam0)
        q = [np.zeros((N, N), dtype=complex) for _ in range(rank)]
        q[-1] = np.full((N, N), q1, dtype=complex)
        oper = bd_oper_connection(cb, pt, td, hwv, met0, q)
        relpos_pass = relpos_pass and relative_position_check(oper).passed
        Az_bad = oper.conn.A_z.copy()
        Az_bad[cb.x_index(rs.neg(rs.simple_roots[0]))] = 0.0
        bad = OperConnection(conn=ConnectionForm(
            basis=cb, chart=chart, A_z=Az_bad, A_zbar=oper.conn.A_zbar))
        mutants_fail = mutants_fail and (not relative_position_check(bad).passed)

        # BD oper vs marginal-locus connection on constant data
        prob = make_problem(td, met0, q1=q1, q2bar=0.0, form="reduced")
        u0 = np.zeros((rank, N, N), dtype=complex)
        A = assemble_connection(cb, pt, prob, u0, basepoint_shape="(q,0)")
        worst_bd = max(worst_bd,
                       float(np.max(np.abs(A.A_z - oper.conn.A_z))),
                       float(np.max(np.abs(A.A_zbar - oper.conn.A_zbar))))

        worst_const = max(worst_const, connection_relation_check(
            cb, pt, td, hwv, chart, lam0, phi0, q1))
        worst_trig = max(worst_trig, connection_relation_check(
            cb, pt, td, hwv, chart, lam_trig, phi0, q1))

    # A2 collapse: tau absorbs into the first differential slot
    rs, cb, pt, td = _lie_stack("A", 2)
    hwv = highest_weight_vectors(cb, pt)
    met_t = fuchsian_flat(chart, lam_trig)
    q1f = np.full((N, N), 0.8 - 0.3j)
    phi0 = np.full((N, N), 0.21 + 0.07j)
    A1 = bd_oper_connection(cb, pt, td, hwv, met_t,
                            [np.zeros((N, N), dtype=complex), q1f])
    tau = tau_correction(cb, td, phi0)
    A2c = bd_oper_connection(cb, pt, td, hwv, met_t, [0.5 * phi0, q1f])
    collapse = max(float(np.max(np.abs(A2c.conn.A_z - (A1.conn.A_z + tau.a_z)))),
                   float(np.max(np.abs(A2c.conn.A_zbar - A1.conn.A_zbar))))

    passed = (relpos_pass and mutants_fail and worst_bd <= 1e-10
              and worst_const <= 1e-12 and worst_trig <= 1e-8
              and collapse <= 1e-12)
    return CriterionResult(
        9, "oper-suite", passed, worst_trig, 1e-8,
        f"relative position ok, mutants fail; BD-vs-marginal {worst_bd:.2e}; "
        f"relation const {worst_const:.2e} / curved {worst_trig:.2e}; "
        f"A2 collapse {collapse:.2e}",
    )


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9)


def run_suite(level: str = "desk") -> list[CriterionResult]:
    if level != "desk":
        raise ValueError(f"unknown suite level {level!r}")
    return [fn() for fn in CRITERIA]


def suite_csv(results: list[CriterionResult]) -> str:
    buf = io.StringIO()
    buf.write("criterion,name,status,measure,tolerance,detail\n")
    for r in results:
        detail = r.detail.replace(",", ";")
        buf.write(f"{r.number},{r.name},{r.status},{r.measure:.6e},"
                  f"{r.tolerance:.1e},{detail}\n")
    return buf.getvalue()
