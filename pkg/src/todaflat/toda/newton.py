"""Newton continuation solver for the complex affine Toda system.

Continuation interpolates the differential fields from their grid means to
the target fields, because the unreduced system on a flat background has no
solution at q = 0; the step-0 problem with constant coefficients is solved
by the algebraic constant solution, which seeds the first Newton solve.

Linear solves: dense LU for small unknown counts, otherwise restarted GMRES
with a constant-coefficient block preconditioner (exact mode-wise inverse of
the frozen-coefficient Jacobian), which is exact for constant-coefficient
instances and very effective near them.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from .problem import (
    TodaProblem,
    TodaSolution,
    constant_solution,
    jacobian_apply,
    residual,
    v_minus_delta,
)

#: unknown counts up to this size use dense LU; above, preconditioned GMRES
_DENSE_LIMIT = 1200


class NewtonFailure(RuntimeError):
    """Raised (on request) when the Newton continuation fails to converge."""

    def __init__(self, message, solution: TodaSolution):
        super().__init__(message)
        self.solution = solution


def _coupling_at(problem: TodaProblem, u: np.ndarray) -> np.ndarray:
    """Mean-field coupling matrix C with J ~ Delta_sym I + C (full root space)."""
    td = problem.toda_data
    K, Kd = problem.coupling_matrices()
    r = np.array([float(x) for x in td.r])
    n = np.array(td.n, dtype=float)
    mean_exp = np.array([np.mean(np.exp(u[i])) for i in range(problem.rank)])
    qfac = np.mean(problem.q_tilde() / problem.metric.lam ** td.d * v_minus_delta(td, u))
    C = -2.0 * (K * r[None, :]) * mean_exp[None, :] + 4.0 * qfac * np.outer(Kd, n)
    return C


def _reduce_coupling(problem: TodaProblem, C: np.ndarray) -> np.ndarray:
    if not problem.symmetry:
        return C
    orbits = problem.orbits
    m = len(orbits)
    Cr = np.zeros((m, m), dtype=complex)
    for a, orb_a in enumerate(orbits):
        for b, orb_b in enumerate(orbits):
            Cr[a, b] = sum(C[orb_a[0], j] for j in orb_b)
    return Cr


def _make_preconditioner(problem: TodaProblem, u: np.ndarray):
    """Mode-wise inverse of the frozen-coefficient Jacobian."""
    chart = problem.metric.chart
    N = chart.N
    c0 = np.mean(1.0 / (problem.metric.lam * problem.metric.s))
    k = np.fft.fftfreq(N, d=1.0 / N)
    kx, ky = np.meshgrid(k, k, indexing="xy")
    sym = c0 * (-4.0 * np.pi ** 2) * (kx ** 2 + ky ** 2)
    C = _reduce_coupling(problem, _coupling_at(problem, u))
    m = C.shape[0]
    block = sym[:, :, None, None] * np.eye(m)[None, None, :, :] + C[None, None, :, :]
    inv = np.linalg.inv(block)  # (N, N, m, m)

    def apply(b: np.ndarray) -> np.ndarray:
        bh = np.fft.fft2(b.reshape(m, N, N), axes=(1, 2))
        xh = np.einsum("yxab,byx->ayx", inv, bh)
        return np.fft.ifft2(xh, axes=(1, 2))

    return apply


def _linear_solve(problem, u_full, rhs, matvec, precond, diagnostics):
    """Solve J delta = rhs in unknown space; rhs shape (m, N, N)."""
    m, N, _ = rhs.shape
    n = m * N * N
    if n <= _DENSE_LIMIT:
        A = np.empty((n, n), dtype=complex)
        eye = np.eye(n, dtype=complex)
        for j in range(n):
            A[:, j] = matvec(eye[:, j].reshape(m, N, N)).ravel()
        try:
            sol = np.linalg.solve(A, rhs.ravel())
        except np.linalg.LinAlgError:
            diagnostics["condition_estimate"] = float(np.linalg.cond(A))
            raise
        return sol.reshape(m, N, N), True
    op = LinearOperator(
        (n, n),
        matvec=lambda x: matvec(x.reshape(m, N, N)).ravel(),
        dtype=complex,
    )
    M = LinearOperator(
        (n, n),
        matvec=lambda x: precond(x.reshape(m, N, N)).ravel(),
        dtype=complex,
    )
    sol, info = gmres(op, rhs.ravel(), M=M, rtol=1e-10, atol=0.0,
                      restart=60, maxiter=300)
    if info != 0:
        diagnostics["gmres_info"] = int(info)
        # rough conditioning estimate from the preconditioned operator
        diagnostics["condition_estimate"] = float(
            np.linalg.norm(op.matvec(sol)) / (np.linalg.norm(sol) + 1e-300)
        )
        return sol.reshape(m, N, N), False
    return sol.reshape(m, N, N), True


def newton_solve(problem: TodaProblem, u0: np.ndarray | None = None,
                 tol: float = 1e-10, max_iter: int = 30,
                 continuation_steps: int = 4,
                 raise_on_fail: bool = False) -> TodaSolution:
    chart = problem.metric.chart
    N = chart.N
    q1_mean = np.mean(problem.q1)
    q2_mean = np.mean(problem.q2bar)
    lam_mean = np.mean(problem.metric.lam)

    constant_data = (
        np.max(np.abs(problem.q1 - q1_mean)) < 1e-15
        and np.max(np.abs(problem.q2bar - q2_mean)) < 1e-15
    )
    ts = [1.0] if (constant_data or continuation_steps <= 0) else list(
        np.linspace(0.0, 1.0, continuation_steps + 1)
    )

    if u0 is None:
        try:
            cs = constant_solution(
                problem.toda_data,
                q_tilde=q1_mean * q2_mean,
                lam=lam_mean,
                form=problem.form,
                a_convention=problem.a_convention,
            )
            u_start = cs.u
        except ValueError:
            # no constant start (unreduced with vanishing mean q-term)
            u_start = np.zeros(problem.rank, dtype=complex)
        u_full = np.broadcast_to(
            u_start[:, None, None], (problem.rank, N, N)
        ).astype(complex).copy()
    else:
        u_full = np.asarray(u0, dtype=complex).copy()

    history = []
    diagnostics: dict = {}
    total_iters = 0
    v = problem.restrict(u_full)
    resnorm = np.inf

    for t in ts:
        prob_t = replace(
            problem,
            q1=q1_mean + t * (problem.q1 - q1_mean),
            q2bar=q2_mean + t * (problem.q2bar - q2_mean),
        )

        stall = 0
        best = np.inf
        for it in range(max_iter):
            u_full = prob_t.expand(v)
            res = prob_t.restrict(residual(prob_t, u_full))
            resnorm = float(np.max(np.abs(res)))
            history.append((float(t), total_iters, resnorm))
            if resnorm <= tol:
                break
            # stagnation at the roundoff floor
            stall = stall + 1 if resnorm > 0.5 * best else 0
            best = min(best, resnorm)
            if stall >= 3:
                break

            def matvec(vdot, _prob=prob_t, _u=u_full):
                return _prob.restrict(jacobian_apply(_prob, _u, _prob.expand(vdot)))

            precond = _make_preconditioner(prob_t, u_full)
            delta, ok = _linear_solve(prob_t, u_full, -res, matvec, precond, diagnostics)
            if not ok:
                sol = TodaSolution(
                    u=u_full, residual_norm=resnorm, newton_iterations=total_iters,
                    converged=False, form=problem.form, history=tuple(history),
                    diagnostics={**diagnostics, "failure": "linear solve breakdown"},
                )
                if raise_on_fail:
                    raise NewtonFailure("linear solve breakdown", sol)
                return sol

            # damped update
            step = 1.0
            for _ in range(10):
                cand = v + step * delta
                cand_res = prob_t.restrict(residual(prob_t, prob_t.expand(cand)))
                if np.max(np.abs(cand_res)) < resnorm or step < 1e-4:
                    break
                step *= 0.5
            v = v + step * delta
            total_iters += 1
        else:
            u_full = prob_t.expand(v)
            res = prob_t.restrict(residual(prob_t, u_full))
            resnorm = float(np.max(np.abs(res)))
            if resnorm > tol:
                sol = TodaSolution(
                    u=u_full, residual_norm=resnorm, newton_iterations=total_iters,
                    converged=False, form=problem.form, history=tuple(history),
                    diagnostics={**diagnostics, "failure": "max iterations"},
                )
                if raise_on_fail:
                    raise NewtonFailure("newton did not converge", sol)
                return sol

    u_full = problem.expand(v)
    final = float(np.max(np.abs(residual(problem, u_full))))
    return TodaSolution(
        u=u_full, residual_norm=final, newton_iterations=total_iters,
        converged=final <= tol, form=problem.form, history=tuple(history),
        diagnostics=diagnostics,
    )
