"""The complex affine Toda system on a discretized chart.

Unknowns are the logs u_alpha (single-valued); the connection-normalized
coefficient functions are

    V_alpha = s_alpha exp(u_alpha),     s_alpha = 1/2 for every simple root,
    V_{-delta} = prod_gamma (-V_gamma)^{-n_gamma}
               = (-2)^(d-1) exp(-sum_gamma n_gamma u_gamma),

computed from exponentials of linear combinations of u (never via complex
powers).  The uniform normalization s_alpha = 1/2 makes u = 0 the Fuchsian
constant solution for every type, because sum_beta alpha(h_beta) r_beta = 1
is exactly alpha(x) = 1 for the principal grading element x.

Residual per simple root alpha (flatness-exact form):

    R_alpha(u) = base + Delta_h u_alpha
                 - 2 sum_beta K[alpha,beta] r_beta exp(u_beta)
                 - 4 Kd[alpha] (q1 q2bar / lam^d) V_{-delta}

with K[alpha,beta] = alpha(h_beta), Kd[alpha] = alpha(h_delta), and
base = Delta_h log lam (unreduced; exactly the flatness condition of the
assembled connection) or base = 2 (reduced; assumes the curvature identity
Delta_h log lam = 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..geometry.operators import bers_laplacian_apply
from ..lie.principal import TodaData

#: uniform per-root normalization relating exp(u_alpha) to the connection
#: coefficient V_alpha
S_ALPHA = 0.5


def v_alpha(u: np.ndarray) -> np.ndarray:
    return S_ALPHA * np.exp(u)


def v_minus_delta(td: TodaData, u: np.ndarray) -> np.ndarray:
    n = np.array(td.n, dtype=float)
    return (-2.0) ** (td.d - 1) * np.exp(-np.einsum("a,ayx->yx", n, u))


@dataclass(frozen=True)
class TodaProblem:
    toda_data: TodaData
    metric: object                     # ComplexMetricField
    q1: np.ndarray                     # degree-d differential, z chart
    q2bar: np.ndarray                  # conjugate-degree-d coefficient, z chart
    form: str = "unreduced"            # unreduced | reduced
    symmetry: bool = False
    a_convention: str = "cartan"       # cartan | abs-offdiag

    def __post_init__(self):
        if self.form not in ("unreduced", "reduced"):
            raise ValueError(f"unknown form {self.form!r}")
        N = self.metric.chart.N
        for name in ("q1", "q2bar"):
            f = np.asarray(getattr(self, name), dtype=complex)
            if f.shape != (N, N):
                raise ValueError(f"{name} must be an ({N},{N}) field")
            if not np.all(np.isfinite(f)):
                raise ValueError(f"{name} has non-finite entries")
            object.__setattr__(self, name, f)

    # ---- derived structure -----------------------------------------------
    @property
    def rank(self) -> int:
        return self.toda_data.rank

    @property
    def orbits(self) -> tuple[tuple[int, ...], ...]:
        """xi-orbits of simple-root indices (each sorted, listed by minimum)."""
        xi = self.toda_data.xi
        seen, out = set(), []
        for i in range(self.rank):
            if i in seen:
                continue
            orb = tuple(sorted({i, xi[i]}))
            seen.update(orb)
            out.append(orb)
        return tuple(out)

    @property
    def n_unknown_fields(self) -> int:
        return len(self.orbits) if self.symmetry else self.rank

    def expand(self, v: np.ndarray) -> np.ndarray:
        """Orbit fields -> full simple-root fields (identity if no symmetry)."""
        if not self.symmetry:
            return v
        N = self.metric.chart.N
        u = np.empty((self.rank, N, N), dtype=complex)
        for k, orb in enumerate(self.orbits):
            for i in orb:
                u[i] = v[k]
        return u

    def restrict(self, u: np.ndarray) -> np.ndarray:
        """Full simple-root fields -> orbit representatives."""
        if not self.symmetry:
            return u
        return np.stack([u[orb[0]] for orb in self.orbits])

    def coupling_matrices(self):
        """(K, Kd) for the selected a-convention."""
        K = self.toda_data.a_matrix(self.a_convention)
        Kd = self.toda_data.a_delta()
        return K, Kd

    def q_tilde(self) -> np.ndarray:
        return self.q1 * self.q2bar

    def base_term(self) -> np.ndarray:
        if self.form == "reduced":
            return np.full_like(self.q1, 2.0)
        return bers_laplacian_apply(self.metric, np.log(self.metric.lam))


def make_problem(toda_data, metric, q1, q2bar=None, q2bar_fn=None, **kw) -> TodaProblem:
    """Construct a TodaProblem, resampling q2bar through the w map if given
    as a callable of the w coordinate."""
    N = metric.chart.N
    if np.isscalar(q1):
        q1 = np.full((N, N), q1, dtype=complex)
    if q2bar_fn is not None:
        if q2bar is not None:
            raise ValueError("give q2bar or q2bar_fn, not both")
        q2bar = np.asarray(q2bar_fn(metric.w_values()), dtype=complex)
    if q2bar is None:
        q2bar = np.zeros((N, N), dtype=complex)
    if np.isscalar(q2bar):
        q2bar = np.full((N, N), q2bar, dtype=complex)
    return TodaProblem(toda_data=toda_data, metric=metric, q1=q1, q2bar=q2bar, **kw)


def residual(problem: TodaProblem, u: np.ndarray) -> np.ndarray:
    """Pointwise residual per simple root; u has shape (rank, N, N)."""
    td = problem.toda_data
    N = problem.metric.chart.N
    if u.shape != (problem.rank, N, N):
        raise ValueError(
            f"u has shape {u.shape}, expected {(problem.rank, N, N)}")
    K, Kd = problem.coupling_matrices()
    r = np.array([float(x) for x in td.r])
    lap = np.stack([bers_laplacian_apply(problem.metric, u[i]) for i in range(problem.rank)])
    lin = 2.0 * np.einsum("ab,byx->ayx", K * r[None, :], np.exp(u))
    qfac = problem.q_tilde() / problem.metric.lam ** td.d
    qterm = 4.0 * np.einsum("a,yx->ayx", Kd, qfac * v_minus_delta(td, u))
    return problem.base_term()[None, :, :] + lap - lin - qterm


def jacobian_apply(problem: TodaProblem, u: np.ndarray, udot: np.ndarray) -> np.ndarray:
    """Directional derivative of residual at u in direction udot."""
    td = problem.toda_data
    K, Kd = problem.coupling_matrices()
    r = np.array([float(x) for x in td.r])
    n = np.array(td.n, dtype=float)
    lap = np.stack([bers_laplacian_apply(problem.metric, udot[i]) for i in range(problem.rank)])
    lin = 2.0 * np.einsum("ab,byx->ayx", K * r[None, :], np.exp(u) * udot)
    qfac = problem.q_tilde() / problem.metric.lam ** td.d
    ndot = np.einsum("a,ayx->yx", n, udot)
    qterm = 4.0 * np.einsum("a,yx->ayx", Kd, qfac * v_minus_delta(td, u) * ndot)
    return lap - lin + qterm


@dataclass(frozen=True)
class ConstantSolution:
    u: np.ndarray                 # constant log-unknowns, shape (rank,)
    substituted: np.ndarray       # solution of the substituted linear system
    s_alpha: float = S_ALPHA
    newton_iterations: int = 0


def constant_solution(toda_data: TodaData, q_tilde=0.0, lam=1.0,
                      form: str = "reduced", a_convention: str = "cartan",
                      tol: float = 1e-14) -> ConstantSolution:
    """Constant solution of the system with constant coefficients.

    Also exposes the solution of the substituted linear system A U = e
    (the normalized table vector; equals r for the signed convention).
    For form='reduced' with q_tilde = 0 the answer is exactly u = 0.
    For form='unreduced' the base term of a constant metric is 0.
    """
    td = toda_data
    l = td.rank
    d = td.d
    K = td.a_matrix(a_convention)
    Kd = td.a_delta()
    r = np.array([float(x) for x in td.r])
    n = np.array(td.n, dtype=float)
    substituted = np.linalg.solve(td.a_matrix("cartan"), np.ones(l))
    qfac = complex(q_tilde) / complex(lam) ** d

    if form == "unreduced":
        if abs(qfac) < 1e-300:
            raise ValueError("unreduced form has no constant solution at q = 0")
        # y = exp(c) solves 2 (K diag r) y = -4 Kd qfac (-2)^(d-1) tau with
        # tau = prod y^{-n}; eliminating tau gives mu^d in closed form.
        v = np.linalg.solve(K * r[None, :], Kd.astype(complex))
        mu_d = -2.0 * qfac * (-2.0) ** (d - 1) * np.prod(v ** (-n))
        mu = mu_d ** (1.0 / d)
        c = np.log(mu * v)
        return ConstantSolution(u=c, substituted=substituted, newton_iterations=0)

    # reduced form: Newton with a short homotopy in the q-term
    def F(c, fac):
        w = (-2.0) ** (d - 1) * np.exp(-n @ c)
        return 2.0 - 2.0 * (K * r[None, :]) @ np.exp(c) - 4.0 * Kd * fac * w

    def JF(c, fac):
        w = (-2.0) ** (d - 1) * np.exp(-n @ c)
        return -2.0 * (K * r[None, :]) * np.exp(c)[None, :] + \
            4.0 * fac * w * np.outer(Kd, n)

    c = np.zeros(l, dtype=complex)
    total = 0
    steps = 1 if abs(qfac) < 1e-3 else 10
    with np.errstate(over="ignore", invalid="ignore"):
        for fac in np.linspace(0.0, 1.0, steps + 1)[1:] * qfac if abs(qfac) > 0 \
                else [0.0]:
            for _ in range(100):
                f = F(c, fac)
                if np.max(np.abs(f)) < tol:
                    break
                step = np.linalg.solve(JF(c, fac), -f)
                t = 1.0
                for _ in range(30):
                    cand = F(c + t * step, fac)
                    if np.all(np.isfinite(cand)) and \
                            np.max(np.abs(cand)) < np.max(np.abs(f)):
                        break
                    t *= 0.5
                else:
                    t = min(t, 1e-3)
                c = c + t * step
                total += 1
            else:
                raise RuntimeError("constant-solution Newton did not converge")
    return ConstantSolution(u=c, substituted=substituted, newton_iterations=total)


def real_locus_q2bar(toda_data: TodaData, q1: np.ndarray) -> np.ndarray:
    """The conjugate partner of q1 on the real locus, in this normalization.

    With V_{-delta} = prod (-V)^{-n} the q-term of the residual is real and
    has the focusing sign exactly when q1 q2bar = (-1)^d |q1|^2, so the real
    structure pairs q2bar = (-1)^d conj(q1).  (Rescaling q by a constant
    phase is a recorded benign convention; see the solver docstring.)
    """
    return (-1.0) ** toda_data.d * np.conj(q1)


def symmetry_reduce(problem: TodaProblem) -> TodaProblem:
    """Return the problem with xi-orbit symmetry enforced on the unknowns."""
    return TodaProblem(
        toda_data=problem.toda_data,
        metric=problem.metric,
        q1=problem.q1,
        q2bar=problem.q2bar,
        form=problem.form,
        symmetry=True,
        a_convention=problem.a_convention,
    )


@dataclass(frozen=True)
class TodaSolution:
    u: np.ndarray                 # full (rank, N, N) log-unknown fields
    residual_norm: float
    newton_iterations: int
    converged: bool
    form: str
    s_alpha: float = S_ALPHA
    history: tuple = ()
    diagnostics: dict = field(default_factory=dict)
