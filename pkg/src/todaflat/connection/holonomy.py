"""Parallel transport / holonomy of a connection along polyline paths.

Transport convention: T solves dT/dt = (A_z zdot + A_zbar zbardot) T with
T(0) = I, so a constant diagonal A_z = D along the unit x-loop gives
exp(D).  Classical RK4 with automatic step halving until two consecutive
refinements agree to the requested tolerance; coefficients are interpolated
bilinearly with periodic wrap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assemble import ConnectionForm


def loop_path(which: str, base=(0.0, 0.0)):
    """The x- or y-generator loop of the torus through the given basepoint."""
    x0, y0 = base
    if which == "x":
        return [(x0, y0), (x0 + 1.0, y0)]
    if which == "y":
        return [(x0, y0), (x0, y0 + 1.0)]
    raise ValueError(f"unknown loop {which!r}")


@dataclass(frozen=True)
class HolonomyResult:
    matrix: np.ndarray
    path: tuple
    steps: int
    refinement_error: float
    accuracy_warning: bool

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    @property
    def determinant(self) -> complex:
        return complex(np.linalg.det(self.matrix))


def _interp(fields: np.ndarray, x: float, y: float) -> np.ndarray:
    """Bilinear periodic interpolation of (dim, N, N) fields at (x, y)."""
    N = fields.shape[1]
    fx, fy = (x % 1.0) * N, (y % 1.0) * N
    ix, iy = int(np.floor(fx)), int(np.floor(fy))
    tx, ty = fx - ix, fy - iy
    i0, i1 = ix % N, (ix + 1) % N
    j0, j1 = iy % N, (iy + 1) % N
    return ((1 - tx) * (1 - ty) * fields[:, j0, i0]
            + tx * (1 - ty) * fields[:, j0, i1]
            + (1 - tx) * ty * fields[:, j1, i0]
            + tx * ty * fields[:, j1, i1])


def _rep_fields(conn: ConnectionForm, rep: np.ndarray | None):
    """Connection coefficient fields contracted into representation matrices.

    Returns (Az_mat, Azb_mat) of shape (n*n, N, N) flattened matrix fields.
    """
    mats = rep if rep is not None else conn.basis.adjoint_matrices
    n = mats.shape[1]
    Az = np.einsum("kyx,kij->ijyx", conn.A_z, mats).reshape(n * n, *conn.A_z.shape[1:])
    Azb = np.einsum("kyx,kij->ijyx", conn.A_zbar, mats).reshape(n * n, *conn.A_z.shape[1:])
    return Az, Azb, n


def _transport(Az, Azb, n, path, steps):
    T = np.eye(n, dtype=complex)
    verts = [np.array(v, dtype=float) for v in path]
    total_len = sum(np.linalg.norm(b - a) for a, b in zip(verts, verts[1:]))
    for a, b in zip(verts, verts[1:]):
        seg = b - a
        seg_len = np.linalg.norm(seg)
        if seg_len == 0:
            continue
        nseg = max(1, int(round(steps * seg_len / total_len)))
        h = 1.0 / nseg
        zdot = seg[0] + 1j * seg[1]

        def rhs(t, M):
            pt = a + t * seg
            A = (_interp(Az, pt[0], pt[1]) * zdot
                 + _interp(Azb, pt[0], pt[1]) * np.conj(zdot)).reshape(n, n)
            return A @ M

        for k in range(nseg):
            t0 = k * h
            k1 = rhs(t0, T)
            k2 = rhs(t0 + h / 2, T + h / 2 * k1)
            k3 = rhs(t0 + h / 2, T + h / 2 * k2)
            k4 = rhs(t0 + h, T + h * k3)
            T = T + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return T


def holonomy(conn: ConnectionForm, path, rep: np.ndarray | None = None,
             tol: float = 1e-9, max_steps: int = 1 << 14) -> HolonomyResult:
    Az, Azb, n = _rep_fields(conn, rep)
    steps = max(32, conn.chart.N)
    prev = _transport(Az, Azb, n, path, steps)
    err = np.inf
    while steps <= max_steps:
        steps *= 2
        cur = _transport(Az, Azb, n, path, steps)
        err = float(np.max(np.abs(cur - prev)))
        prev = cur
        if err <= tol:
            break
    return HolonomyResult(
        matrix=prev,
        path=tuple(tuple(v) for v in path),
        steps=steps,
        refinement_error=err,
        accuracy_warning=err > tol,
    )


def trace_invariants(hol: HolonomyResult) -> np.ndarray:
    """Traces of powers 1..(dim-1) of the holonomy matrix."""
    M = hol.matrix
    n = M.shape[0]
    out = []
    P = M
    for _ in range(1, n):
        out.append(np.trace(P))
        P = P @ M
    return np.array(out, dtype=complex)
