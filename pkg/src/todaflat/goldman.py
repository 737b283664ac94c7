"""Goldman pairing on connection variations, Lagrangian vanishing, and the
fiber pairing closed form.

Conventions: a variation is a g-valued 1-form field (a_z dz + a_zbar dzbar);
the pairing is

    omega(Adot, Bdot) = integral of nu(Adot wedge Bdot)
                      = sum_nodes [nu(a_z, b_zbar) - nu(a_zbar, b_z)]
                        * (-2i) * cell_area,

with the global orientation convention dz wedge dzbar = -2i dx dy and the
invariant form nu = scale * adjoint trace form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lie.chevalley import ChevalleyBasis
from .lie.principal import TodaData
from .toda.problem import S_ALPHA, v_minus_delta


class PreconditionError(ValueError):
    """A documented precondition of the operation is violated."""


@dataclass(frozen=True)
class Variation:
    basis: ChevalleyBasis
    a_z: np.ndarray       # (dim_g, N, N)
    a_zbar: np.ndarray
    provenance: str = "raw"


@dataclass(frozen=True)
class PairingReport:
    value: complex
    integrand_sup: float
    quadrature: str = "node-sum-unit-square"


def _zeros(cb: ChevalleyBasis, N: int) -> np.ndarray:
    return np.zeros((cb.dim, N, N), dtype=complex)


def pairing_density(va: Variation, vb: Variation, scale: float = 1.0) -> np.ndarray:
    """Coefficient of dz wedge dzbar of nu(Adot wedge Bdot), per node."""
    if va.a_z.shape != vb.a_z.shape or va.basis is not vb.basis:
        raise ValueError("variations live on different grids or bases")
    G = va.basis.killing_form_matrix(scale)
    return (np.einsum("ayx,ab,byx->yx", va.a_z, G, vb.a_zbar)
            - np.einsum("ayx,ab,byx->yx", va.a_zbar, G, vb.a_z))


def pairing(va: Variation, vb: Variation, chart, scale: float = 1.0) -> PairingReport:
    dens = pairing_density(va, vb, scale)
    value = complex(np.sum(dens) * (-2j) * chart.cell_area)
    return PairingReport(value=value, integrand_sup=float(np.max(np.abs(dens))))


def variation_q1(cb: ChevalleyBasis, q1dot: np.ndarray) -> Variation:
    """Fiber variation in the q1 direction: q1dot x_delta dz."""
    N = q1dot.shape[0]
    a_z = _zeros(cb, N)
    a_z[cb.x_index(cb.root_system.highest_root)] = q1dot
    return Variation(basis=cb, a_z=a_z, a_zbar=_zeros(cb, N), provenance="q1-direction")


def variation_q2(cb: ChevalleyBasis, td: TodaData, q2dot: np.ndarray,
                 metric, u: np.ndarray | None = None) -> Variation:
    """Fiber variation in the q2bar direction:
    lam^(1-d) V_{-delta} q2dot x_{-delta} dzbar."""
    N = q2dot.shape[0]
    if u is None:
        u = np.zeros((td.rank, N, N), dtype=complex)
    vm = v_minus_delta(td, u)
    a_zbar = _zeros(cb, N)
    a_zbar[cb.x_index(cb.root_system.neg(cb.root_system.highest_root))] = (
        metric.lam ** (1 - td.d) * vm * q2dot
    )
    return Variation(basis=cb, a_z=_zeros(cb, N), a_zbar=a_zbar,
                     provenance="q2-direction")


def variation_cartan(cb: ChevalleyBasis, fields: np.ndarray,
                     side: str = "z") -> Variation:
    """Cartan-valued variation: sum_j fields[j] h_j on the dz (or dzbar) leg."""
    l = cb.rank
    N = fields.shape[1]
    a = _zeros(cb, N)
    for j in range(l):
        a[cb.h_index(j)] = fields[j]
    zero = _zeros(cb, N)
    if side == "z":
        return Variation(basis=cb, a_z=a, a_zbar=zero, provenance="cartan-direction")
    return Variation(basis=cb, a_z=zero, a_zbar=a, provenance="cartan-direction")


def variation_g1(cb: ChevalleyBasis, fields: np.ndarray, side: str = "zbar") -> Variation:
    """Height-one variation: sum_i fields[i] x_{alpha_i} on the chosen leg."""
    rs = cb.root_system
    N = fields.shape[1]
    a = _zeros(cb, N)
    for i, alpha in enumerate(rs.simple_roots):
        a[cb.x_index(alpha)] = fields[i]
    zero = _zeros(cb, N)
    if side == "zbar":
        return Variation(basis=cb, a_z=zero, a_zbar=a, provenance="raw")
    return Variation(basis=cb, a_z=a, a_zbar=zero, provenance="raw")


def nu_delta(cb: ChevalleyBasis, scale: float = 1.0) -> float:
    """nu(x_delta, x_{-delta}) in the adjoint trace form (times scale)."""
    rs = cb.root_system
    G = cb.killing_form_matrix(scale)
    i = cb.x_index(rs.highest_root)
    j = cb.x_index(rs.neg(rs.highest_root))
    return float(np.real_if_close(G[i, j]))


def fiber_pairing_closed_form(cb: ChevalleyBasis, td: TodaData,
                              q1dot: np.ndarray, q2dot: np.ndarray,
                              metric, scale: float = 1.0) -> complex:
    """U_{-delta} nu(x_delta, x_{-delta})
    * integral of q1dot q2dot / lam^(d-1) dz wedge dzbar, on Fuchsian data."""
    if float(np.max(np.abs(metric.m))) > 1e-12:
        raise PreconditionError("fiber closed form requires mu = 0 (Fuchsian-type data)")
    N = q1dot.shape[0]
    vm = v_minus_delta(td, np.zeros((td.rank, N, N), dtype=complex))
    nu = nu_delta(cb, scale)
    integrand = q1dot * q2dot / metric.lam ** (td.d - 1)
    # the v_{-delta} weight is constant at u = 0
    return complex(float(vm[0, 0].real) * nu
                   * np.sum(integrand) * (-2j) * metric.chart.cell_area)


def lagrangian_check(va: Variation, vb: Variation, scale: float = 1.0) -> float:
    """Max pointwise |nu wedge density| of two variations (0 for same-side pairs)."""
    return float(np.max(np.abs(pairing_density(va, vb, scale))))
