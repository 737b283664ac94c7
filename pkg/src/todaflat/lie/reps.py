"""Defining (standard) matrix representations for A and C types.

The representation maps the Chevalley basis of this package — with the
minus convention [x_r, x_{-r}] = -h_r — into sl(l+1) resp. sp(2l):
simple positive root vectors go to the standard raising matrices, and
negative simple root vectors pick up a sign, rho(x_{-a_i}) = -f_i, so
that [rho(x_a), rho(x_{-a})] = -rho(h_a).  Non-simple root vectors are
generated by bracket recursion against the exact structure constants.
"""

from __future__ import annotations

import numpy as np

from .chevalley import ChevalleyBasis


class UnsupportedFeatureError(NotImplementedError):
    """Requested feature is not available for this Lie type."""


def _sl_generators(l: int):
    n = l + 1
    e, f, h = [], [], []
    for i in range(l):
        E = np.zeros((n, n), dtype=complex)
        E[i, i + 1] = 1.0
        F = np.zeros((n, n), dtype=complex)
        F[i + 1, i] = 1.0
        H = np.zeros((n, n), dtype=complex)
        H[i, i] = 1.0
        H[i + 1, i + 1] = -1.0
        e.append(E)
        f.append(F)
        h.append(H)
    return e, f, h


def _sp_generators(l: int):
    # sp(2l) preserving the form J = [[0, I], [-I, 0]]; basis ordering
    # (v_1..v_l, v_{l+1}..v_{2l}); the last simple root is the long one.
    n = 2 * l

    def E(i, j):
        M = np.zeros((n, n), dtype=complex)
        M[i, j] = 1.0
        return M

    e, f, h = [], [], []
    for i in range(l - 1):
        e.append(E(i, i + 1) - E(l + i + 1, l + i))
        f.append(E(i + 1, i) - E(l + i, l + i + 1))
        h.append(E(i, i) - E(i + 1, i + 1) - E(l + i, l + i) + E(l + i + 1, l + i + 1))
    e.append(E(l - 1, 2 * l - 1))
    f.append(E(2 * l - 1, l - 1))
    h.append(E(l - 1, l - 1) - E(2 * l - 1, 2 * l - 1))
    return e, f, h


def defining_representation(cb: ChevalleyBasis) -> np.ndarray:
    """Matrices rho(basis_k), shape (dim_g, n, n), in the standard rep.

    Supported for types A and C; G (and B/D) raise UnsupportedFeatureError.
    """
    rs = cb.root_system
    l = rs.rank
    if rs.cartan_type == "A":
        e, f, h = _sl_generators(l)
    elif rs.cartan_type == "C":
        e, f, h = _sp_generators(l)
    else:
        raise UnsupportedFeatureError(
            f"no defining representation for type {rs.cartan_type}"
        )
    n = e[0].shape[0]
    rho = np.zeros((cb.dim, n, n), dtype=complex)
    for i in range(l):
        rho[cb.h_index(i)] = h[i]
        rho[cb.x_index(rs.simple_roots[i])] = e[i]
        rho[cb.x_index(rs.neg(rs.simple_roots[i]))] = -f[i]

    def comm(A, B):
        return A @ B - B @ A

    # positive roots by increasing height, then their negatives
    for root in sorted(rs.positive_roots, key=sum):
        if sum(root) == 1:
            continue
        for i, alpha in enumerate(rs.simple_roots):
            rest = rs.add(root, rs.neg(alpha))
            if rs.is_root(rest):
                N = cb.structure_constants[(alpha, rest)]
                rho[cb.x_index(root)] = comm(
                    rho[cb.x_index(alpha)], rho[cb.x_index(rest)]
                ) / N
                nalpha, nrest = rs.neg(alpha), rs.neg(rest)
                Nn = cb.structure_constants[(nalpha, nrest)]
                rho[cb.x_index(rs.neg(root))] = comm(
                    rho[cb.x_index(nalpha)], rho[cb.x_index(nrest)]
                ) / Nn
                break
        else:
            raise RuntimeError(f"root {root} has no simple summand")
    return rho


def rep_matrix(rho: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Matrix of the element with coefficient vector X."""
    return np.einsum("k,kij->ij", X, rho)


def invariant_poly_eval(cb: ChevalleyBasis, element: np.ndarray) -> np.ndarray:
    """Values of the l homogeneous invariant generators at the element.

    Evaluated as traces of powers of the defining-representation matrix:
    degrees 2..l+1 for type A, degrees 2, 4, ..., 2l for type C.
    """
    rs = cb.root_system
    rho = defining_representation(cb)
    M = rep_matrix(rho, element)
    if rs.cartan_type == "A":
        degrees = range(2, rs.rank + 2)
    else:  # C
        degrees = range(2, 2 * rs.rank + 1, 2)
    out = []
    P = M
    k = 1
    for deg in degrees:
        while k < deg:
            P = P @ M
            k += 1
        out.append(np.trace(P))
    return np.array(out, dtype=complex)
