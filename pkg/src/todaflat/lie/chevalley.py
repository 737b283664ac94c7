"""Chevalley bases with exact integer structure constants.

The basis is {h_1..h_l} followed by {x_r} over all roots r, positive roots
first (height/lex order), then their negatives in the mirrored order.  The
bracket convention is

    [h_i, x_r] = r(h_i) x_r,      [x_r, x_{-r}] = -h_r,
    [x_r, x_s] = N_{r,s} x_{r+s}  (r + s a root),

i.e. the minus-sign normalization on opposite root vectors.  Internally a
standard-normalized basis ([e_r, e_{-r}] = +h_r) is built with structure
constants fixed by the extraspecial-pair convention, and every negative-root
vector is then flipped (x_r = -e_r for r < 0), which produces the minus
convention uniformly while keeping all constants integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .roots import RootSystem


class StructureConstantError(RuntimeError):
    """Internal consistency failure while resolving structure-constant signs."""


Root = tuple[int, ...]


def _standard_constants(rs: RootSystem) -> dict[tuple[Root, Root], int]:
    """All N_{r,s} (r+s a root) in the standard [e_r,e_{-r}]=+h_r convention.

    Extraspecial pairs get N = p+1 > 0; everything else follows from
    antisymmetry, negation, and the cyclic / four-root relations of the
    invariant form.  Exact rational arithmetic throughout.
    """
    pos = list(rs.positive_roots)
    order = {r: i for i, r in enumerate(pos)}
    memo: dict[tuple[Root, Root], Fraction] = {}

    def sq(r: Root) -> Fraction:
        return rs.inner(r, r)

    def extraspecial(gamma: Root) -> tuple[Root, Root]:
        for a in pos:
            if order[a] >= order[gamma]:
                break
            b = rs.add(gamma, rs.neg(a))
            if rs.is_root(b) and sum(b) > 0 and order[a] <= order[b]:
                return a, b
        raise StructureConstantError(f"no extraspecial pair for {gamma}")

    def N(r: Root, s: Root) -> Fraction:
        if (r, s) in memo:
            return memo[(r, s)]
        val = _resolve(r, s)
        memo[(r, s)] = val
        memo[(s, r)] = -val
        return val

    def _resolve(r: Root, s: Root) -> Fraction:
        t = rs.neg(rs.add(r, s))  # r + s + t = 0
        rpos, spos = sum(r) > 0, sum(s) > 0
        if not rpos and not spos:
            return -N(rs.neg(r), rs.neg(s))
        if rpos != spos:
            # Reduce via the cyclic relation N(r,s)/|t|^2 = N(s,t)/|r|^2
            # = N(t,r)/|s|^2 to the same-sign cyclic pair.
            tpos = sum(t) > 0
            if spos == tpos:
                return N(s, t) * sq(t) / sq(r)
            if rpos == tpos:
                return N(t, r) * sq(t) / sq(s)
            raise StructureConstantError("no same-sign cyclic pair")
        # both positive
        if order[r] > order[s]:
            return -N(s, r)
        gamma = rs.add(r, s)
        eps, eta = extraspecial(gamma)
        if (r, s) == (eps, eta):
            return Fraction(rs.p_string(r, s) + 1)
        # four-root relation on (eps, eta, -r, -s):
        #   N(eps,eta) N(-r,-s)/|gamma|^2 + N(eta,-r) N(eps,-s)/|eta-r|^2
        #     + N(-r,eps) N(eta,-s)/|eps-r|^2 = 0,  N(-r,-s) = -N(r,s).
        acc = Fraction(0)
        d1 = rs.add(eta, rs.neg(r))
        if rs.is_root(d1):
            acc += N(eta, rs.neg(r)) * N(eps, rs.neg(s)) / sq(d1)
        d2 = rs.add(eps, rs.neg(r))
        if rs.is_root(d2):
            acc += N(rs.neg(r), eps) * N(eta, rs.neg(s)) / sq(d2)
        return acc * sq(gamma) / N(eps, eta)

    out: dict[tuple[Root, Root], int] = {}
    allroots = rs.roots
    for r in allroots:
        for s in allroots:
            if rs.is_root(rs.add(r, s)):
                v = N(r, s)
                if v.denominator != 1 or v == 0:
                    raise StructureConstantError(f"bad N[{r},{s}] = {v}")
                out[(r, s)] = int(v)
    return out


@dataclass(frozen=True)
class ChevalleyBasis:
    root_system: RootSystem
    index: dict  # basis label -> position; labels: ("h", i) and ("x", root)
    labels: tuple
    structure_constants: dict  # (root, root) -> int, minus-convention N_{r,s}
    adjoint_matrices: np.ndarray  # (dim, dim, dim): adjoint_matrices[k] = ad(basis_k)

    # ---- shape ----------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def rank(self) -> int:
        return self.root_system.rank

    def h_index(self, i: int) -> int:
        return self.index[("h", i)]

    def x_index(self, r: Root) -> int:
        return self.index[("x", r)]

    def zeros(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=complex)

    def element(self, coeffs: dict) -> np.ndarray:
        v = self.zeros()
        for label, c in coeffs.items():
            v[self.index[label]] = c
        return v

    # ---- bracket ---------------------------------------------------------
    def bracket_table(self) -> np.ndarray:
        """Structure tensor T with [b_a, b_b] = sum_c T[a, b, c] b_c."""
        return self._tensor

    @property
    def _tensor(self) -> np.ndarray:
        if not hasattr(self, "_tensor_cache"):
            object.__setattr__(self, "_tensor_cache", _build_tensor(self))
        return getattr(self, "_tensor_cache")

    def bracket(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        T = self._tensor
        return np.einsum("abc,a,b->c", T, X, Y)

    def ad(self, X: np.ndarray) -> np.ndarray:
        """Matrix of ad(X) acting on coefficient vectors."""
        T = self._tensor
        return np.einsum("abc,a->cb", T, X)

    # ---- invariant form ----------------------------------------------------
    def killing_form_matrix(self, scale: float = 1.0) -> np.ndarray:
        """Gram matrix of nu(X, Y) = scale * tr(ad X ad Y) on the basis."""
        T = self._tensor
        ads = np.einsum("abc->acb", T)  # ads[k] = ad(basis_k) as (dim, dim)
        G = np.einsum("aij,bji->ab", ads, ads)
        return scale * G

    def root_of_index(self, k: int):
        lab = self.labels[k]
        return lab[1] if lab[0] == "x" else None


def _build_tensor(cb: ChevalleyBasis) -> np.ndarray:
    rs = cb.root_system
    dim = cb.dim
    T = np.zeros((dim, dim, dim))
    roots = rs.roots
    # [h_i, x_r] = r(h_i) x_r
    for i in range(rs.rank):
        hi = cb.h_index(i)
        for r in roots:
            xr = cb.x_index(r)
            alpha_i = rs.simple_roots[i]
            c = rs.pairing(r, alpha_i)
            T[hi, xr, xr] += c
            T[xr, hi, xr] -= c
    for r in roots:
        xr = cb.x_index(r)
        # [x_r, x_{-r}] = -h_r
        cr = rs.coroot_coefficients(r)
        xnr = cb.x_index(rs.neg(r))
        for i, ci in enumerate(cr):
            T[xr, xnr, cb.h_index(i)] += -ci
        for s in roots:
            tsum = rs.add(r, s)
            if rs.is_root(tsum):
                T[xr, cb.x_index(s), cb.x_index(tsum)] += cb.structure_constants[(r, s)]
    return T


def build_chevalley_basis(rs: RootSystem) -> ChevalleyBasis:
    std = _standard_constants(rs)

    def sgn(r: Root) -> int:
        return 1 if sum(r) > 0 else -1

    # flip negative-root vectors: x_r = sgn(r) e_r
    flipped = {
        (r, s): sgn(r) * sgn(s) * sgn(rs.add(r, s)) * v for (r, s), v in std.items()
    }

    pos = list(rs.positive_roots)
    roots_order = pos + [rs.neg(r) for r in pos]
    labels = tuple([("h", i) for i in range(rs.rank)] + [("x", r) for r in roots_order])
    index = {lab: k for k, lab in enumerate(labels)}
    cb = ChevalleyBasis(
        root_system=rs,
        index=index,
        labels=labels,
        structure_constants=flipped,
        adjoint_matrices=np.empty(0),
    )
    T = _build_tensor(cb)
    ads = np.einsum("abc->acb", T)
    object.__setattr__(cb, "adjoint_matrices", ads)
    return cb


def jacobi_defect(cb: ChevalleyBasis) -> int:
    """Max |Jacobi identity defect| over all basis triples, exact integers."""
    T = cb._tensor
    Ti = np.rint(T).astype(np.int64)
    if not np.array_equal(Ti, T):
        raise StructureConstantError("non-integer structure tensor")
    # J[a,b,c,:] = [[a,b],c] + [[b,c],a] + [[c,a],b]
    t1 = np.einsum("abd,dce->abce", Ti, Ti)
    t2 = np.einsum("bcd,dae->abce", Ti, Ti)
    t3 = np.einsum("cad,dbe->abce", Ti, Ti)
    return int(np.abs(t1 + t2 + t3).max())


def killing_form(cb: ChevalleyBasis, scale: float = 1.0):
    """Return nu(X, Y) as a callable on coefficient vectors."""
    G = cb.killing_form_matrix(scale)

    def nu(X: np.ndarray, Y: np.ndarray) -> complex:
        return complex(X @ G @ Y)

    return nu
