"""Principal sl2 triples, Toda coefficient tables, highest-weight vectors."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .chevalley import ChevalleyBasis
from .roots import RootSystem, xi_permutation


@dataclass(frozen=True)
class PrincipalTriple:
    """(x, e, etilde) with [x,e]=e, [x,etilde]=-etilde, [e,etilde]=x.

    x = sum_a r_a h_a; e = sum_a r_a^{1/2} x_a; etilde = -sum_a r_a^{1/2} x_{-a}
    (the sign on etilde makes the triple relations hold in the minus-convention
    Chevalley basis and is propagated consistently downstream).
    """

    basis: ChevalleyBasis
    r: tuple[Fraction, ...]
    x: np.ndarray
    e: np.ndarray
    etilde: np.ndarray


def principal_triple(cb: ChevalleyBasis) -> PrincipalTriple:
    rs = cb.root_system
    l = rs.rank
    # alpha_i(x) = 1 for all i:  sum_j r_j alpha_i(h_j) = 1.
    C = np.array(rs.cartan_matrix, dtype=float)  # C[i][j] = alpha_j(h_i)
    r = np.linalg.solve(C.T, np.ones(l))
    r_frac = tuple(Fraction(v).limit_denominator(64) for v in r)
    assert all(abs(float(f) - v) < 1e-12 for f, v in zip(r_frac, r))
    x = cb.zeros()
    e = cb.zeros()
    et = cb.zeros()
    for i in range(l):
        x[cb.h_index(i)] = float(r_frac[i])
        sq = np.sqrt(float(r_frac[i]))
        e[cb.x_index(rs.simple_roots[i])] = sq
        et[cb.x_index(rs.neg(rs.simple_roots[i]))] = -sq
    # cross-check x = (1/2) sum over positive roots of h_alpha
    xs = cb.zeros()
    for rt in rs.positive_roots:
        for i, ci in enumerate(rs.coroot_coefficients(rt)):
            xs[cb.h_index(i)] += 0.5 * ci
    if np.max(np.abs(xs - x)) > 1e-12:
        raise RuntimeError("principal grading element mismatch")
    return PrincipalTriple(basis=cb, r=r_frac, x=x, e=e, etilde=et)


@dataclass(frozen=True)
class TodaData:
    """All scalar coefficients of the Toda system for one Lie type."""

    cartan_type: str
    rank: int
    d: int                       # Coxeter number
    r: tuple[Fraction, ...]      # positive half-integers, x = sum r_a h_a
    n: tuple[int, ...]           # highest-root coefficients
    a: dict                      # (i, j) and (i, "delta") -> affine Cartan numbers
    xi: tuple[int, ...]          # simple-root permutation (involution)
    invariant_form_scale: float

    def a_matrix(self, convention: str = "cartan") -> np.ndarray:
        """Aggregation matrix M[i][j] = a-convention value of alpha_i(h_j).

        "cartan": signed values 2(a_i, a_j)/(a_j, a_j) (oracle-selected);
        "abs-offdiag": absolute values off the diagonal.
        """
        l = self.rank
        M = np.zeros((l, l))
        for i in range(l):
            for j in range(l):
                M[i, j] = self._pair[i, j]
        if convention == "abs-offdiag":
            off = ~np.eye(l, dtype=bool)
            M[off] = np.abs(M[off])
        elif convention != "cartan":
            raise ValueError(f"unknown a-convention {convention!r}")
        return M

    def a_delta(self) -> np.ndarray:
        """Vector alpha_i(h_delta) = 2(a_i, delta)/(delta, delta) ... transposed
        pairing; stored as the i-th simple root against the highest coroot."""
        return self._pair_delta

    # filled at construction time
    _pair: np.ndarray = None
    _pair_delta: np.ndarray = None


def toda_coefficients(cb: ChevalleyBasis, pt: PrincipalTriple,
                      invariant_form_scale: float = 1.0) -> TodaData:
    rs = cb.root_system
    l = rs.rank
    delta = rs.highest_root
    a: dict = {}
    for i, ai in enumerate(rs.simple_roots):
        for j, aj in enumerate(rs.simple_roots):
            a[(i, j)] = rs.pairing(aj, ai)   # a_{ij} = 2(a_i,a_j)/(a_i,a_i)
        a[(i, "delta")] = rs.pairing(delta, ai)
    pair = np.zeros((l, l))
    pair_delta = np.zeros(l)
    for i, ai in enumerate(rs.simple_roots):
        for j, aj in enumerate(rs.simple_roots):
            pair[i, j] = rs.pairing(ai, aj)   # alpha_i(h_j)
        pair_delta[i] = rs.pairing(ai, delta)  # alpha_i(h_delta)
    td = TodaData(
        cartan_type=rs.cartan_type,
        rank=l,
        d=rs.coxeter_number,
        r=pt.r,
        n=delta,
        a=a,
        xi=xi_permutation(rs),
        invariant_form_scale=invariant_form_scale,
    )
    object.__setattr__(td, "_pair", pair)
    object.__setattr__(td, "_pair_delta", pair_delta)
    return td


@dataclass(frozen=True)
class HighestWeightVectors:
    """Vectors e_1..e_l spanning the centralizer of e, graded by height.

    e_i lies in the height-(m_i - 1) graded piece, where m_i are the exponents
    plus one (the degrees of the invariant generators); e_1 = e and e_l = x_delta.
    """

    vectors: tuple[np.ndarray, ...]
    weights: tuple[int, ...]  # heights m_i - 1


def highest_weight_vectors(cb: ChevalleyBasis, pt: PrincipalTriple) -> HighestWeightVectors:
    rs = cb.root_system
    ad_e = cb.ad(pt.e)
    vectors: list[np.ndarray] = []
    weights: list[int] = []
    d = rs.coxeter_number
    heights = {("h", i): 0 for i in range(rs.rank)}
    for r in rs.roots:
        heights[("x", r)] = sum(r)
    for m in range(0, d):
        idxs = [k for k, lab in enumerate(cb.labels) if heights[lab] == m]
        if not idxs:
            continue
        # restrict ad(e) to the height-m piece; its image lies in height m+1
        sub = ad_e[:, idxs]
        _, sv, vt = np.linalg.svd(sub, full_matrices=True)
        sv = np.concatenate([sv, np.zeros(len(idxs) - len(sv))])
        for krow in np.nonzero(sv < 1e-10)[0]:
            vec = cb.zeros()
            vec[idxs] = np.conj(vt[krow])
            vectors.append(vec)
            weights.append(m)
    order = np.argsort(weights, kind="stable")
    vectors = [vectors[i] for i in order]
    weights = [weights[i] for i in order]
    if len(vectors) != rs.rank:
        raise RuntimeError("centralizer of e has wrong dimension")
    # normalize endpoints exactly: e_1 = e, e_l = x_delta
    vectors[0] = pt.e.copy()
    if rs.rank >= 2:
        top = cb.zeros()
        top[cb.x_index(rs.highest_root)] = 1.0
        vectors[-1] = top
    return HighestWeightVectors(vectors=tuple(vectors), weights=tuple(weights))
