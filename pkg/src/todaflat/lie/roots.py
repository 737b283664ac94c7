"""Root systems for the split simple types A/B/C/D (rank <= 4) and G2.

Roots are stored as integer coefficient tuples in the simple-root basis.
Everything here is exact integer / rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


class ConfigurationError(ValueError):
    """Unsupported (type, rank) combination or invalid root-system input."""


#: Cartan matrices C with C[i][j] = <alpha_j, alpha_i^vee> = alpha_j(h_i).
def _cartan_matrix(cartan_type: str, rank: int) -> list[list[int]]:
    l = rank
    if cartan_type == "A":
        C = [[0] * l for _ in range(l)]
        for i in range(l):
            C[i][i] = 2
            if i + 1 < l:
                C[i][i + 1] = -1
                C[i + 1][i] = -1
        return C
    if cartan_type in ("B", "C"):
        # B_l: alpha_l short; C_l: alpha_l long.  Rank >= 2.
        C = _cartan_matrix("A", l)
        if cartan_type == "B":
            # B_l: last simple root short, so <alpha_{l-2}, alpha_{l-1}^vee> = -2.
            C[l - 1][l - 2] = -2
            C[l - 2][l - 1] = -1
        else:
            C[l - 1][l - 2] = -1
            C[l - 2][l - 1] = -2
        return C
    if cartan_type == "D":
        # Fork at node l-3 (0-based): nodes l-2 and l-1 both attach to l-3.
        C = [[0] * l for _ in range(l)]
        for i in range(l):
            C[i][i] = 2
        for i in range(l - 3):
            C[i][i + 1] = C[i + 1][i] = -1
        C[l - 3][l - 2] = C[l - 2][l - 3] = -1
        C[l - 3][l - 1] = C[l - 1][l - 3] = -1
        return C
    if cartan_type == "G":
        # alpha_1 short, alpha_2 long: <alpha_2, alpha_1^vee> = -3.
        return [[2, -3], [-1, 2]]
    raise ConfigurationError(f"unsupported Cartan type {cartan_type!r}")


def _symmetrizer(C: list[list[int]]) -> list[Fraction]:
    """Positive d_i with d_i C[i][j] = d_j C[j][i]; d_i = (alpha_i, alpha_i)/2."""
    l = len(C)
    d: list[Fraction | None] = [None] * l
    d[0] = Fraction(1)
    changed = True
    while changed:
        changed = False
        for i in range(l):
            for j in range(l):
                if i != j and C[i][j] != 0 and d[i] is not None and d[j] is None:
                    d[j] = d[i] * Fraction(C[i][j], C[j][i])
                    changed = True
    if any(x is None for x in d):
        raise ConfigurationError("Cartan matrix is not connected")
    scale = 1
    for x in d:
        scale = scale * x.denominator // _gcd(scale, x.denominator)
    out = [x * scale for x in d]
    m = min(out)
    return [x / m for x in out]


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


_SUPPORTED = {
    ("A", 1), ("A", 2), ("A", 3), ("A", 4),
    ("B", 2), ("B", 3), ("B", 4),
    ("C", 2), ("C", 3), ("C", 4),
    ("D", 3), ("D", 4),
    ("G", 2),
}


@dataclass(frozen=True)
class RootSystem:
    cartan_type: str
    rank: int
    cartan_matrix: tuple[tuple[int, ...], ...]  # [i][j] = alpha_j(h_i)
    symmetrizer: tuple[Fraction, ...]           # d_i = (alpha_i, alpha_i)/2
    positive_roots: tuple[tuple[int, ...], ...]  # sorted by (height, lex)
    highest_root: tuple[int, ...]
    _root_set: frozenset[tuple[int, ...]] = field(repr=False, default=frozenset())

    # ---- basic queries -------------------------------------------------
    @property
    def roots(self) -> list[tuple[int, ...]]:
        return list(self.positive_roots) + [self.neg(r) for r in self.positive_roots]

    @property
    def simple_roots(self) -> list[tuple[int, ...]]:
        return list(self.positive_roots[: self.rank])

    def is_root(self, r: tuple[int, ...]) -> bool:
        return r in self._root_set

    @staticmethod
    def neg(r: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(-c for c in r)

    @staticmethod
    def add(r: tuple[int, ...], s: tuple[int, ...]) -> tuple[int, ...]:
        return tuple(a + b for a, b in zip(r, s))

    @staticmethod
    def height(r: tuple[int, ...]) -> int:
        return sum(r)

    @property
    def heights(self) -> dict[tuple[int, ...], int]:
        return {r: self.height(r) for r in self.roots}

    @property
    def coxeter_number(self) -> int:
        return self.height(self.highest_root) + 1

    @property
    def highest_root_coefficients(self) -> tuple[int, ...]:
        """The coefficients n_alpha of the highest root."""
        return self.highest_root

    # ---- bilinear form -------------------------------------------------
    def inner(self, r: tuple[int, ...], s: tuple[int, ...]) -> Fraction:
        """(r, s) with (alpha_i, alpha_j) = d_i * C[i][j]."""
        total = Fraction(0)
        for i, a in enumerate(r):
            if a == 0:
                continue
            for j, b in enumerate(s):
                if b == 0:
                    continue
                total += a * b * self.symmetrizer[i] * self.cartan_matrix[i][j]
        return total

    def pairing(self, r: tuple[int, ...], s: tuple[int, ...]) -> int:
        """<r, s^vee> = 2 (r, s) / (s, s) = r(h_s); always an integer."""
        v = 2 * self.inner(r, s) / self.inner(s, s)
        assert v.denominator == 1
        return int(v)

    def coroot_coefficients(self, r: tuple[int, ...]) -> tuple[int, ...]:
        """Integers c_i with h_r = sum_i c_i h_i (coroot in simple-coroot basis)."""
        d_r = self.inner(r, r) / 2
        out = []
        for i, k in enumerate(r):
            c = Fraction(k) * self.symmetrizer[i] / d_r
            assert c.denominator == 1
            out.append(int(c))
        return tuple(out)

    def p_string(self, r: tuple[int, ...], s: tuple[int, ...]) -> int:
        """Largest p >= 0 with s - p*r a root (the r-string through s, down side)."""
        p = 0
        cur = self.add(s, self.neg(r))
        while self.is_root(cur):
            p += 1
            cur = self.add(cur, self.neg(r))
        return p


def build_root_system(cartan_type: str, rank: int) -> RootSystem:
    """Construct the root system from the Cartan matrix by root-string closure."""
    if (cartan_type, rank) not in _SUPPORTED:
        raise ConfigurationError(
            f"unsupported type/rank ({cartan_type}, {rank}); supported: "
            f"A1-A4, B2-B4, C2-C4, D3-D4, G2"
        )
    C = _cartan_matrix(cartan_type, rank)
    d = _symmetrizer(C)
    l = rank

    def inner(r, s):
        return sum(
            a * b * d[i] * C[i][j]
            for i, a in enumerate(r) for j, b in enumerate(s)
            if a and b
        )

    simple = [tuple(1 if j == i else 0 for j in range(l)) for i in range(l)]
    roots: set[tuple[int, ...]] = set(simple)
    frontier = list(simple)
    while frontier:
        new: list[tuple[int, ...]] = []
        for beta in frontier:
            for i, alpha in enumerate(simple):
                # beta + alpha is a root iff p - <beta, alpha^vee> > 0,
                # p = max k with beta - k*alpha in roots.
                p = 0
                cur = tuple(b - a for b, a in zip(beta, alpha))
                while cur in roots or cur == tuple([0] * l):
                    if cur == tuple([0] * l):
                        break
                    p += 1
                    cur = tuple(b - a for b, a in zip(cur, alpha))
                pair = 2 * inner(beta, alpha) / inner(alpha, alpha)
                if p - pair > 0:
                    cand = tuple(b + a for b, a in zip(beta, alpha))
                    if cand not in roots:
                        roots.add(cand)
                        new.append(cand)
        frontier = new

    positive = sorted(roots, key=lambda r: (sum(r), r))
    # re-sort so the simple roots come first in index order
    positive = simple + [r for r in positive if r not in set(simple)]
    positive[l:] = sorted(positive[l:], key=lambda r: (sum(r), r))
    highest = positive[-1]
    max_h = sum(highest)
    if sum(1 for r in positive if sum(r) == max_h) != 1:
        raise ConfigurationError("highest root is not unique")
    all_roots = frozenset(list(roots) + [tuple(-c for c in r) for r in roots])
    return RootSystem(
        cartan_type=cartan_type,
        rank=rank,
        cartan_matrix=tuple(tuple(row) for row in C),
        symmetrizer=tuple(d),
        positive_roots=tuple(positive),
        highest_root=highest,
        _root_set=all_roots,
    )


def xi_permutation(rs: RootSystem) -> tuple[int, ...]:
    """The simple-root permutation induced by -w0 (Dynkin-diagram involution).

    Nontrivial only for A_l (l >= 2) and D_l with l odd among supported types.
    """
    l = rs.rank
    if rs.cartan_type == "A" and l >= 2:
        return tuple(l - 1 - i for i in range(l))
    if rs.cartan_type == "D" and l % 2 == 1:
        perm = list(range(l))
        perm[l - 2], perm[l - 1] = perm[l - 1], perm[l - 2]
        return tuple(perm)
    return tuple(range(l))
