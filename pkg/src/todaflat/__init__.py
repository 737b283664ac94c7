"""todaflat: Lie-theoretic data, complex affine Toda solvers, flat connections,
and symplectic pairing checks on periodic coordinate charts."""

__version__ = "0.1.0"
