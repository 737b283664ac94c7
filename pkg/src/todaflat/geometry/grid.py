"""Discretized coordinate charts with complex differentiation backends.

Two chart kinds:

- GridChart: the periodic unit square [0,1)^2, z = x + iy, with a spectral
  (FFT) or wrapped 4th-order finite-difference backend.
- PatchChart: a non-periodic square patch with centered 4th-order finite
  differences; derivative values are valid only on interior nodes, exposed
  through interior_mask().

Fields are complex (N, N) arrays indexed [iy, ix] (row-major: y first).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class BackendError(ValueError):
    """Unknown differentiation backend."""


@dataclass(frozen=True)
class GridChart:
    N: int
    backend: str = "spectral"  # spectral | fd4
    _k: np.ndarray = field(repr=False, default=None, compare=False)

    def __post_init__(self):
        if self.N < 8 or self.N % 2:
            raise ValueError("grid resolution must be even and >= 8")
        if self.backend not in ("spectral", "fd4"):
            raise BackendError(f"unknown backend {self.backend!r}")
        object.__setattr__(self, "_k", 2j * np.pi * np.fft.fftfreq(self.N, d=1.0 / self.N))

    @property
    def spacing(self) -> float:
        return 1.0 / self.N

    @property
    def cell_area(self) -> float:
        return self.spacing ** 2

    @property
    def periodic(self) -> bool:
        return True

    def nodes(self):
        """(x, y) coordinate arrays, each (N, N)."""
        t = np.arange(self.N) / self.N
        x, y = np.meshgrid(t, t, indexing="xy")
        return x, y

    def z(self) -> np.ndarray:
        x, y = self.nodes()
        return x + 1j * y

    # ---- derivatives ----------------------------------------------------
    def dx(self, f: np.ndarray) -> np.ndarray:
        if self.backend == "spectral":
            return np.fft.ifft(self._k[None, :] * np.fft.fft(f, axis=1), axis=1)
        return _fd4(f, axis=1, h=self.spacing)

    def dy(self, f: np.ndarray) -> np.ndarray:
        if self.backend == "spectral":
            return np.fft.ifft(self._k[:, None] * np.fft.fft(f, axis=0), axis=0)
        return _fd4(f, axis=0, h=self.spacing)

    def dz(self, f: np.ndarray) -> np.ndarray:
        return 0.5 * (self.dx(f) - 1j * self.dy(f))

    def dzbar(self, f: np.ndarray) -> np.ndarray:
        return 0.5 * (self.dx(f) + 1j * self.dy(f))

    def antiderivative_z(self, f: np.ndarray) -> np.ndarray:
        """Periodic g with dz g = f - mean(f), spectral inversion, mean(g) = 0."""
        F = np.fft.fft2(f)
        kx = self._k[None, :]
        ky = self._k[:, None]
        sym = 0.5 * (kx + (-1j) * ky)  # symbol of d/dz
        with np.errstate(divide="ignore", invalid="ignore"):
            G = np.where(np.abs(sym) > 1e-13, F / sym, 0.0)
        return np.fft.ifft2(G)

    def interior_mask(self, margin: int = 0) -> np.ndarray:
        return np.ones((self.N, self.N), dtype=bool)


def _fd4(f: np.ndarray, axis: int, h: float) -> np.ndarray:
    r1 = np.roll(f, -1, axis=axis) - np.roll(f, 1, axis=axis)
    r2 = np.roll(f, -2, axis=axis) - np.roll(f, 2, axis=axis)
    return (8.0 * r1 - r2) / (12.0 * h)


@dataclass(frozen=True)
class PatchChart:
    """Non-periodic square [x0, x1]^2 with centered 4th-order differences.

    Each centered derivative invalidates a 2-node margin; callers track the
    accumulated margin via interior_mask(margin).
    """

    N: int
    x0: float = -0.3
    x1: float = 0.3

    def __post_init__(self):
        if self.N < 8:
            raise ValueError("patch resolution must be >= 8")

    @property
    def spacing(self) -> float:
        return (self.x1 - self.x0) / (self.N - 1)

    @property
    def periodic(self) -> bool:
        return False

    def nodes(self):
        t = np.linspace(self.x0, self.x1, self.N)
        x, y = np.meshgrid(t, t, indexing="xy")
        return x, y

    def z(self) -> np.ndarray:
        x, y = self.nodes()
        return x + 1j * y

    def dx(self, f: np.ndarray) -> np.ndarray:
        out = np.zeros_like(f, dtype=complex)
        out[:, 2:-2] = (
            8.0 * (f[:, 3:-1] - f[:, 1:-3]) - (f[:, 4:] - f[:, :-4])
        ) / (12.0 * self.spacing)
        return out

    def dy(self, f: np.ndarray) -> np.ndarray:
        out = np.zeros_like(f, dtype=complex)
        out[2:-2, :] = (
            8.0 * (f[3:-1, :] - f[1:-3, :]) - (f[4:, :] - f[:-4, :])
        ) / (12.0 * self.spacing)
        return out

    def dz(self, f: np.ndarray) -> np.ndarray:
        return 0.5 * (self.dx(f) - 1j * self.dy(f))

    def dzbar(self, f: np.ndarray) -> np.ndarray:
        return 0.5 * (self.dx(f) + 1j * self.dy(f))

    def interior_mask(self, margin: int = 2) -> np.ndarray:
        m = np.zeros((self.N, self.N), dtype=bool)
        m[margin:self.N - margin, margin:self.N - margin] = True
        return m
