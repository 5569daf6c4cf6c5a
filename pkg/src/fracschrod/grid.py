"""Uniform periodic grids and the discrete L2 / Sobolev machinery.

Everything downstream (mollifiers, operators, time steppers, observables)
lives on a uniform one-dimensional grid whose resolution is a power of two,
so the FFT wavenumber ladder is always available.  The right endpoint is
identified with the left one: nodes are x_j = x_min + j*dx for j = 0..n-1
with dx = (x_max - x_min)/n, and every node carries quadrature weight dx.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "Grid",
    "ComplexField",
    "RealField",
    "make_grid",
    "l2_norm",
    "inner_product",
    "spectral_coefficients",
    "inverse_spectral",
    "hs_seminorm",
    "require_same_grid",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Grid:
    """Uniform nodes on [x_min, x_max) with periodic identification."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self) -> None:
        if not (np.isfinite(self.x_min) and np.isfinite(self.x_max)):
            raise ValueError("grid endpoints must be finite")
        if self.x_max <= self.x_min:
            raise ValueError(
                f"empty domain: x_max={self.x_max} must exceed x_min={self.x_min}"
            )
        if self.n < 8 or (self.n & (self.n - 1)) != 0:
            # power of two keeps the transform ladder exact for the spectral backend
            raise ValueError(f"n must be a power of two >= 8, got {self.n}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @cached_property
    def nodes(self) -> np.ndarray:
        return _readonly(self.x_min + self.dx * np.arange(self.n))

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Signed ladder 2*pi*k/L in FFT order; the Nyquist mode sits at -pi*n/L."""
        return _readonly(2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx))


@dataclass(frozen=True)
class ComplexField:
    """Complex samples on a grid.  Values are frozen after construction."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", _readonly(v))


@dataclass(frozen=True)
class RealField:
    """Real samples on a grid (potentials, densities)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        object.__setattr__(self, "values", _readonly(v))


def make_grid(x_min: float, x_max: float, n: int) -> Grid:
    """Validated constructor for a uniform periodic grid."""
    return Grid(float(x_min), float(x_max), int(n))


def require_same_grid(a, b) -> None:
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")


def l2_norm(f) -> float:
    """Discrete L2 norm sqrt(dx * sum |f_j|^2)."""
    return float(np.sqrt(f.grid.dx) * np.linalg.norm(f.values))


def inner_product(f: ComplexField, g: ComplexField) -> complex:
    """Discrete inner product dx * sum conj(f_j) g_j."""
    require_same_grid(f, g)
    return complex(f.grid.dx * np.vdot(f.values, g.values))


def spectral_coefficients(f: ComplexField) -> ComplexField:
    """Unitary DFT; coefficient k pairs with wavenumber grid.wavenumbers[k]."""
    return ComplexField(f.grid, np.fft.fft(f.values, norm="ortho"))


def inverse_spectral(coeffs: ComplexField) -> ComplexField:
    return ComplexField(coeffs.grid, np.fft.ifft(coeffs.values, norm="ortho"))


def hs_seminorm(f: ComplexField, s: float) -> float:
    """Sobolev seminorm of order s: the L2 norm of |xi|^s times the coefficients.

    Computed entirely in coefficient space.  s = 0 reduces to the L2 norm;
    by Plancherel the result is consistent with l2_norm to machine precision.
    """
    if not np.isfinite(s) or s < 0:
        raise ValueError(f"seminorm order must be a finite nonnegative real, got {s}")
    weights = np.abs(f.grid.wavenumbers) ** s
    coeffs = np.fft.fft(f.values, norm="ortho")
    return float(np.sqrt(f.grid.dx) * np.linalg.norm(weights * coeffs))
