"""Periodic 2D grid on [0, 2pi)^2 with Fourier transform services.

Conventions used everywhere in the package:

* fields are real ``(n, n)`` arrays; index ``(ix, iy)`` is the point
  ``(ix*dx, iy*dx)``, so the x coordinate varies along axis 0;
* Fourier coefficients carry the ``1/n^2`` normalization, so the
  ``(0, 0)`` coefficient is the mean of the field;
* norms use the normalized measure on the torus (divide by ``(2pi)^2``),
  so the constant field 1 has unit L2 norm and Parseval reads
  ``sum_k |f_hat_k|^2 = mean(f^2)``;
* Sobolev norms are ``||f||_s^2 = sum_k (1+|k|^2)^s |f_hat_k|^2`` and
  vector fields take the root-sum-of-squares over leading components.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DimensionMismatch

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Grid:
    """Uniform n-by-n periodic grid on [0, 2pi)^2; n even, n >= 8."""

    n: int

    def __post_init__(self):
        if self.n < 8 or self.n % 2 != 0:
            raise ValueError(f"grid size must be an even integer >= 8, got {self.n}")

    @property
    def length(self) -> float:
        return TWO_PI

    @property
    def dx(self) -> float:
        return TWO_PI / self.n

    @cached_property
    def x(self) -> np.ndarray:
        """x coordinate, shape (n, n), constant along axis 1."""
        coords = np.arange(self.n) * self.dx
        arr = np.repeat(coords[:, None], self.n, axis=1)
        arr.setflags(write=False)
        return arr

    @cached_property
    def y(self) -> np.ndarray:
        """y coordinate, shape (n, n), constant along axis 0."""
        coords = np.arange(self.n) * self.dx
        arr = np.repeat(coords[None, :], self.n, axis=0)
        arr.setflags(write=False)
        return arr

    @cached_property
    def k1d(self) -> np.ndarray:
        """Integer wavenumbers in FFT order, shape (n,)."""
        arr = np.fft.fftfreq(self.n, d=1.0 / self.n)
        arr.setflags(write=False)
        return arr

    @cached_property
    def kx(self) -> np.ndarray:
        """Wavenumber along x, shape (n, 1) for broadcasting."""
        arr = self.k1d[:, None].copy()
        arr.setflags(write=False)
        return arr

    @cached_property
    def ky(self) -> np.ndarray:
        """Wavenumber along y, shape (1, n) for broadcasting."""
        arr = self.k1d[None, :].copy()
        arr.setflags(write=False)
        return arr

    @cached_property
    def ksq(self) -> np.ndarray:
        arr = self.kx ** 2 + self.ky ** 2
        arr.setflags(write=False)
        return arr

    def check_field(self, f: np.ndarray) -> np.ndarray:
        """Validate that f is a (..., n, n) array; returns it as float array."""
        f = np.asarray(f)
        if f.ndim < 2 or f.shape[-2:] != (self.n, self.n):
            raise DimensionMismatch(
                f"field shape {f.shape} does not match grid n={self.n}"
            )
        return f


def to_spectral(grid: Grid, f: np.ndarray) -> np.ndarray:
    """Normalized Fourier coefficients of a real field, f_hat[0,0] = mean."""
    f = grid.check_field(f)
    return np.fft.fft2(f, axes=(-2, -1)) / grid.n ** 2


def from_spectral(grid: Grid, coeffs: np.ndarray) -> np.ndarray:
    """Real field from normalized coefficients (imaginary residue dropped)."""
    coeffs = grid.check_field(coeffs)
    return np.real(np.fft.ifft2(coeffs, axes=(-2, -1))) * grid.n ** 2


def spectral_derivative(grid: Grid, f: np.ndarray, axis: str, order: int = 1) -> np.ndarray:
    """Derivative of given order along 'x' or 'y' via (i k)^order multipliers.

    The Nyquist mode k = n/2 is zeroed for odd orders so the result of
    differentiating a real field stays real.
    """
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    if order < 1 or int(order) != order:
        raise ValueError(f"derivative order must be a positive integer, got {order}")
    f = grid.check_field(f)
    k = grid.k1d.copy()
    if order % 2 == 1:
        k[grid.n // 2] = 0.0
    factor = (1j * k) ** order
    if axis == "x":
        factor = factor[:, None]
    else:
        factor = factor[None, :]
    F = np.fft.fft2(f, axes=(-2, -1))
    return np.real(np.fft.ifft2(F * factor, axes=(-2, -1)))


def translate(grid: Grid, f: np.ndarray, shift: tuple[float, float]) -> np.ndarray:
    """g(x, y) = f(x - sx, y - sy), exact for band-limited fields."""
    f = grid.check_field(f)
    sx, sy = shift
    phase = np.exp(-1j * (grid.kx * sx + grid.ky * sy))
    F = np.fft.fft2(f, axes=(-2, -1))
    return np.real(np.fft.ifft2(F * phase, axes=(-2, -1)))


def sobolev_norm(grid: Grid, f: np.ndarray, s: float) -> float:
    """H^s norm under the normalized-measure convention.

    Accepts (n, n) scalar fields or (..., n, n) stacks, which are reduced
    by root-sum-of-squares over the leading axes.
    """
    if s < 0:
        raise ValueError(f"Sobolev index must be >= 0, got {s}")
    coeffs = to_spectral(grid, f)
    power = np.abs(coeffs) ** 2
    if s != 0:
        power = power * (1.0 + grid.ksq) ** s
    return float(np.sqrt(np.sum(power)))


def l2_norm(grid: Grid, f: np.ndarray) -> float:
    return sobolev_norm(grid, f, 0.0)


def linf_norm(f: np.ndarray) -> float:
    return float(np.max(np.abs(f)))


def spectral_divergence(grid: Grid, u1: np.ndarray, u2: np.ndarray) -> np.ndarray:
    return spectral_derivative(grid, u1, "x") + spectral_derivative(grid, u2, "y")
