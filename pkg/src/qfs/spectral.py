"""Uniform frequency grids, sampled spectra, quadrature and convolution."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy import signal

__all__ = [
    "FrequencyGrid",
    "SpectralFunction",
    "GridError",
    "make_grid",
    "centered_grid",
    "simpson_weights",
    "gaussian_distribution",
    "integrate",
    "convolve",
    "weighted_overlap",
]

_STEP_RTOL = 1e-9


class GridError(ValueError):
    pass


@dataclass(frozen=True)
class FrequencyGrid:
    omega_min: float
    omega_max: float
    n_points: int

    @property
    def step(self) -> float:
        return (self.omega_max - self.omega_min) / (self.n_points - 1)

    @property
    def omegas(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.n_points)

    def same_step(self, other: "FrequencyGrid") -> bool:
        return math.isclose(self.step, other.step, rel_tol=_STEP_RTOL)

    def index_of(self, omega: float) -> float:
        """Fractional index of ``omega`` on this grid."""
        return (omega - self.omega_min) / self.step


def make_grid(omega_min: float, omega_max: float, n_points: int) -> FrequencyGrid:
    """Uniform grid from ``omega_min`` to ``omega_max`` inclusive."""
    if not (math.isfinite(omega_min) and math.isfinite(omega_max)):
        raise GridError("grid bounds must be finite")
    if not omega_min < omega_max:
        raise GridError(f"degenerate range [{omega_min}, {omega_max}]")
    if int(n_points) != n_points or n_points < 16:
        raise GridError(f"need an integer n_points >= 16, got {n_points}")
    return FrequencyGrid(float(omega_min), float(omega_max), int(n_points))


def centered_grid(center: float, half_span: float, step: float) -> FrequencyGrid:
    """Grid with ``center`` on a node, spacing ``step`` and at least ``half_span`` each side."""
    m = int(math.ceil(half_span / step - 1e-9))
    m = max(m, 8)
    return make_grid(center - m * step, center + m * step, 2 * m + 1)


@dataclass(frozen=True, eq=False)
class SpectralFunction:
    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.shape != (self.grid.n_points,):
            raise GridError(f"expected {self.grid.n_points} samples, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise GridError("spectral samples must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def omegas(self) -> np.ndarray:
        return self.grid.omegas

    def __call__(self, omega):
        """Linear interpolation; zero outside the grid."""
        om = self.grid.omegas
        re = np.interp(omega, om, self.values.real, left=0.0, right=0.0)
        im = np.interp(omega, om, self.values.imag, left=0.0, right=0.0)
        return re + 1j * im

    def with_values(self, values) -> "SpectralFunction":
        return SpectralFunction(self.grid, values)


def simpson_weights(n: int, step: float) -> np.ndarray:
    """Composite Simpson weights for ``n`` equally spaced samples.

    For an even sample count the last interval uses the three-point
    quadratic rule, so the rule stays fourth order.
    """
    if n < 3:
        if n == 2:
            return np.array([0.5, 0.5]) * step
        raise GridError("quadrature needs at least two samples")
    w = np.zeros(n)
    m = n if n % 2 else n - 1
    w[:m:2] = 2.0
    w[1:m:2] = 4.0
    w[0] = w[m - 1] = 1.0
    w[:m] /= 3.0
    if m != n:
        w[-3:] += np.array([-1.0, 8.0, 5.0]) / 12.0
    return w * step


def gaussian_distribution(grid: FrequencyGrid, center: float, width: float) -> SpectralFunction:
    """Unit-area real Gaussian exp(-(w-center)^2 / 2 width^2) / (width sqrt(2 pi))."""
    if not width > 0:
        raise ValueError(f"width must be positive, got {width}")
    if grid.omega_min > center - 5 * width or grid.omega_max < center + 5 * width:
        warnings.warn("grid does not span center +/- 5 widths; distribution is truncated",
                      stacklevel=2)
    om = grid.omegas
    vals = np.exp(-((om - center) ** 2) / (2.0 * width ** 2)) / (width * math.sqrt(2.0 * math.pi))
    return SpectralFunction(grid, vals)


def integrate(fn: SpectralFunction) -> complex:
    return complex(np.dot(simpson_weights(fn.grid.n_points, fn.grid.step), fn.values))


def convolve(a: SpectralFunction, b: SpectralFunction, method: str = "auto") -> SpectralFunction:
    """(a * b)(w) = int a(w') b(w - w') dw' on the sum-support grid.

    ``method`` is passed to :func:`scipy.signal.convolve` ("direct", "fft" or
    "auto"); the direct sum is the reference.
    """
    if not a.grid.same_step(b.grid):
        raise GridError("convolution operands must share the grid step")
    step = a.grid.step
    n = a.grid.n_points + b.grid.n_points - 1
    lo = a.grid.omega_min + b.grid.omega_min
    grid = FrequencyGrid(lo, lo + (n - 1) * step, n)
    vals = signal.convolve(a.values, b.values, mode="full", method=method) * step
    return SpectralFunction(grid, vals)


Weight = Union[float, np.ndarray, Callable[[np.ndarray], np.ndarray]]


def _weight_values(weight: Weight, grid: FrequencyGrid) -> np.ndarray:
    if callable(weight):
        w = np.asarray(weight(grid.omegas))
    else:
        w = np.asarray(weight)
    w = np.broadcast_to(w, (grid.n_points,))
    if not np.all(np.isfinite(w)):
        raise GridError("weight must be finite on the grid")
    return w


def weighted_overlap(a: SpectralFunction, b: SpectralFunction, weight: Weight = 1.0) -> complex:
    """int conj(a(w)) b(w) weight(w) dw with the Simpson rule."""
    if a.grid != b.grid:
        raise GridError("overlap operands must share the grid")
    w = _weight_values(weight, a.grid)
    return complex(np.dot(simpson_weights(a.grid.n_points, a.grid.step),
                          np.conj(a.values) * b.values * w))
