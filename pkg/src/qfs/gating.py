"""Probe/LO spectra, detection bandpass, gating functions and the sampling kernel.

The gating functions weight each THz frequency Omega in the homodyne signal::

    G+(W) = int_window dw2 eta(w2) conj(f_LO(w2)) (f*f)(w2 + W)
    G-(W) = int_window dw2 eta(w2) conj(f_LO(w2)) (f*f)(w2 - W)
    G_phi(W) = i e^{i phi} G-(W) - i e^{-i phi} conj(G+(W))

``G-`` collects the sum-frequency (w2 = 2 w0 + W) contribution and ``G+`` the
difference-frequency one.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import signal
from scipy.interpolate import CubicSpline

from .physconst import CONST, ExperimentParams
from .spectral import (
    FrequencyGrid,
    GridError,
    SpectralFunction,
    centered_grid,
    convolve,
    make_grid,
    simpson_weights,
)

__all__ = [
    "BandpassWindow",
    "GatingFunction",
    "SamplingKernel",
    "Spectra",
    "CoverageWarning",
    "PhaseError",
    "probe_spectrum",
    "lo_spectrum",
    "build_spectra",
    "gating_pm",
    "gating_phi",
    "compute_gating",
    "extract_theta",
    "sampling_kernel",
]

# G+- decays as exp(-W^2 / 8 sigma^2); at 10 sigma the vacuum-variance
# integrand is down by exp(-25), which keeps truncation far below 1e-6.
DEFAULT_OMEGA_POINTS = 4096
DEFAULT_OMEGA_SPAN = 10.0
PROBE_HALF_SPAN = 8.0


class CoverageWarning(UserWarning):
    """A spectrum is evaluated on a grid narrower than its recommended support."""


class PhaseError(ValueError):
    """The phase of an identically vanishing gating function is undefined."""


@dataclass(frozen=True)
class BandpassWindow:
    """Ideal hard detection window on the w2 axis (rad/s)."""

    omega_lo: float = 0.0
    omega_hi: float = math.inf

    def __post_init__(self):
        if self.omega_lo < 0 or not self.omega_lo < self.omega_hi:
            raise ValueError(f"invalid bandpass window [{self.omega_lo}, {self.omega_hi}]")

    @classmethod
    def upper_cut(cls, omega_cut: float) -> "BandpassWindow":
        return cls(0.0, omega_cut)

    def mask(self, omegas: np.ndarray, step: float) -> np.ndarray:
        tol = 1e-6 * step
        return (omegas >= self.omega_lo - tol) & (omegas <= self.omega_hi + tol)


def _check_coverage(grid: FrequencyGrid, center: float, half_width: float, what: str):
    slack = 1e-9 * half_width
    if grid.omega_min > center - half_width + slack or grid.omega_max < center + half_width - slack:
        warnings.warn(f"{what}: grid does not cover the recommended support", CoverageWarning,
                      stacklevel=3)


def _gaussian(om, center, width):
    return np.exp(-((om - center) ** 2) / (2.0 * width ** 2)) / (width * math.sqrt(2.0 * math.pi))


def probe_spectrum(params: ExperimentParams, grid: FrequencyGrid) -> SpectralFunction:
    """Unit-area Gaussian probe distribution f(w).

    The Gaussian is not clipped at w < 0: for w0 > 5 sigma that tail carries
    less than 1e-6 of the weight, and clipping it would break the exact
    G+ = conj(G-) symmetry of the Gaussian model.
    """
    _check_coverage(grid, params.omega0, PROBE_HALF_SPAN * params.sigma, "probe spectrum")
    return SpectralFunction(grid, _gaussian(grid.omegas, params.omega0, params.sigma))


def lo_spectrum(params: ExperimentParams, grid: FrequencyGrid, lo_delay: float = 0.0) -> SpectralFunction:
    """Unit-area Gaussian LO distribution at 2 w0 with width sqrt(2) sigma.

    A nonzero ``lo_delay`` (the trim delay tau2) multiplies it by exp(-i w tau2).
    """
    width = math.sqrt(2.0) * params.sigma
    _check_coverage(grid, 2 * params.omega0, PROBE_HALF_SPAN * width, "LO spectrum")
    om = grid.omegas
    vals = _gaussian(om, 2 * params.omega0, width).astype(complex)
    if lo_delay:
        vals = vals * np.exp(-1j * om * lo_delay)
    return SpectralFunction(grid, vals)


@dataclass(frozen=True, eq=False)
class Spectra:
    """Probe, its self-convolution and the LO, all on commensurate grids."""

    probe: SpectralFunction
    probe_conv: SpectralFunction
    lo: SpectralFunction
    omega_grid: FrequencyGrid


def build_spectra(params: ExperimentParams, omega_points: int = DEFAULT_OMEGA_POINTS,
                  omega_span: float = DEFAULT_OMEGA_SPAN, lo_delay: float = 0.0) -> Spectra:
    """Sample f, f*f and f_LO with the THz grid step, so shifts by W are exact."""
    omega_grid = make_grid(0.0, omega_span * params.sigma, omega_points)
    h = omega_grid.step
    f = probe_spectrum(params, centered_grid(params.omega0, PROBE_HALF_SPAN * params.sigma, h))
    ff = convolve(f, f)
    return Spectra(f, ff, lo_spectrum(params, ff.grid, lo_delay), omega_grid)


def gating_pm(f: SpectralFunction, f_lo: SpectralFunction, eta, window: BandpassWindow,
              omega_grid: FrequencyGrid, probe_conv: SpectralFunction | None = None):
    """Return ``(g_plus, g_minus)`` sampled on ``omega_grid``.

    ``f_lo`` must live on the grid of ``f*f`` (pass ``probe_conv`` to reuse
    an already computed convolution). When the THz grid is commensurate with
    the optical step the shifted overlaps are exact index shifts evaluated as
    one correlation; otherwise f*f is cubic-spline interpolated.
    """
    ff = probe_conv if probe_conv is not None else convolve(f, f)
    if f_lo.grid != ff.grid:
        raise GridError("f_lo must be sampled on the grid of f*f")
    if omega_grid.omega_min < 0:
        raise GridError("THz grid must be nonnegative")
    om2 = ff.grid.omegas
    h = ff.grid.step
    mask = window.mask(om2, h)
    idx = np.flatnonzero(mask)
    if idx.size < 3:
        raise GridError("bandpass window lies outside the computed support of f*f")

    eta_vals = np.asarray(eta(om2) if callable(eta) else np.broadcast_to(eta, om2.shape), dtype=float)
    coeff = np.zeros(om2.size, dtype=complex)
    coeff[idx] = simpson_weights(idx.size, h) * eta_vals[idx] * np.conj(f_lo.values[idx])

    omegas = omega_grid.omegas
    shifts = omegas / h
    ishifts = np.rint(shifts).astype(np.int64)
    if np.all(np.abs(shifts - ishifts) < 1e-6):
        n = om2.size
        # z[k] = sum_j coeff[j] ff[j + k - (n - 1)]
        z = signal.convolve(ff.values, coeff[::-1], mode="full")
        z = np.concatenate([z, [0.0]])  # index -1 and out-of-range shifts read as zero
        plus_idx = np.where(ishifts < n, n - 1 + ishifts, -1)
        minus_idx = np.where(ishifts < n, n - 1 - ishifts, -1)
        return z[plus_idx], z[minus_idx]

    spl_re = CubicSpline(om2, ff.values.real, extrapolate=False)
    spl_im = CubicSpline(om2, ff.values.imag, extrapolate=False)

    def ff_at(x):
        return np.nan_to_num(spl_re(x)) + 1j * np.nan_to_num(spl_im(x))

    nz = coeff[idx]
    x = om2[idx]
    g_plus = np.array([np.dot(nz, ff_at(x + w)) for w in omegas])
    g_minus = np.array([np.dot(nz, ff_at(x - w)) for w in omegas])
    return g_plus, g_minus


def gating_phi(g_plus, g_minus, phi: float) -> np.ndarray:
    g_plus = np.asarray(g_plus)
    g_minus = np.asarray(g_minus)
    return 1j * np.exp(1j * phi) * g_minus - 1j * np.exp(-1j * phi) * np.conj(g_plus)


@dataclass(frozen=True, eq=False)
class GatingFunction:
    grid: FrequencyGrid
    g_plus: np.ndarray
    g_minus: np.ndarray
    g_phi: np.ndarray
    phi: float
    lo_delay: float = 0.0
    window: BandpassWindow = field(default_factory=BandpassWindow)

    def __post_init__(self):
        for name in ("g_plus", "g_minus", "g_phi"):
            arr = np.asarray(getattr(self, name), dtype=complex)
            if arr.shape != (self.grid.n_points,) or not np.all(np.isfinite(arr)):
                raise GridError(f"{name} must hold {self.grid.n_points} finite samples")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def omegas(self) -> np.ndarray:
        return self.grid.omegas

    def with_phi(self, phi: float) -> "GatingFunction":
        return GatingFunction(self.grid, self.g_plus, self.g_minus,
                              gating_phi(self.g_plus, self.g_minus, phi), phi,
                              self.lo_delay, self.window)


def compute_gating(params: ExperimentParams, phi: float, window: BandpassWindow | None = None,
                   lo_delay: float = 0.0, spectra: Spectra | None = None, **grid_kw) -> GatingFunction:
    """G+-, G_phi on the default (or given) THz grid for Gaussian probe and LO."""
    window = window or BandpassWindow()
    if spectra is None:
        spectra = build_spectra(params, lo_delay=lo_delay, **grid_kw)
    g_plus, g_minus = gating_pm(spectra.probe, spectra.lo, params.eta, window,
                                spectra.omega_grid, probe_conv=spectra.probe_conv)
    return GatingFunction(spectra.omega_grid, g_plus, g_minus, gating_phi(g_plus, g_minus, phi),
                          phi, lo_delay, window)


def extract_theta(g_phi, mask_fraction: float = 0.01, axial: bool = True,
                  null_level: float = 1e-10) -> tuple[float, float]:
    """Quadrature angle theta and its spread across frequency.

    theta is the circular mean of arg G_phi over samples whose modulus is at
    least ``mask_fraction`` of the maximum; the residual is the circular
    standard deviation of the same set. With ``axial=True`` (default) angles
    are treated modulo pi: theta and theta + pi select the same quadrature,
    differing only in the sign of the photocurrent difference. Axial theta
    lies in [0, pi); directional theta in (-pi, pi].

    Given a :class:`GatingFunction`, a G_phi below ``null_level`` of max|G+-|
    counts as nulled (rounding noise only) and raises :class:`PhaseError`.
    """
    g = np.asarray(getattr(g_phi, "g_phi", g_phi))
    mod = np.abs(g)
    peak = mod.max(initial=0.0)
    if not peak > 0:
        raise PhaseError("gating function vanishes identically; phase undefined")
    if isinstance(g_phi, GatingFunction):
        scale = max(np.abs(g_phi.g_plus).max(), np.abs(g_phi.g_minus).max())
        if peak <= null_level * scale:
            raise PhaseError(f"G_phi is nulled ({peak / scale:.1e} of max|G+-|); phase undefined")
    ang = np.angle(g[mod >= mask_fraction * peak])
    k = 2.0 if axial else 1.0
    resultant = np.mean(np.exp(1j * k * ang))
    theta = float(np.angle(resultant)) / k
    # 1 - R from the deviations directly; sqrt(-2 ln R) loses ~1e-8 to rounding otherwise
    dev = np.angle(np.exp(1j * k * (ang - theta)))
    one_minus_r = float(np.mean(2.0 * np.sin(dev / 2.0) ** 2))
    residual = math.sqrt(-2.0 * math.log1p(-one_minus_r)) / k if one_minus_r < 1 else math.inf
    if axial:
        theta = theta % math.pi
        # fold the branch cut so a real-positive axis reads 0 rather than pi
        if math.pi - theta < 1e-12:
            theta = 0.0
    return theta, residual


@dataclass(frozen=True, eq=False)
class SamplingKernel:
    """g(W, tau) = (-i C''/sqrt(C')) sqrt(hbar W / n(W)) G_phi(W) exp(-i W tau).

    ``values`` is sampled on ``grid``; :meth:`at` evaluates the kernel at
    arbitrary frequencies by spline-interpolating the smooth G_phi factor.
    """

    grid: FrequencyGrid
    values: np.ndarray
    tau: float
    gating: GatingFunction
    prefactor: complex
    n: object

    @property
    def omegas(self) -> np.ndarray:
        return self.grid.omegas

    def _envelope(self, omegas):
        omegas = np.asarray(omegas, dtype=float)
        return self.prefactor * np.sqrt(CONST.hbar * omegas / self.n(omegas))

    def at(self, omegas) -> np.ndarray:
        omegas = np.asarray(omegas, dtype=float)
        om = self.gating.omegas
        if np.any(omegas < om[0]) or np.any(omegas > om[-1]):
            raise GridError("kernel evaluated outside its THz grid")
        gp = self.gating.g_phi
        interp = CubicSpline(om, gp.real)(omegas) + 1j * CubicSpline(om, gp.imag)(omegas)
        return self._envelope(omegas) * interp * np.exp(-1j * omegas * self.tau)

    def at_delay(self, tau: float) -> "SamplingKernel":
        om = self.omegas
        vals = self._envelope(om) * self.gating.g_phi * np.exp(-1j * om * tau)
        return SamplingKernel(self.grid, vals, tau, self.gating, self.prefactor, self.n)


def sampling_kernel(gating: GatingFunction, params: ExperimentParams, amplitude: float,
                    tau: float = 0.0, n=None) -> SamplingKernel:
    """Per-frequency weight of a_T(W) in the TFISH part of the homodyne signal.

    ``amplitude`` is the probe amplitude A_P (V/m); ``n`` defaults to the
    refractive index of ``params``.
    """
    n = params.n if n is None else n
    if not callable(n):
        n_const = float(n)
        n = lambda om: np.full(np.shape(om), n_const)  # noqa: E731
    pref = -1j * params.c_double_prime(amplitude) / math.sqrt(params.c_prime)
    base = SamplingKernel(gating.grid, np.zeros(gating.grid.n_points, complex), tau, gating, pref, n)
    return base.at_delay(tau)
