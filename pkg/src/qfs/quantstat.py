"""Signal statistics: probe photon number, vacuum and LO-background variances,
the crossover photon number, and even-cat-state variance scans over delay.

Variances are in units of (photon-number difference)^2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import optimize
from scipy.special import erf

from .gating import GatingFunction, SamplingKernel, sampling_kernel
from .physconst import CONST, ExperimentParams
from .spectral import GridError, SpectralFunction, make_grid, simpson_weights

__all__ = [
    "NumericalError",
    "ProbeSpec",
    "CatState",
    "VarianceTrace",
    "photons_from_amplitude",
    "amplitude_from_photons",
    "photons_from_amplitude_exact",
    "vacuum_variance",
    "vacuum_prefactor",
    "vacuum_variance_closed_form",
    "background_variance",
    "background_variance_closed_form",
    "crossover_photons",
    "solve_cat_amplitude",
    "make_cat_state",
    "cat_moments",
    "cat_variance_scan",
]


class NumericalError(RuntimeError):
    """A numerical procedure failed or has no solution."""


def _positive(name: str, value: float):
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"{name} must be positive and finite, got {value}")


# -- probe photon number ---------------------------------------------------

def _photon_factor(params: ExperimentParams) -> float:
    """N_P / A_P^2 = n C' / (2 sqrt(pi) hbar sigma w0)."""
    return params.n0 * params.c_prime / (2.0 * math.sqrt(math.pi) * CONST.hbar * params.sigma * params.omega0)


def photons_from_amplitude(amplitude: float, params: ExperimentParams) -> float:
    """Mean probe photon number for amplitude A_P, using w ~ w0 in 1/(hbar w)."""
    _positive("amplitude", amplitude)
    return amplitude ** 2 * _photon_factor(params)


def amplitude_from_photons(photons: float, params: ExperimentParams) -> float:
    _positive("photons", photons)
    return math.sqrt(photons / _photon_factor(params))


def photons_from_amplitude_exact(amplitude: float, params: ExperimentParams,
                                 n_points: int = 20001) -> float:
    """A_P^2 C' int n(w) f(w)^2 / (hbar w) dw by quadrature over w > 0."""
    _positive("amplitude", amplitude)
    lo = max(params.omega0 - 10 * params.sigma, 1e-3 * params.omega0)
    grid = make_grid(lo, params.omega0 + 10 * params.sigma, n_points)
    om = grid.omegas
    f = np.exp(-((om - params.omega0) ** 2) / (2 * params.sigma ** 2)) / (params.sigma * math.sqrt(2 * math.pi))
    integrand = params.n(om) * f ** 2 / (CONST.hbar * om)
    return amplitude ** 2 * params.c_prime * float(np.dot(simpson_weights(om.size, grid.step), integrand))


@dataclass(frozen=True)
class ProbeSpec:
    amplitude: float
    photons: float

    @classmethod
    def from_amplitude(cls, amplitude: float, params: ExperimentParams) -> "ProbeSpec":
        return cls(amplitude, photons_from_amplitude(amplitude, params))

    @classmethod
    def from_photons(cls, photons: float, params: ExperimentParams) -> "ProbeSpec":
        return cls(amplitude_from_photons(photons, params), photons)


# -- vacuum and background variances ----------------------------------------

def _kernel_power(kernel: SamplingKernel) -> float:
    w = simpson_weights(kernel.grid.n_points, kernel.grid.step)
    return float(np.dot(w, np.abs(kernel.values) ** 2))


def vacuum_variance(gating: GatingFunction, params: ExperimentParams, amplitude: float) -> float:
    """<0|S^2|0> = (C''^2/C') int hbar W / n(W) |G_phi(W)|^2 dW.

    Independent of the delay, so it is evaluated at tau = 0.
    """
    return _kernel_power(sampling_kernel(gating, params, amplitude, 0.0))


def vacuum_prefactor(params: ExperimentParams) -> float:
    """K in <S^2>_vac = K N_P^3 for Gaussian spectra, flat response, no cut, phi = -pi/2."""
    c, eps0, hbar = CONST.c, CONST.eps0, CONST.hbar
    p = params
    num = (9 * p.d ** 2 * p.eta0 ** 2 * p.eta2 * (1 - p.R) * p.R ** 2 * p.sigma ** 3
           * p.chi3 ** 2 * p.omega0 ** 3 * hbar ** 2)
    den = 8 * math.pi ** 1.5 * c ** 4 * p.n0 ** 4 * eps0 ** 2 * p.F ** 2
    return num / den


def vacuum_variance_closed_form(params: ExperimentParams, photons: float) -> float:
    if photons < 0:
        raise ValueError("photon number must be nonnegative")
    return vacuum_prefactor(params) * photons ** 3


def background_variance(f_lo: SpectralFunction, params: ExperimentParams, amplitude: float) -> float:
    """LO shot-noise variance A^2 C' int |f_LO|^2 eta^2 n / (hbar w2) dw2 (w2 > 0)."""
    om = f_lo.omegas
    keep = om > 0
    if np.count_nonzero(keep) < 3:
        raise GridError("LO spectrum has no support at positive frequency")
    om = om[keep]
    integrand = (np.abs(f_lo.values[keep]) ** 2 * params.eta(om) ** 2 * params.n(om)
                 / (CONST.hbar * om))
    w = simpson_weights(om.size, f_lo.grid.step)
    a_lo = params.lo_amplitude(amplitude)
    return a_lo ** 2 * params.c_prime * float(np.dot(w, integrand))


def background_variance_closed_form(params: ExperimentParams, photons: float) -> float:
    """eta^2 eta2 (1 - R) N_P."""
    if photons < 0:
        raise ValueError("photon number must be nonnegative")
    return params.eta0 ** 2 * params.eta2 * (1 - params.R) * photons


def crossover_photons(params: ExperimentParams) -> float:
    """Probe photon number at which the THz-vacuum variance equals the LO shot noise."""
    k = vacuum_prefactor(params)
    b = params.eta0 ** 2 * params.eta2 * (1 - params.R)
    if not (k > 0 and b > 0):
        raise NumericalError("no crossover: a variance prefactor vanishes")
    return math.sqrt(b / k)


# -- broadband even cat state ------------------------------------------------

@dataclass(frozen=True)
class CatState:
    """Even cat |a u> + |-a u> in the single spectral mode u(W).

    u is a real Gaussian of amplitude standard deviation ``mode_width``
    centred at ``mode_center``, truncated to W >= 0 and renormalised so that
    int u^2 dW = 1.
    """

    mode_center: float
    mode_width: float
    alpha0: complex

    @property
    def norm_constant(self) -> float:
        # int_0^inf exp(-(W - c)^2 / s^2) dW
        c, s = self.mode_center, self.mode_width
        return 0.5 * s * math.sqrt(math.pi) * (1.0 + erf(c / s))

    @property
    def truncated_fraction(self) -> float:
        """Norm of the untruncated Gaussian mode lying below W = 0."""
        return 0.5 * (1.0 - erf(self.mode_center / self.mode_width))

    def mode_fn(self, omegas) -> np.ndarray:
        om = np.asarray(omegas, dtype=float)
        u = np.exp(-((om - self.mode_center) ** 2) / (2 * self.mode_width ** 2)) / math.sqrt(self.norm_constant)
        return np.where(om >= 0, u, 0.0)

    @property
    def mean_photons(self) -> float:
        x = abs(self.alpha0) ** 2
        return x * math.tanh(x)

    def support(self, n_widths: float = 4.0) -> tuple[float, float]:
        return (max(0.0, self.mode_center - n_widths * self.mode_width),
                self.mode_center + n_widths * self.mode_width)


def solve_cat_amplitude(mean_photons: float) -> float:
    """|alpha0|^2 solving x tanh(x) = mean_photons."""
    if mean_photons < 0:
        raise ValueError("mean photon number must be nonnegative")
    if mean_photons == 0:
        return 0.0
    # x tanh x is increasing on x > 0 and lies between x - 1 and x for x >= 1
    hi = mean_photons + 1.0
    try:
        x = optimize.brentq(lambda x: x * math.tanh(x) - mean_photons, 0.0, hi, xtol=1e-15, rtol=1e-15)
    except (ValueError, RuntimeError) as exc:
        raise NumericalError(f"cat amplitude root search failed: {exc}") from exc
    return x


def make_cat_state(mode_center: float, mode_width: float, mean_photons: float) -> CatState:
    _positive("mode_center", mode_center)
    _positive("mode_width", mode_width)
    if mode_center < 3 * mode_width:
        warnings.warn("cat mode leaks below zero frequency; it is truncated and renormalised",
                      stacklevel=2)
    return CatState(mode_center, mode_width, complex(math.sqrt(solve_cat_amplitude(mean_photons))))


def cat_moments(state: CatState) -> tuple[float, complex]:
    """(<b^dag b>, <b^2>) of the even cat in its spectral mode; <b> = 0."""
    return state.mean_photons, state.alpha0 ** 2


@dataclass(frozen=True, eq=False)
class VarianceTrace:
    taus: np.ndarray
    variance: np.ndarray
    mean: np.ndarray
    normalized: bool
    theta: float | None = None
    vacuum: np.ndarray | None = None


def cat_variance_scan(state: CatState, kernel_family: Callable[[float], SamplingKernel],
                      taus: Sequence[float], normalize: bool = True, nodes=None, weights=None,
                      theta: float | None = None) -> VarianceTrace:
    """Variance of the TFISH signal for an even cat, as a function of delay.

    With J(tau) = int g(W, tau) u(W) dW::

        Var = int |g|^2 dW + 2 Re(alpha0^2 J^2) + 2 <b^dag b> |J|^2

    and zero mean. By default the integrals use the Simpson rule on the
    kernel grid; passing ``nodes`` and ``weights`` evaluates them with that
    discrete rule instead (e.g. a Gauss-Legendre mode basis). In both cases
    u is renormalised under the active rule.
    """
    taus = np.asarray(taus, dtype=float)
    if not np.all(np.isfinite(taus)):
        raise ValueError("delays must be finite")
    m_bb, m_b2 = cat_moments(state)
    lo, hi = state.support()
    var = np.empty(taus.size)
    vac = np.empty(taus.size)
    for i, tau in enumerate(taus):
        kernel = kernel_family(float(tau))
        if nodes is None:
            om = kernel.omegas
            if om[0] > lo or om[-1] < hi:
                raise GridError("kernel grid does not cover the cat mode support")
            w = simpson_weights(om.size, kernel.grid.step)
            g = kernel.values
        else:
            om = np.asarray(nodes, dtype=float)
            w = np.asarray(weights, dtype=float)
            g = kernel.at(om)
        u = state.mode_fn(om)
        u = u / math.sqrt(float(np.dot(w, u * u)))
        j = complex(np.dot(w, g * u))
        vac[i] = float(np.dot(w, np.abs(g) ** 2))
        var[i] = vac[i] + 2.0 * (m_b2 * j * j).real + 2.0 * m_bb * abs(j) ** 2
    if normalize:
        var = var / vac
    return VarianceTrace(taus, var, np.zeros(taus.size), normalize, theta, vac)
