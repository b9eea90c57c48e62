"""Physical constants and validated experiment parameters.

Internally every frequency is an angular frequency in rad/s. Raw parameter
maps (as read from JSON configs) use ordinary frequency in THz, lengths in
micrometres and areas in square micrometres.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy import constants as _sc

__all__ = [
    "Constants",
    "CONST",
    "Response",
    "ExperimentParams",
    "ParameterError",
    "validate_params",
    "thz_to_omega",
    "omega_to_thz",
]


class ParameterError(ValueError):
    """Raised when a raw parameter map is incomplete or out of range."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class Constants:
    c: float
    eps0: float
    hbar: float


CONST = Constants(c=_sc.c, eps0=_sc.epsilon_0, hbar=_sc.hbar)


def thz_to_omega(f_thz):
    return 2.0 * np.pi * 1e12 * f_thz


def omega_to_thz(omega):
    return omega / (2.0 * np.pi * 1e12)


@dataclass(frozen=True)
class Response:
    """A frequency-dependent material/detector response.

    Either a constant, or a table of ``(omega, value)`` pairs with strictly
    increasing ``omega`` that is linearly interpolated (and held constant
    beyond the table ends).
    """

    constant: float | None = None
    omega: tuple[float, ...] = ()
    values: tuple[float, ...] = ()

    def __call__(self, omega):
        if self.constant is not None:
            return np.full(np.shape(omega), self.constant, dtype=float) if np.ndim(omega) else self.constant
        out = np.interp(omega, self.omega, self.values)
        return out if np.ndim(omega) else float(out)

    @property
    def is_constant(self) -> bool:
        return self.constant is not None

    def extrema(self) -> tuple[float, float]:
        if self.constant is not None:
            return self.constant, self.constant
        return min(self.values), max(self.values)


@dataclass(frozen=True)
class ExperimentParams:
    """Physical parameters of the sampling scheme (SI units, angular frequencies)."""

    omega0: float
    sigma: float
    R: float
    chi3: float
    d: float
    n: Response
    eta: Response
    eta2: float
    F: float

    @property
    def n0(self) -> float:
        """Refractive index used by the flat-response closed forms (at the probe centre)."""
        return float(self.n(self.omega0))

    @property
    def eta0(self) -> float:
        """Detector efficiency used by the flat-response closed forms (at the LO centre)."""
        return float(self.eta(2.0 * self.omega0))

    @property
    def c_prime(self) -> float:
        """C' = 4 pi c eps0 F."""
        return 4.0 * math.pi * CONST.c * CONST.eps0 * self.F

    def c_double_prime(self, amplitude: float) -> float:
        """C'' for probe amplitude ``amplitude`` (V/m)."""
        return (6.0 * math.pi * CONST.eps0 * self.F * self.d * self.chi3 * math.sqrt(self.eta2)
                * self.R * math.sqrt(1.0 - self.R) * amplitude ** 3 / CONST.hbar)

    def lo_amplitude(self, amplitude: float) -> float:
        """LO amplitude A = sqrt(eta2) sqrt(1 - R) A_P."""
        return math.sqrt(self.eta2) * math.sqrt(1.0 - self.R) * amplitude

    def replace(self, **changes) -> "ExperimentParams":
        from dataclasses import replace

        return replace(self, **changes)


_REQUIRED = ("center_thz", "width_thz", "R", "chi3", "d_um", "n", "eta", "eta2", "F_um2")

def _finite(key: str, value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
        raise ParameterError(key, f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ParameterError(key, "value is not finite")
    return value


def _response(key: str, raw, lo: float, hi: float, inclusive: bool) -> Response:
    def check(v: float):
        ok = lo <= v <= hi if inclusive else lo < v < hi
        if not ok:
            raise ParameterError(key, f"value {v} outside the allowed range")

    if isinstance(raw, Mapping):
        extra = set(raw) - {"freq_thz", "values"}
        if extra or {"freq_thz", "values"} - set(raw):
            raise ParameterError(key, "table must have exactly the keys 'freq_thz' and 'values'")
        freqs = [_finite(key, v) for v in raw["freq_thz"]]
        vals = [_finite(key, v) for v in raw["values"]]
        if len(freqs) != len(vals) or len(freqs) < 2:
            raise ParameterError(key, "table needs >= 2 rows of equal length")
        if any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise ParameterError(key, "table frequencies must be strictly increasing")
        for v in vals:
            check(v)
        return Response(omega=tuple(thz_to_omega(f) for f in freqs), values=tuple(vals))
    value = _finite(key, raw)
    check(value)
    return Response(constant=value)


def validate_params(raw: Mapping) -> ExperimentParams:
    """Validate a raw parameter map and convert it to SI / angular units.

    Expected keys: ``center_thz``, ``width_thz`` (probe amplitude-distribution
    standard deviation), ``R``, ``chi3`` (m^2/V^2), ``d_um``, ``n``, ``eta``
    (constants or ``{"freq_thz": [...], "values": [...]}`` tables), ``eta2``
    and ``F_um2``.
    """
    missing = [k for k in _REQUIRED if k not in raw]
    if missing:
        raise ParameterError(missing[0], "missing required key")
    unknown = sorted(set(raw) - set(_REQUIRED))
    if unknown:
        raise ParameterError(unknown[0], "unknown key")

    center = _finite("center_thz", raw["center_thz"])
    width = _finite("width_thz", raw["width_thz"])
    R = _finite("R", raw["R"])
    chi3 = _finite("chi3", raw["chi3"])
    d_um = _finite("d_um", raw["d_um"])
    eta2 = _finite("eta2", raw["eta2"])
    F_um2 = _finite("F_um2", raw["F_um2"])

    for key, value in (("center_thz", center), ("width_thz", width), ("chi3", chi3),
                       ("d_um", d_um), ("F_um2", F_um2)):
        if value <= 0:
            raise ParameterError(key, f"must be positive, got {value}")
    if not 0.0 < R < 1.0:
        raise ParameterError("R", f"reflectivity must lie in (0, 1), got {R}")
    if not 0.0 < eta2 <= 1.0:
        raise ParameterError("eta2", f"conversion efficiency must lie in (0, 1], got {eta2}")
    if width >= center:
        raise ParameterError("width_thz", "probe width must be smaller than its centre frequency")
    if center < 5.0 * width:
        warnings.warn("probe spectrum reaches zero frequency within 5 standard deviations",
                      stacklevel=2)

    return ExperimentParams(
        omega0=thz_to_omega(center),
        sigma=thz_to_omega(width),
        R=R,
        chi3=chi3,
        d=d_um * 1e-6,
        n=_response("n", raw["n"], 0.0, math.inf, False),
        # eta = 0 (blocked detector) is accepted so that null references can be run
        eta=_response("eta", raw["eta"], 0.0, 1.0, True),
        eta2=eta2,
        F=F_um2 * 1e-12,
    )
