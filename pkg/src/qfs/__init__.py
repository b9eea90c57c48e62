"""Subcycle sampling of quantum THz fields by chi(3) field-induced second harmonics.

A chi(3) field-induced second-harmonic signal is homodyned against a
frequency-doubled local oscillator. The package computes the spectral gating
functions, signal variances for the THz vacuum, the LO shot-noise background
and broadband even cat states, and checks the analytic moments against a
brute-force truncated Fock-space oracle.
"""

__version__ = "0.1.0"

from .physconst import CONST, ExperimentParams, ParameterError, validate_params  # noqa: E402
from .spectral import FrequencyGrid, SpectralFunction, convolve, integrate, make_grid  # noqa: E402
from .gating import (  # noqa: E402
    BandpassWindow,
    GatingFunction,
    SamplingKernel,
    build_spectra,
    compute_gating,
    extract_theta,
    sampling_kernel,
)
from .quantstat import (  # noqa: E402
    CatState,
    amplitude_from_photons,
    background_variance,
    background_variance_closed_form,
    cat_variance_scan,
    crossover_photons,
    make_cat_state,
    photons_from_amplitude,
    vacuum_variance,
    vacuum_variance_closed_form,
)
