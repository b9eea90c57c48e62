import math
import sys
import warnings
from pathlib import Path

import pytest

from qfs.gating import BandpassWindow, build_spectra, compute_gating
from qfs.physconst import validate_params
from qfs.quantstat import make_cat_state

ROOT = Path(__file__).resolve().parents[1]
FIG2_CONFIG = ROOT / "configs" / "fig2.json"

FIG2_RAW = {
    "center_thz": 193.0,
    "width_thz": 31.0,
    "R": 2.0 / 3.0,
    "chi3": 2.5e-21,
    "d_um": 12.0,
    "n": 2.4,
    "eta": 1.0,
    "eta2": 0.1,
    "F_um2": 9.0,
}


@pytest.fixture(scope="session")
def fig2():
    return validate_params(FIG2_RAW)


@pytest.fixture(scope="session")
def spectra(fig2):
    return build_spectra(fig2)


@pytest.fixture(scope="session")
def gating_sym(fig2, spectra):
    """No bandpass, phi = -pi/2."""
    return compute_gating(fig2, -math.pi / 2, spectra=spectra)


@pytest.fixture(scope="session")
def gating_cut(fig2, spectra):
    """Upper cut at 2 w0, phi = 0."""
    return compute_gating(fig2, 0.0, BandpassWindow.upper_cut(2 * fig2.omega0), spectra=spectra)


@pytest.fixture(scope="session")
def default_cat(fig2):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return make_cat_state(0.26 * fig2.omega0, 0.13 * fig2.omega0, 1.0)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
