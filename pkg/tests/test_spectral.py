import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import simpson

from qfs.spectral import (
    GridError,
    SpectralFunction,
    centered_grid,
    convolve,
    gaussian_distribution,
    integrate,
    make_grid,
    simpson_weights,
    weighted_overlap,
)


def test_make_grid_step():
    g = make_grid(0.0, 15.0, 16)
    assert g.step == 1.0
    assert g.omegas[0] == 0.0 and g.omegas[-1] == 15.0


def test_make_grid_large():
    g = make_grid(0.0, 2 * math.pi * 400e12, 4096)
    d = np.diff(g.omegas)
    assert g.n_points == 4096
    assert np.allclose(d, g.step, rtol=1e-9, atol=0)


@pytest.mark.parametrize("args", [(5.0, 5.0, 16), (6.0, 5.0, 16), (0.0, 1.0, 15), (0.0, math.inf, 32)])
def test_make_grid_rejects(args):
    with pytest.raises(GridError):
        make_grid(*args)


def test_gaussian_peak():
    g = make_grid(-10.0, 10.0, 2001)
    f = gaussian_distribution(g, 0.0, 1.0)
    assert f.values[1000].real == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15, abs=0)
    assert f.values[1000].real == pytest.approx(0.39894, abs=1e-5)


def test_gaussian_normalized():
    g = make_grid(-8.0, 8.0, 1601)
    assert abs(integrate(gaussian_distribution(g, 0.0, 1.0)) - 1) < 1e-9


def test_gaussian_truncation_warns():
    with pytest.warns(UserWarning):
        gaussian_distribution(make_grid(-2.0, 2.0, 101), 0.0, 1.0)


def test_gaussian_rejects_width():
    with pytest.raises(ValueError):
        gaussian_distribution(make_grid(-2.0, 2.0, 101), 0.0, 0.0)


def test_integrate_constant():
    g = make_grid(0.0, 1.0, 17)
    assert integrate(SpectralFunction(g, np.ones(17))) == pytest.approx(1.0, abs=1e-15)


def test_integrate_odd():
    g = make_grid(-3.0, 3.0, 301)
    om = g.omegas
    assert abs(integrate(SpectralFunction(g, om * np.exp(-om ** 2)))) < 1e-12


@pytest.mark.parametrize("n", [3, 4, 5, 16, 17, 100, 101])
def test_simpson_weights_match_scipy(n):
    x = np.linspace(0.2, 1.7, n)
    y = np.exp(np.sin(3 * x))
    assert simpson_weights(n, x[1] - x[0]) @ y == pytest.approx(simpson(y, x=x), rel=1e-14, abs=0)


def test_quadrature_order():
    # halving the step changes Gaussian integrals by far less than 1e-8
    coarse = make_grid(-8.0, 8.0, 401)
    fine = make_grid(-8.0, 8.0, 801)
    for center, width in [(0.0, 1.0), (0.5, 0.7), (-1.0, 1.3)]:
        a = integrate(gaussian_distribution(coarse, center, width))
        b = integrate(gaussian_distribution(fine, center, width))
        assert abs(a - b) / abs(b) < 1e-8


def _pair(step=0.01, c1=5.0, c2=5.0, s1=1.0, s2=1.0):
    a = gaussian_distribution(centered_grid(c1, 9 * s1, step), c1, s1)
    b = gaussian_distribution(centered_grid(c2, 9 * s2, step), c2, s2)
    return a, b


def test_convolution_gaussian_identity():
    a, b = _pair()
    ab = convolve(a, b)
    om = ab.omegas
    exact = np.exp(-((om - 10.0) ** 2) / 4.0) / (math.sqrt(2.0) * math.sqrt(2 * math.pi))
    assert np.max(np.abs(ab.values - exact)) <= 1e-8
    assert abs(integrate(ab) - 1) <= 1e-8


def test_convolution_delta_limit():
    g = gaussian_distribution(centered_grid(0.0, 9.0, 0.005), 0.0, 1.0)
    errs = []
    for w in (0.2, 0.05, 0.02):
        d = gaussian_distribution(centered_grid(3.0, 9 * w, 0.005), 3.0, w)
        out = convolve(d, g)
        exact = np.exp(-((out.omegas - 3.0) ** 2) / 2) / math.sqrt(2 * math.pi)
        errs.append(np.max(np.abs(out.values - exact)))
    assert errs[0] > errs[1] > errs[2]
    assert errs[-1] < 1e-3


def test_convolution_fft_matches_direct():
    a, b = _pair(step=0.02, c1=3.0, c2=4.0, s1=0.5, s2=1.1)
    direct = convolve(a, b, method="direct")
    fast = convolve(a, b, method="fft")
    assert np.max(np.abs(direct.values - fast.values)) <= 1e-10 * np.max(np.abs(direct.values))


def test_convolution_direct_sum_oracle():
    rng = np.random.default_rng(3)
    g1, g2 = make_grid(0.0, 0.31, 32), make_grid(1.0, 1.17, 18)
    a = SpectralFunction(g1, rng.normal(size=32) + 1j * rng.normal(size=32))
    b = SpectralFunction(g2, rng.normal(size=18))
    out = convolve(a, b)
    h = g1.step
    ref = np.array([sum(a.values[i] * b.values[k - i] for i in range(32) if 0 <= k - i < 18)
                    for k in range(49)]) * h
    assert np.allclose(out.values, ref, rtol=0, atol=1e-13)
    assert out.grid.omega_min == pytest.approx(1.0)


def test_convolution_step_mismatch():
    a = gaussian_distribution(make_grid(-5, 5, 101), 0, 1)
    b = gaussian_distribution(make_grid(-5, 5, 201), 0, 1)
    with pytest.raises(GridError):
        convolve(a, b)


@settings(max_examples=30, deadline=None)
@given(st.floats(-2, 2), st.floats(0.3, 1.5), st.floats(-2, 2), st.floats(0.3, 1.5))
def test_convolution_commutative_and_area(c1, s1, c2, s2):
    a = gaussian_distribution(centered_grid(c1, 9 * s1, 0.02), c1, s1)
    b = gaussian_distribution(centered_grid(c2, 9 * s2, 0.02), c2, s2)
    ab, ba = convolve(a, b), convolve(b, a)
    assert np.max(np.abs(ab.values - ba.values)) <= 1e-12
    assert abs(integrate(ab) - integrate(a) * integrate(b)) <= 1e-8


@pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
def test_overlap_self(s):
    f = gaussian_distribution(make_grid(-10 * s, 10 * s, 2001), 0.0, s)
    assert weighted_overlap(f, f) == pytest.approx(1 / (2 * s * math.sqrt(math.pi)), rel=1e-12, abs=0)


def test_overlap_zero_weight_and_real():
    g = make_grid(-6, 6, 501)
    f = gaussian_distribution(g, 0.0, 1.0)
    h = gaussian_distribution(g, 0.5, 1.0)
    assert weighted_overlap(f, h, 0.0) == 0
    assert abs(weighted_overlap(f, h, lambda om: 1 + om ** 2).imag) <= 1e-14


def test_overlap_grid_mismatch():
    f = gaussian_distribution(make_grid(-6, 6, 501), 0.0, 1.0)
    h = gaussian_distribution(make_grid(-6, 6, 401), 0.0, 1.0)
    with pytest.raises(GridError):
        weighted_overlap(f, h)


def test_spectral_function_invariants():
    g = make_grid(0, 1, 16)
    with pytest.raises(GridError):
        SpectralFunction(g, np.ones(15))
    with pytest.raises(GridError):
        SpectralFunction(g, np.full(16, np.nan))
    f = SpectralFunction(g, np.ones(16))
    with pytest.raises(ValueError):
        f.values[0] = 2.0
