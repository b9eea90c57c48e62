"""
Checking the analytic variance against a Fock-space calculation
===============================================================

The analytic cat variance uses only the moments <b^dag b> and <b^2> of the
cat mode. As an independent check, the continuum is replaced by a few
Gauss-Legendre modes, the cat is built explicitly as a superposition of
truncated multimode coherent states, and the signal operator is applied
to it directly.
"""

import math
import warnings

import numpy as np

from qfs import BandpassWindow, compute_gating, sampling_kernel
from qfs.fockcheck import (
    build_signal_operator,
    discretize_cat,
    gauss_legendre_basis,
    number_operator,
    oracle_moments,
)
from qfs.quantstat import amplitude_from_photons, cat_variance_scan, make_cat_state

from _common import fig2

p = fig2().params
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    state = make_cat_state(0.26 * p.omega0, 0.13 * p.omega0, 1.0)

###############################################################################
# Three modes with twelve Fock levels each: a 1728-dimensional space.

basis = gauss_legendre_basis(state, 3, 12)
fock = discretize_cat(state, basis)
print(f"dim = {basis.dim}, leakage = {fock.leakage:.2e}, mode norm error = {fock.mode_norm_error:+.3f}")
print("<N> =", oracle_moments(fock, number_operator(basis))[0])

###############################################################################
# Variance at a few delays, both ways, on the same three-mode rule.

g = compute_gating(p, 0.0, BandpassWindow.upper_cut(2 * p.omega0))
kernel = sampling_kernel(g, p, amplitude_from_photons(1e10, p))
taus = np.array([-20e-15, 0.0, 5e-15, 20e-15])
analytic = cat_variance_scan(state, kernel.at_delay, taus, normalize=False,
                             nodes=basis.mode_centers, weights=basis.mode_weights).variance
for tau, a in zip(taus, analytic):
    _, v = oracle_moments(fock, build_signal_operator(kernel.at_delay(tau), basis))
    print(f"tau = {tau * 1e15:+6.1f} fs: analytic {a:.8e}, oracle {v:.8e}, rel {abs(v / a - 1):.1e}")

###############################################################################
# Three nodes are a coarse rule for the mode (note the mode norm error); the
# agreement above is between two independent evaluations of the same
# discretised problem. The continuum result needs many more nodes:

cont = cat_variance_scan(state, kernel.at_delay, [0.0]).variance[0]
for K in (3, 8, 20, 60):
    b = gauss_legendre_basis(state, K, 2, n_widths=8, max_dim=math.inf)
    v = cat_variance_scan(state, kernel.at_delay, [0.0], nodes=b.mode_centers, weights=b.mode_weights).variance[0]
    print(f"K = {K:2d}: normalised variance {v:.6f}  (continuum {cont:.6f})")
