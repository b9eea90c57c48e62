"""
Selecting a quadrature with a spectral cut
==========================================

Without filtering G+ and G- are equal, so G_phi is purely real and vanishes
at phi = 0. Blocking LO frequencies above 2 w0 removes the sum-frequency
branch and G+ and G- separate. G_phi then keeps a frequency-independent
phase: the detected field quadrature theta follows the LO phase phi.
"""

import math

import numpy as np

from qfs import BandpassWindow, compute_gating, extract_theta

from _common import fig2

p = fig2().params

###############################################################################
# Unfiltered: nulling at phi = 0, maximal response at phi = +-pi/2.

sym = compute_gating(p, 0.0)
print("no cut, max|G_phi(0)| / max|G+| =", np.max(np.abs(sym.g_phi)) / np.max(np.abs(sym.g_plus)))

###############################################################################
# With the cut at 2 w0.

cut = compute_gating(p, 0.0, BandpassWindow.upper_cut(2 * p.omega0))
print("cut,    max|G+| / max|G-|      =", np.max(np.abs(cut.g_plus)) / np.max(np.abs(cut.g_minus)))
for phi in (0.0, -math.pi / 2, -math.pi / 4):
    theta, spread = extract_theta(cut.with_phi(phi))
    print(f"phi = {phi:+.4f}: theta = {theta:.10f}, spread over W = {spread:.2e}")

###############################################################################
# Only phi = 0 and phi = -pi/2 give a flat phase; intermediate phases mix
# quadratures differently at different W, which shows up as a large spread.
