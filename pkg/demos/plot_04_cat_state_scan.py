"""
Sampling a broadband cat state
==============================

An even cat |a u> + |-a u> in a THz mode u centred at 0.26 w0, with one
photon on average. The signal has zero mean; its variance, normalised to
the vacuum value, depends on the delay tau between probe and THz pulse and
on which quadrature is detected. Far from overlap it returns to 1.
"""

import math
import warnings

import numpy as np

from qfs import BandpassWindow, compute_gating, sampling_kernel
from qfs.quantstat import amplitude_from_photons, cat_variance_scan, make_cat_state
from qfs.report import PlotStyle, ResultTable, emit_plot

from _common import fig2, save

p = fig2().params
with warnings.catch_warnings():
    warnings.simplefilter("ignore")  # the mode is only two widths above W = 0
    state = make_cat_state(0.26 * p.omega0, 0.13 * p.omega0, 1.0)
print(f"|alpha0|^2 = {abs(state.alpha0) ** 2:.8f}, mode norm below W = 0: {state.truncated_fraction:.2e}")

###############################################################################
# Gating with the 2 w0 cut; phi = -pi/2 detects theta = 0, phi = 0 detects
# theta = pi/2.

g = compute_gating(p, 0.0, BandpassWindow.upper_cut(2 * p.omega0))
amp = amplitude_from_photons(1e10, p)
period = 2 * math.pi / state.mode_center
taus = np.linspace(-10 * period, 10 * period, 401)
traces = {}
for label, phi in (("theta_0", -math.pi / 2), ("theta_pi_2", 0.0)):
    kernel = sampling_kernel(g.with_phi(phi), p, amp)
    traces[label] = cat_variance_scan(state, kernel.at_delay, taus).variance
    print(f"{label}: min {traces[label].min():.4f}, max {traces[label].max():.4f}, "
          f"ends {traces[label][0]:.6f} {traces[label][-1]:.6f}")

###############################################################################
# One quadrature dips below the vacuum level near tau = 0 while the other
# rises well above it.

table = ResultTable(("tau", "theta_0", "theta_pi_2"), np.column_stack([taus, traces["theta_0"],
                                                                      traces["theta_pi_2"]]), "demo", "-", "-")
save("cat_scan.svg", emit_plot(table, PlotStyle("tau", ("theta_0", "theta_pi_2"), x_scale=1e-15,
                                                x_label="delay (fs)", y_label="variance / vacuum")))
