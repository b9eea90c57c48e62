"""
Probe spectra and gating functions
==================================

The probe is a Gaussian around w0; the local oscillator is its
self-convolution, centred at 2 w0 and sqrt(2) wider. The gating functions
G+ and G- overlap the LO with the probe self-convolution shifted by +-W.
Without spectral filtering both reduce to a Gaussian in W.
"""

import math

import numpy as np

from qfs import build_spectra, compute_gating
from qfs.report import PlotStyle, ResultTable, emit_plot
from qfs.spectral import integrate

from _common import fig2, save

cfg = fig2()
p = cfg.params
print(f"w0 = {p.omega0:.4e} rad/s, sigma = {p.sigma:.4e} rad/s")

###############################################################################
# Spectra. Both are unit-area densities; the LO agrees with f*f.

spectra = build_spectra(p)
print("probe area      ", integrate(spectra.probe))
print("LO area         ", integrate(spectra.lo))
print("max |LO - f*f|  ", np.max(np.abs(spectra.lo.values - spectra.probe_conv.values)))

###############################################################################
# Gating functions for the unfiltered case, against the closed form
# exp(-W^2 / 8 sigma^2) / (2 sqrt(2 pi) sigma).

g = compute_gating(p, -math.pi / 2, spectra=spectra)
om = g.omegas
closed = np.exp(-om ** 2 / (8 * p.sigma ** 2)) / (2 * math.sqrt(2 * math.pi) * p.sigma)
sel = om <= 4 * p.sigma
print("max rel. deviation from closed form:", np.max(np.abs(g.g_plus[sel] / closed[sel] - 1)))

###############################################################################
# Plot G+ and the closed form on a THz axis.

thz = 2 * math.pi * 1e12
table = ResultTable(("omega", "G_plus", "closed_form"), np.column_stack([om, g.g_plus.real, closed]),
                    "demo", "-", "-")
save("gating.svg", emit_plot(table, PlotStyle("omega", ("G_plus", "closed_form"), x_scale=thz,
                                              title="G+ without bandpass", x_label="Omega/2pi (THz)",
                                              y_label="G (s/rad)")))
