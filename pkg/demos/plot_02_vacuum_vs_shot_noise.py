"""
THz vacuum signal against LO shot noise
=======================================

The vacuum contribution to the signal variance grows as N_P^3, the LO
shot-noise background only as N_P. Divided by N_P, the two curves cross at
the probe photon number where vacuum fluctuations become the larger term.
"""

import math

import numpy as np

from qfs import compute_gating
from qfs.quantstat import (
    amplitude_from_photons,
    background_variance_closed_form,
    crossover_photons,
    vacuum_prefactor,
    vacuum_variance,
)
from qfs.report import PlotStyle, ResultTable, emit_plot

from _common import fig2, save

p = fig2().params
g = compute_gating(p, -math.pi / 2)

###############################################################################
# Quadrature over the sampling kernel agrees with K N_P^3.

K = vacuum_prefactor(p)
print(f"K = {K:.5e}")
for n in (1e8, 1e10, 1e12):
    quad = vacuum_variance(g, p, amplitude_from_photons(n, p))
    print(f"N_P = {n:.0e}: quadrature {quad:.6e}, K N^3 {K * n ** 3:.6e}")

###############################################################################
# Crossover.

n_star = crossover_photons(p)
print(f"crossover N_P = {n_star:.4e}")
print("background / N_P =", background_variance_closed_form(p, 1.0))

###############################################################################
# The sweep, normalised by N_P as a log-log plot.

photons = np.geomspace(1e8, 1e14, 61)
vac = np.array([vacuum_variance(g, p, amplitude_from_photons(n, p)) for n in photons]) / photons
bg = np.full_like(photons, background_variance_closed_form(p, 1.0))
table = ResultTable(("n_p", "vacuum", "background"), np.column_stack([photons, vac, bg]), "demo", "-", "-")
save("vacuum_sweep.svg", emit_plot(table, PlotStyle("n_p", ("vacuum", "background"), log_x=True, log_y=True,
                                                    x_label="probe photons N_P", y_label="variance / N_P")))
