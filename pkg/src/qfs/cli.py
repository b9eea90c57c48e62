"""Command-line front end: ``qfs <scenario> --config fig2.json [--out x.csv] [--svg x.svg]``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 oracle tolerance exceeded.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, load_config
from .fockcheck import build_signal_operator, discretize_cat, gauss_legendre_basis, oracle_moments
from .gating import BandpassWindow, PhaseError, build_spectra, compute_gating, extract_theta, sampling_kernel
from .quantstat import (
    amplitude_from_photons,
    background_variance,
    background_variance_closed_form,
    cat_variance_scan,
    crossover_photons,
    make_cat_state,
    vacuum_variance,
)
from .report import PlotStyle, ResultTable, emit_plot, write_atomic

__all__ = [
    "main",
    "run_gating",
    "run_vacuum_sweep",
    "run_cat_scan",
    "run_reference",
    "run_oracle_check",
    "OracleToleranceError",
    "SCENARIOS",
    "EXIT_OK",
    "EXIT_CONFIG",
    "EXIT_NUMERICAL",
    "EXIT_ORACLE",
]

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_ORACLE = 0, 2, 3, 4


class OracleToleranceError(RuntimeError):
    def __init__(self, table: ResultTable, message: str):
        super().__init__(message)
        self.table = table


def _workers() -> int:
    raw = os.environ.get("QFS_THREADS")
    default = os.cpu_count() or 1
    if raw is None:
        return default
    try:
        return max(1, min(int(raw), default))
    except ValueError:
        return default


def _table(cfg: RunConfig, scenario: str, columns, rows, meta=None) -> ResultTable:
    return ResultTable(tuple(columns), np.asarray(rows, dtype=float), scenario, cfg.digest,
                       __version__, dict(meta or {}))


def run_gating(cfg: RunConfig) -> ResultTable:
    p = cfg.params
    g = compute_gating(p, cfg.phi, cfg.window, cfg.lo_delay, **cfg.grid_kw)
    try:
        theta, residual = extract_theta(g)
    except PhaseError:
        theta = residual = math.nan
    rows = np.column_stack([g.omegas, g.g_plus.real, g.g_plus.imag, g.g_minus.real, g.g_minus.imag,
                            g.g_phi.real, g.g_phi.imag])
    meta = {"phi_rad": cfg.phi, "theta_rad": theta, "flatness_residual": residual}
    return _table(cfg, "gating", ("omega_rad_s", "re_g_plus", "im_g_plus", "re_g_minus",
                                  "im_g_minus", "re_g_phi", "im_g_phi"), rows, meta)


def run_vacuum_sweep(cfg: RunConfig) -> ResultTable:
    p = cfg.params
    sweep = cfg.section("vacuum_sweep")
    photons = np.geomspace(sweep["np_min"], sweep["np_max"], sweep["points"])
    spectra = build_spectra(p, lo_delay=cfg.lo_delay, **cfg.grid_kw)
    g = compute_gating(p, cfg.phi, cfg.window, cfg.lo_delay, spectra=spectra)
    vac = np.array([vacuum_variance(g, p, amplitude_from_photons(n, p)) for n in photons])
    bg = np.array([background_variance_closed_form(p, n) for n in photons])
    # quadrature crossover: vac = K_q N^3, bg = b N
    k_q = vac[0] / photons[0] ** 3
    b = bg[0] / photons[0]
    meta = {
        "crossover_photons": crossover_photons(p),
        "crossover_photons_quadrature": math.sqrt(b / k_q) if k_q > 0 and b > 0 else math.nan,
        "phi_rad": cfg.phi,
    }
    rows = np.column_stack([photons, vac / photons, bg / photons, (vac + bg) / photons])
    return _table(cfg, "vacuum-sweep", ("n_p", "vac_variance_over_np", "background_variance_over_np",
                                        "total_over_np"), rows, meta)


def _cat_setup(cfg: RunConfig):
    p = cfg.params
    c = cfg.section("cat")
    state = make_cat_state(c["center_omega0"] * p.omega0, c["width_omega0"] * p.omega0,
                           c["mean_photons"])
    window = BandpassWindow() if c["cut_omega0"] is None else BandpassWindow.upper_cut(c["cut_omega0"] * p.omega0)
    g = compute_gating(p, 0.0, window, cfg.lo_delay, **cfg.grid_kw)
    amplitude = amplitude_from_photons(c["probe_photons"], p)
    period = 2 * math.pi / state.mode_center
    tau_max = c["tau_cycles"] * period
    # theta = 0 at phi = -pi/2, theta = pi/2 at phi = 0
    kernels = {phi: sampling_kernel(g.with_phi(phi), p, amplitude) for phi in (-math.pi / 2, 0.0)}
    return state, g, kernels, tau_max


def run_cat_scan(cfg: RunConfig) -> ResultTable:
    c = cfg.section("cat")
    state, g, kernels, tau_max = _cat_setup(cfg)
    taus = np.linspace(-tau_max, tau_max, c["tau_points"])
    traces = [cat_variance_scan(state, k.at_delay, taus) for k in kernels.values()]
    meta = {"alpha0_sq": abs(state.alpha0) ** 2, "mode_truncated_fraction": state.truncated_fraction}
    for phi, label in zip(kernels, ("theta0", "theta_pi_2")):
        try:
            meta[f"{label}_theta_rad"] = extract_theta(g.with_phi(phi))[0]
        except PhaseError:
            meta[f"{label}_theta_rad"] = math.nan
    rows = np.column_stack([taus] + [t.variance for t in traces])
    return _table(cfg, "cat-scan", ("tau_s", "normalized_variance_theta0",
                                    "normalized_variance_theta_pi_2"), rows, meta)


def run_reference(cfg: RunConfig) -> ResultTable:
    p = cfg.params
    spectra = build_spectra(p, lo_delay=cfg.lo_delay, **cfg.grid_kw)
    rows = []
    for n in cfg.section("reference")["photons"]:
        quad = background_variance(spectra.lo, p, amplitude_from_photons(n, p))
        closed = background_variance_closed_form(p, n)
        ratio = quad / closed if closed > 0 else math.nan
        rows.append((n, quad, closed, ratio))
    return _table(cfg, "reference", ("n_p", "background_quadrature", "background_closed_form",
                                     "quadrature_over_closed_form"), rows)


def run_oracle_check(cfg: RunConfig) -> ResultTable:
    o = cfg.section("oracle")
    state, _, kernels, tau_max = _cat_setup(cfg)
    basis = gauss_legendre_basis(state, o["modes"], o["cutoff"], max_dim=o["max_dim"])
    fock = discretize_cat(state, basis, o["max_leakage"], strict=False)
    taus = np.linspace(-tau_max, tau_max, o["tau_points"]) if o["tau_points"] > 1 else np.zeros(1)

    rows = []
    for phi, kernel in kernels.items():
        trace = cat_variance_scan(state, kernel.at_delay, taus, normalize=False,
                                  nodes=basis.mode_centers, weights=basis.mode_weights)

        def oracle(tau, kernel=kernel):
            return oracle_moments(fock, build_signal_operator(kernel.at_delay(tau), basis))

        with ThreadPoolExecutor(max_workers=_workers()) as pool:
            moments = list(pool.map(oracle, taus))
        for tau, analytic, vac, (_, var) in zip(taus, trace.variance, trace.vacuum, moments):
            rows.append((tau, phi, analytic / vac, var / vac, abs(var - analytic) / abs(analytic)))
    rows = np.asarray(rows)
    max_err = float(rows[:, 4].max())
    meta = {"modes": basis.K, "cutoff": basis.cutoff, "leakage": fock.leakage,
            "mode_norm_error": fock.mode_norm_error, "tolerance": o["tolerance"],
            "max_rel_error": max_err}
    table = _table(cfg, "oracle-check", ("tau_s", "phi_rad", "analytic_normalized",
                                         "oracle_normalized", "rel_error"), rows, meta)
    if not max_err <= o["tolerance"]:
        raise OracleToleranceError(table, f"oracle relative error {max_err:.3e} exceeds {o['tolerance']:.1e}")
    if fock.leakage > o["max_leakage"]:
        raise OracleToleranceError(table, f"truncation leakage {fock.leakage:.3e} exceeds {o['max_leakage']:.1e}")
    return table


_THZ = 2 * math.pi * 1e12

SCENARIOS = {
    "gating": (run_gating, PlotStyle("omega_rad_s", ("re_g_plus", "re_g_minus", "re_g_phi", "im_g_phi"),
                                     title="Gating functions", x_label="Omega/2pi (THz)",
                                     y_label="G (s/rad)", x_scale=_THZ)),
    "vacuum-sweep": (run_vacuum_sweep, PlotStyle("n_p", ("vac_variance_over_np", "background_variance_over_np",
                                                         "total_over_np"), log_x=True, log_y=True,
                                                 title="Signal variance / N_P",
                                                 x_label="probe photons N_P", y_label="variance / N_P")),
    "cat-scan": (run_cat_scan, PlotStyle("tau_s", ("normalized_variance_theta0",
                                                   "normalized_variance_theta_pi_2"),
                                         title="Cat-state variance / vacuum", x_label="delay tau (fs)",
                                         y_label="normalized variance", x_scale=1e-15)),
    "reference": (run_reference, PlotStyle("n_p", ("background_quadrature", "background_closed_form"),
                                           log_x=True, log_y=True, title="LO shot-noise reference",
                                           x_label="probe photons N_P", y_label="variance")),
    "oracle-check": (run_oracle_check, PlotStyle("tau_s", ("analytic_normalized", "oracle_normalized"),
                                                 title="Analytic vs Fock oracle", x_label="delay tau (fs)",
                                                 y_label="normalized variance", x_scale=1e-15)),
}


def _emit(table: ResultTable, style: PlotStyle, out, svg, cfg: RunConfig, scenario: str):
    out_cfg = cfg.section("output")
    directory = out_cfg.get("directory")
    if out is None and directory:
        out = Path(directory) / f"{scenario}.csv"
    if svg is None and directory and out_cfg.get("svg"):
        svg = Path(directory) / f"{scenario}.svg"
    text = table.to_csv()
    if out is None:
        sys.stdout.write(text)
    else:
        write_atomic(out, text)
    if svg is not None:
        if table.rows.shape[0] >= 2:
            write_atomic(svg, emit_plot(table, style))
        else:
            print(f"qfs: {scenario}: fewer than two rows, no plot written", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qfs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"qfs {__version__}")
    sub = parser.add_subparsers(dest="scenario", required=True)
    for name in SCENARIOS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="JSON run configuration")
        sp.add_argument("--out", help="CSV output path (default: stdout)")
        sp.add_argument("--svg", help="optional SVG plot path")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    runner, style = SCENARIOS[args.scenario]
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"qfs: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        with np.errstate(over="raise", invalid="ignore", divide="ignore"):
            table = runner(cfg)
        _emit(table, style, args.out, args.svg, cfg, args.scenario)
    except OracleToleranceError as exc:
        _emit(exc.table, style, args.out, args.svg, cfg, args.scenario)
        print(f"qfs: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except Exception as exc:  # numerical failures of any kind
        print(f"qfs: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
