"""Command-line front end: sweeps, maps, figure-data recipes.

Every invocation writes CSV artifacts (12 significant digits, comma
separated) plus a JSON run manifest with the resolved configuration, so
identical inputs reproduce byte-identical outputs.

Exit codes: 0 ok, 2 unknown preset/subcommand argument, 3 config
validation failure, 4 unwritable output, 5 computation failure.
"""

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import (ConfigError, DriveConfig, LatticeConfig,
                     config_from_mapping, read_mapping)
from . import emission, greens, meanfield, observables, oracle, spectrum

EXIT_OK = 0
EXIT_PRESET = 2
EXIT_CONFIG = 3
EXIT_OUTPUT = 4
EXIT_COMPUTE = 5

TWO_PI = 2.0 * np.pi

FIG_PRESETS = ("fig1b", "fig1b-inset", "fig2a", "fig2b",
               "fig3a", "fig3b", "fig3c", "fig3d", "fig3e")


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return f"{float(x):.12g}"


def _write_csv(path, header, rows):
    try:
        with open(path, "w") as f:
            f.write(",".join(header) + "\n")
            for row in rows:
                f.write(",".join(_fmt(x) for x in row) + "\n")
    except OSError as exc:
        raise _OutputError(str(exc)) from exc


def _write_json(path, payload):
    try:
        with open(path, "w") as f:
            json.dump(payload, f, indent=1, sort_keys=True)
            f.write("\n")
    except OSError as exc:
        raise _OutputError(str(exc)) from exc


class _OutputError(RuntimeError):
    pass


def _manifest(out_dir, command, resolved, outputs, extra=None):
    payload = {
        "command": command,
        "config": resolved,
        "outputs": sorted(str(o) for o in outputs),
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    if extra:
        payload.update(extra)
    _write_json(Path(out_dir) / f"{command}.manifest.json", payload)


def _stable_branches(w, delta, g_bar):
    return [b for b in meanfield.self_consistency_roots(w, delta, g_bar)
            if b.stability == "stable"]


def _chosen_branch(drive, g_bar):
    """Lowest stable branch: the state reached adiabatically from below."""
    return _stable_branches(abs(drive.omega), drive.delta, g_bar)[0]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_lattice_sum(cfg, drive, out_dir, grid, _threads):
    n = grid or 41
    l = cfg.period_l
    ks = np.linspace(-np.pi / l, np.pi / l, n)
    rows = []
    for ky in ks:
        for kx in ks:
            try:
                res = greens.lattice_sum_ewald((kx, ky), cfg,
                                               delta=drive.delta)
                rows.append((kx / TWO_PI, ky / TWO_PI, res.g_bar.real,
                             res.g_bar.imag, res.delta_k, res.gamma_k,
                             res.err_estimate))
            except greens.LatticeSumError:
                rows.append((kx / TWO_PI, ky / TWO_PI) + (float("nan"),) * 5)
    path = Path(out_dir) / "lattice-sum.csv"
    _write_csv(path, ["kx", "ky", "re_gbar", "im_gbar",
                      "delta_k", "gamma_k", "err"], rows)
    return [path], None


def _sweep_grid(grid, hi=5.0):
    n = grid or 201
    return np.linspace(0.0, hi, n)[1:]


def cmd_meanfield_sweep(cfg, drive, out_dir, grid, _threads):
    g_bar = greens.lattice_sum_ewald(drive.k_par, cfg).g_bar
    rows = []
    for w in _sweep_grid(grid):
        for b in meanfield.self_consistency_roots(w, drive.delta, g_bar):
            rows.append((w, b.branch_id, b.x, b.omega_eff.real,
                         b.omega_eff.imag, b.stability == "stable"))
    path = Path(out_dir) / "meanfield-sweep.csv"
    _write_csv(path, ["omega", "branch_id", "x", "re_omega_eff",
                      "im_omega_eff", "stable"], rows)
    folds = meanfield.bistable_interval(drive.delta, g_bar)
    side = Path(out_dir) / "meanfield-sweep.folds.json"
    _write_json(side, {"folds": list(folds) if folds else [],
                       "bistable": folds is not None})
    return [path, side], None


def cmd_population_sweep(cfg, drive, out_dir, grid, _threads):
    g_bar = greens.lattice_sum_ewald(drive.k_par, cfg).g_bar
    rows = []
    for w in _sweep_grid(grid):
        for b in meanfield.self_consistency_roots(w, drive.delta, g_bar):
            coh, incoh, tot = observables.population_per_emitter(
                b.omega_eff, drive.delta)
            rows.append((w, b.branch_id, coh, incoh, tot))
    path = Path(out_dir) / "population-sweep.csv"
    _write_csv(path, ["omega", "branch_id", "n_coh", "n_incoh", "n_total"],
               rows)
    return [path], None


def _bz_axes(cfg, n):
    edge = np.pi / cfg.period_l
    return np.linspace(-edge, edge, n)


def cmd_bz_population(cfg, drive, out_dir, grid, _threads, l_eff=None,
                      ky_cut=False):
    n = grid or 201
    g_bar = greens.lattice_sum_ewald(drive.k_par, cfg).g_bar
    b = _chosen_branch(drive, g_bar)
    pop = observables.bz_population(b.omega_eff, drive.delta, cfg, drive)
    l_eff = l_eff or 25.0 * cfg.period_l
    ks = _bz_axes(cfg, n)
    kys = np.array([0.0]) if ky_cut else ks
    rows = []
    for ky in kys:
        kxg, kyg = ks, np.full_like(ks, ky)
        coh_inc = observables.broadened_bz_map(pop, l_eff, kxg, kyg, cfg)
        flat = pop.incoh_density
        for kx, tot in zip(ks, coh_inc):
            rows.append((kx / TWO_PI, ky / TWO_PI, tot - flat, flat, tot))
    path = Path(out_dir) / "bz-population.csv"
    _write_csv(path, ["kx", "ky", "n_coh", "n_incoh", "n_total"], rows)
    return [path], None


def cmd_spectrum(cfg, drive, out_dir, grid, _threads):
    g_bar = greens.lattice_sum_ewald(drive.k_par, cfg).g_bar
    b = _chosen_branch(drive, g_bar)
    trip = spectrum.mollow_parameters(b.omega_eff, drive.delta)
    n = grid or 2001
    span = 4.0 * abs(b.omega_eff) + 10.0
    w = np.linspace(-span, span, n)
    s = spectrum.incoherent_spectrum(trip, w)
    path = Path(out_dir) / "spectrum.csv"
    _write_csv(path, ["omega", "s_incoherent"], zip(w, s))
    side = Path(out_dir) / "spectrum.peaks.json"
    _write_json(side, {
        "peaks": [{"omega_p": p.omega_p, "gamma_p": p.gamma_p,
                   "L_p": p.L_p, "K_p": p.K_p} for p in trip.peaks],
        "coherent_weight": trip.coherent_weight,
    })
    return [path, side], None


def _window_map_rows(cfg, drive, trip, n, l_eff):
    """Per-k rows (kx, ky, i_central, i_sidebands, i_total) in I_L units."""
    wins = emission.default_windows(trip)
    lo_c, hi_c = wins.pop("central")
    coh_line = trip.coherent_weight * emission.coherent_order_sum(
        np.asarray(drive.k_par, dtype=float), cfg)
    sigma = TWO_PI / l_eff
    ks = _bz_axes(cfg, n)
    kLx, kLy = np.asarray(drive.k_par, dtype=float)
    central_frac = sum(emission._lorentzian_window_integral(p, lo_c, hi_c)
                       for p in trip.peaks)
    side_frac = sum(emission._lorentzian_window_integral(p, lo, hi)
                    for p in trip.peaks for lo, hi in wins.values())
    rows = []
    for ky in ks:
        for kx in ks:
            gauss = np.exp(-((kx - kLx) ** 2 + (ky - kLy) ** 2)
                           / (2.0 * sigma**2)) / (2.0 * np.pi * sigma**2)
            q2 = kx**2 + ky**2
            dens = 0.0
            if q2 < TWO_PI**2:
                k_z = np.sqrt(TWO_PI**2 - q2)
                if k_z >= 1e-9 * TWO_PI:
                    f = emission._dipole_factor(kx, ky, TWO_PI, cfg.mu_hat)
                    dens = 3.0 * f / (4.0 * np.pi * TWO_PI * k_z)
            i_c = coh_line * gauss + dens * central_frac
            i_s = dens * side_frac
            rows.append((kx / TWO_PI, ky / TWO_PI, i_c, i_s, i_c + i_s))
    return rows


def cmd_intensity_map(cfg, drive, out_dir, grid, _threads):
    n = grid or 201
    g_bar = greens.lattice_sum_ewald(drive.k_par, cfg).g_bar
    b = _chosen_branch(drive, g_bar)
    trip = spectrum.mollow_parameters(b.omega_eff, drive.delta)
    rows = _window_map_rows(cfg, drive, trip, n, 25.0 * cfg.period_l)
    path = Path(out_dir) / "intensity-map.csv"
    _write_csv(path, ["kx", "ky", "i_central", "i_sidebands", "i_total"],
               rows)
    return [path], None


def _intensity_row(w, branch, drive, cfg):
    trip = spectrum.mollow_parameters(branch.omega_eff, drive.delta)
    wins = emission.default_windows(trip)
    lo_c, hi_c = wins["central"]
    coh = trip.coherent_weight * emission.coherent_order_sum(
        np.asarray(drive.k_par, dtype=float), cfg)
    central_inc = sum(
        emission._lorentzian_window_integral(p, lo_c, hi_c)
        for p in trip.peaks)
    side = sum(emission._lorentzian_window_integral(p, lo, hi)
               for name, (lo, hi) in wins.items() if name != "central"
               for p in trip.peaks)
    return coh, central_inc, side


def cmd_intensity_sweep(cfg, drive, out_dir, grid, _threads):
    g_bar = greens.lattice_sum_ewald(drive.k_par, cfg).g_bar
    rows = []
    for w in _sweep_grid(grid):
        for b in _stable_branches(w, drive.delta, g_bar):
            coh, cinc, side = _intensity_row(w, b, drive, cfg)
            rows.append((w, b.branch_id, coh, cinc, side))
    path = Path(out_dir) / "intensity-sweep.csv"
    _write_csv(path, ["omega_drive", "branch_id", "i_central_coh",
                      "i_central_incoh", "i_sidebands"], rows)
    return [path], None


def cmd_oracle(raw_cfg, out_dir):
    raw = dict(raw_cfg)
    positions = raw.pop("positions", [[0.0, 0.0, 0.0]])
    interactions = bool(raw.pop("interactions_enabled", True))
    tau_max = float(raw.pop("tau_max", 10.0))
    cfg, drive, resolved = config_from_mapping(raw)
    ens = oracle.EmitterEnsemble(
        positions=tuple(tuple(map(float, p)) for p in positions),
        drive=drive, cfg=cfg, interactions_enabled=interactions)
    liou = oracle.build_liouvillian(ens)
    rho = oracle.steady_state(liou)
    n = ens.n
    sig = [oracle.site_operator(oracle._SIGMA, i, n) for i in range(n)]
    pops = [oracle.expectation(rho, s.conj().T @ s).real for s in sig]
    cohs = [oracle.expectation(rho, s) for s in sig]
    taus = np.linspace(0.0, tau_max, 101)
    _, poles, residues = oracle.qrt_correlator(
        liou, rho, sig[0].conj().T, sig[0], taus)
    payload = {
        "n_emitters": n,
        "interactions_enabled": interactions,
        "populations": pops,
        "coherences": [[c.real, c.imag] for c in cohs],
        "poles": [[p.real, p.imag] for p in poles],
        "residues": [[r.real, r.imag] for r in residues],
    }
    if n >= 2:
        rep = oracle.mf_vs_exact(ens)
        payload["connected_correlators"] = {
            f"{i}-{j}": [v.real, v.imag]
            for (i, j), v in rep["connected_correlator"].items()}
        payload["mf_population_rel_diff"] = \
            rep["population_rel_diff"].tolist()
    path = Path(out_dir) / "oracle.json"
    _write_json(path, payload)
    return [path], resolved


# ---------------------------------------------------------------------------
# figure presets
# ---------------------------------------------------------------------------

def _fig_drive(omega, k_par=(0.0, 0.0)):
    return DriveConfig(omega=omega, delta=0.0, k_laser_par=k_par)


def fig_fig1b(out_dir, grid):
    cfg = LatticeConfig(period_l=0.5)
    g_bar = greens.lattice_sum_ewald((0.0, 0.0), cfg).g_bar
    disp = greens.collective_dispersion((0.0, 0.0), cfg)
    rows = []
    for w in _sweep_grid(grid):
        b = _chosen_branch(_fig_drive(w), g_bar)
        coh, incoh, tot = observables.population_per_emitter(b.omega_eff, 0.0)
        ncl, _ = observables.classical_population(w, disp[0], disp[1])
        rows.append((w, coh, incoh, tot, ncl))
    path = Path(out_dir) / "fig1b.csv"
    _write_csv(path, ["omega", "n_coh", "n_incoh", "n_total", "n_classical"],
               rows)
    return [path]


def fig_fig1b_inset(out_dir, grid):
    cfg = LatticeConfig(period_l=0.5)
    drive = _fig_drive(2.0)
    paths, _ = cmd_bz_population(cfg, drive, out_dir, grid, None,
                                 ky_cut=True)
    renamed = Path(out_dir) / "fig1b-inset.csv"
    os.replace(paths[0], renamed)
    return [renamed]


def fig_fig2a(out_dir, grid):
    cfg = LatticeConfig(period_l=0.5)
    drive = _fig_drive(4.0)
    paths, _ = cmd_intensity_map(cfg, drive, out_dir, grid, None)
    renamed = Path(out_dir) / "fig2a.csv"
    os.replace(paths[0], renamed)
    return [renamed]


def fig_fig2b(out_dir, grid):
    cfg = LatticeConfig(period_l=0.5)
    g_bar = greens.lattice_sum_ewald((0.0, 0.0), cfg).g_bar
    disp = greens.collective_dispersion((0.0, 0.0), cfg)
    order_sum = emission.coherent_order_sum(np.zeros(2), cfg)
    rows = []
    for w in _sweep_grid(grid):
        drive = _fig_drive(w)
        for b in _stable_branches(w, 0.0, g_bar):
            coh, cinc, side = _intensity_row(w, b, drive, cfg)
            ncl, _ = observables.classical_population(w, disp[0], disp[1])
            rows.append((w, b.branch_id, coh, cinc, side, ncl * order_sum))
    path = Path(out_dir) / "fig2b.csv"
    _write_csv(path, ["omega_drive", "branch_id", "i_central_coh",
                      "i_central_incoh", "i_sidebands", "i_classical"], rows)
    return [path]


FIG3_PERIODS = (0.5, 0.999, 0.9999)


def _fig3_sweep(out_dir, grid, name, emit):
    rows = []
    for l in FIG3_PERIODS:
        cfg = LatticeConfig(period_l=l)
        g_bar = greens.lattice_sum_ewald((0.0, 0.0), cfg).g_bar
        for w in _sweep_grid(grid, hi=8.0):
            for b in meanfield.self_consistency_roots(w, 0.0, g_bar):
                rows.extend(emit(l, w, b))
    path = Path(out_dir) / f"{name}.csv"
    return path, rows


def fig_fig3a(out_dir, grid):
    path, rows = _fig3_sweep(
        out_dir, grid, "fig3a",
        lambda l, w, b: [(l, w, b.branch_id, b.x, b.omega_eff.real,
                          b.omega_eff.imag, b.stability == "stable")])
    _write_csv(path, ["period_l", "omega", "branch_id", "x",
                      "re_omega_eff", "im_omega_eff", "stable"], rows)
    return [path]


def _peak_rows(l, w, b):
    trip = spectrum.mollow_parameters(b.omega_eff, 0.0)
    return [(l, w, b.branch_id, i, p.omega_p, p.gamma_p)
            for i, p in enumerate(trip.peaks)]


def fig_fig3b(out_dir, grid):
    path, rows = _fig3_sweep(out_dir, grid, "fig3b", _peak_rows)
    _write_csv(path, ["period_l", "omega", "branch_id", "peak_index",
                      "omega_p", "gamma_p"], rows)
    return [path]


def fig_fig3c(out_dir, grid):
    path, rows = _fig3_sweep(out_dir, grid, "fig3c", _peak_rows)
    _write_csv(path, ["period_l", "omega", "branch_id", "peak_index",
                      "omega_p", "gamma_p"], rows)
    return [path]


def _fig3_hysteresis(out_dir, grid, name, emit):
    cfg = LatticeConfig(period_l=0.9999)
    g_bar = greens.lattice_sum_ewald((0.0, 0.0), cfg).g_bar
    w_grid = _sweep_grid(grid, hi=8.0)
    rows = []
    for direction in ("up", "down"):
        trace = meanfield.hysteresis_sweep(w_grid, 0.0, g_bar, direction)
        for w, b in zip(trace.omega_grid, trace.branches):
            rows.extend(emit(cfg, direction, w, b))
    path = Path(out_dir) / f"{name}.csv"
    return path, rows


def fig_fig3d(out_dir, grid):
    def emit(cfg, direction, w, b):
        coh, incoh, tot = observables.population_per_emitter(b.omega_eff, 0.0)
        return [(w, direction, b.branch_id, coh, incoh, tot)]
    path, rows = _fig3_hysteresis(out_dir, grid, "fig3d", emit)
    _write_csv(path, ["omega", "direction", "branch_id", "n_coh",
                      "n_incoh", "n_total"], rows)
    return [path]


def fig_fig3e(out_dir, grid):
    def emit(cfg, direction, w, b):
        drive = _fig_drive(w)
        coh, cinc, side = _intensity_row(w, b, drive, cfg)
        return [(w, direction, b.branch_id, coh, cinc, side)]
    path, rows = _fig3_hysteresis(out_dir, grid, "fig3e", emit)
    _write_csv(path, ["omega_drive", "direction", "branch_id",
                      "i_central_coh", "i_central_incoh", "i_sidebands"],
               rows)
    return [path]


FIG_BUILDERS = {
    "fig1b": fig_fig1b,
    "fig1b-inset": fig_fig1b_inset,
    "fig2a": fig_fig2a,
    "fig2b": fig_fig2b,
    "fig3a": fig_fig3a,
    "fig3b": fig_fig3b,
    "fig3c": fig_fig3c,
    "fig3d": fig_fig3d,
    "fig3e": fig_fig3e,
}

COMMANDS = {
    "lattice-sum": cmd_lattice_sum,
    "meanfield-sweep": cmd_meanfield_sweep,
    "population-sweep": cmd_population_sweep,
    "bz-population": cmd_bz_population,
    "spectrum": cmd_spectrum,
    "intensity-map": cmd_intensity_map,
    "intensity-sweep": cmd_intensity_sweep,
}


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="qelat",
        description="Steady-state optics of driven two-level emitter "
                    "lattices")
    ap.add_argument("command",
                    choices=sorted(COMMANDS) + ["oracle", "fig"])
    ap.add_argument("--config", type=str, default=None)
    ap.add_argument("--out", type=str, default=".")
    ap.add_argument("--preset", type=str, default=None)
    ap.add_argument("--grid", type=int, default=None)
    ap.add_argument("--threads", type=int, default=None)
    return ap


def main(argv=None):
    args = _build_parser().parse_args(argv)
    threads = args.threads
    if threads is None and os.environ.get("QELAT_THREADS"):
        threads = int(os.environ["QELAT_THREADS"])
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output dir: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    try:
        raw = read_mapping(args.config) if args.config else {}
        if args.command != "oracle":
            cfg, drive, resolved = config_from_mapping(
                {k: v for k, v in raw.items()
                 if k not in ("positions", "interactions_enabled",
                              "tau_max")})
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "fig":
            if args.preset not in FIG_BUILDERS:
                print(f"error: unknown preset {args.preset!r}; choose from "
                      f"{', '.join(FIG_PRESETS)}", file=sys.stderr)
                return EXIT_PRESET
            outputs = FIG_BUILDERS[args.preset](out_dir, args.grid)
            _manifest(out_dir, f"fig-{args.preset}",
                      {"preset": args.preset, "grid": args.grid}, outputs)
        elif args.command == "oracle":
            outputs, resolved = cmd_oracle(raw, out_dir)
            _manifest(out_dir, "oracle", resolved, outputs)
        else:
            outputs, extra = COMMANDS[args.command](
                cfg, drive, out_dir, args.grid, threads)
            _manifest(out_dir, args.command, resolved, outputs, extra)
    except _OutputError as exc:
        print(f"error: output: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    except (ConfigError, ValueError) as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        print(f"error: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
