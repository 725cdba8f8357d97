"""Command-line front end: parameter ingestion, figure-data runs, self tests.

Commands
--------
spectrum        optimized sideband-combination spectrum (shot-noise units)
optimal-angles  optimal weight angles theta(Omega), phi(Omega) for three pump splits
synodyne        constant-weight detection spectrum vs the optimal reference
compare-opa     matched-depth parametric-amplifier bandwidth comparison
sensor          force-referred noise of the back-action-evading sensor
stability-sweep detuning sweep with stability verdicts and threshold
selftest        fast invariant suite; exit status reports pass/fail

Spectral commands default to the 'fig1' preset (pump rate G = 2e6 gamma_m,
the value the demo plots use); the tabulated platform value G = 2.2e6 1/s
is available with --preset table1, and the detuning sweep defaults to the
'fig5' preset.  Overrides of g_mean_s/g_diff_s re-derive the couplings;
all other overrides (notably p_in_w) apply with the couplings held fixed.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

import numpy as np

from . import __version__
from .entanglement import (
    EQUAL_WEIGHTS,
    duan_simon_check,
    entanglement_bandwidth,
    optimal_spectrum,
    optimize_weights,
    thermal_floor,
    zero_frequency_minimum,
)
from .errors import OptoentError
from .linear_response import (
    check_commutators,
    default_grid,
    scattering_from_formulas,
    solve_fluctuations,
    single_mode_psd,
    susceptibilities,
)
from .params import (
    PRESET_NAMES,
    PhysicalParams,
    apply_overrides,
    couplings_for_target,
    derive,
    fig_spectrum,
    load_params_file,
    params_to_dict,
    preset,
)
from .parametric_ref import match_gain_for_depth, opa_bandwidth, opa_minimum, opa_psd
from .series import SpectrumSeries, config_hash
from .stability import detuning_sweep
from .synodyne import synodyne_bandwidth, synodyne_psd, synodyne_psd_formula
from .variational_sensor import (
    back_action_evading,
    sensor_from_system,
    sensor_series,
    sensor_transfer,
)


def _add_common(sub: argparse.ArgumentParser, default_preset: str) -> None:
    sub.add_argument("--preset", default=default_preset, help=f"one of {PRESET_NAMES}")
    sub.add_argument("--params", metavar="FILE", help="flat key/value parameter file")
    sub.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="parameter override (repeatable); file keys, e.g. p_in_w=5e-2",
    )
    sub.add_argument("--omega-min", type=float, default=None, help="grid start [rad/s]")
    sub.add_argument("--omega-max", type=float, default=None, help="grid end [rad/s]")
    sub.add_argument("--points", type=int, default=400, help="grid size (>= 2)")
    sub.add_argument("--spacing", choices=("log", "linear"), default="log")
    sub.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    sub.add_argument("--format", choices=("csv", "json"), default="csv")


def _parse_overrides(pairs: list[str]) -> dict[str, float]:
    out: dict[str, float] = {}
    for pair in pairs:
        key, sep, text = pair.partition("=")
        if not sep:
            raise OptoentError(f"override {pair!r} is not KEY=VALUE")
        try:
            out[key.strip()] = float(text)
        except ValueError:
            raise OptoentError(f"override {pair!r} has a non-numeric value") from None
    return out


def _resolve_params(args) -> PhysicalParams:
    if args.params:
        with open(args.params) as fp:
            p = load_params_file(fp)
    else:
        p = preset(args.preset)
    overrides = _parse_overrides(args.override)
    if overrides:
        p = apply_overrides(p, overrides)
    return p


def _resolve_grid(args, p: PhysicalParams) -> np.ndarray:
    if args.points < 2:
        raise OptoentError(f"--points must be >= 2, got {args.points}")
    if args.omega_min is None and args.omega_max is None:
        base = default_grid(p, args.points)
        if args.spacing == "linear":
            return np.linspace(base[0], base[-1], args.points)
        return base
    lo = args.omega_min if args.omega_min is not None else default_grid(p, 2)[0]
    hi = args.omega_max if args.omega_max is not None else default_grid(p, 2)[-1]
    if args.spacing == "log":
        if lo <= 0 or hi <= 0:
            raise OptoentError("log spacing requires positive grid bounds")
        return np.geomspace(lo, hi, args.points)
    return np.linspace(lo, hi, args.points)


def _series_meta(args, p: PhysicalParams, command: str, extra: dict | None = None) -> dict:
    cfg = {
        "command": command,
        "params": params_to_dict(p),
        "grid": [args.omega_min, args.omega_max, args.points, args.spacing],
        "format": args.format,
    }
    meta = {
        "command": command,
        "config_hash": config_hash(cfg),
        "package_version": __version__,
        "params_source": args.params or args.preset,
    }
    for key, value in params_to_dict(p).items():
        meta[f"param_{key}"] = f"{value:.17g}"
    if extra:
        meta.update({k: str(v) for k, v in extra.items()})
    return meta


def _emit(args, series: SpectrumSeries) -> None:
    if args.out:
        with open(args.out, "w") as fp:
            series.write(fp, args.format)
    else:
        series.write(sys.stdout, args.format)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_spectrum(args) -> int:
    p = _resolve_params(args)
    grid = _resolve_grid(args, p)
    rows = optimal_spectrum(p, grid)
    meta = _series_meta(
        args, p, "spectrum",
        {"sql_reference": "1", "thermal_floor": f"{thermal_floor(p):.17g}"},
    )
    series = SpectrumSeries(
        columns=["omega_rad_s", "s_q", "s_t", "s_total", "theta_opt", "phi_opt"],
        rows=rows,
        meta=meta,
    )
    _emit(args, series)
    return 0


def cmd_optimal_angles(args) -> int:
    p = _resolve_params(args)
    gm = derive(p).gamma_mech
    grid = _resolve_grid(args, p)
    splits = [1e3 * gm, 1e4 * gm, 1e5 * gm]
    blocks = []
    for g_diff in splits:
        pk = apply_overrides(p, {"g_diff_s": g_diff})
        rows = optimal_spectrum(pk, grid)
        block = np.column_stack(
            [rows[:, 0], np.full(grid.size, g_diff), rows[:, 4], rows[:, 5], rows[:, 3]]
        )
        blocks.append(block)
    series = SpectrumSeries(
        columns=["omega_rad_s", "g_diff_s", "theta_opt", "phi_opt", "s_total"],
        rows=np.vstack(blocks),
        meta=_series_meta(args, p, "optimal-angles", {"g_diff_values_s": splits}),
    )
    _emit(args, series)
    return 0


def cmd_synodyne(args) -> int:
    p = _resolve_params(args)
    grid = _resolve_grid(args, p)
    opt = optimal_spectrum(p, grid)
    rows = np.column_stack(
        [grid, [synodyne_psd(p, om) for om in grid], opt[:, 3]]
    )
    bw = synodyne_bandwidth(p)
    meta = _series_meta(
        args, p, "synodyne",
        {
            "bandwidth_analytic_s": f"{bw.analytic:.17g}",
            "bandwidth_numeric_s": f"{bw.numeric:.17g}",
            "zero_frequency_minimum": f"{zero_frequency_minimum(p):.17g}",
        },
    )
    series = SpectrumSeries(
        columns=["omega_rad_s", "s_syno", "s_opt_reference"], rows=rows, meta=meta
    )
    _emit(args, series)
    return 0


def cmd_compare_opa(args) -> int:
    p = _resolve_params(args)
    _, s_min = optimize_weights(p, 0.0)
    ent_bw = entanglement_bandwidth(p)
    opa = match_gain_for_depth(p.gamma_0, p.gamma_0, s_min)
    opa_bw = opa_bandwidth(opa)
    grid = _resolve_grid(args, p)
    rows = np.column_stack([grid, opa_psd(opa, grid)])
    meta = _series_meta(
        args, p, "compare-opa",
        {
            "s_min": f"{s_min:.17g}",
            "opa_g_par_s": f"{opa.g_par:.17g}",
            "opa_s_min": f"{opa_minimum(opa):.17g}",
            "bandwidth_analytic_s": f"{opa_bw.analytic:.17g}",
            "bandwidth_numeric_s": "" if opa_bw.numeric is None else f"{opa_bw.numeric:.17g}",
            "optomech_bandwidth_s": f"{ent_bw:.17g}",
            "bandwidth_ratio_optomech_over_opa": f"{ent_bw / opa_bw.analytic:.17g}",
        },
    )
    series = SpectrumSeries(columns=["omega_rad_s", "s_g"], rows=rows, meta=meta)
    _emit(args, series)
    return 0


def cmd_sensor(args) -> int:
    p = _resolve_params(args)
    grid = _resolve_grid(args, p)
    rows = sensor_series(p, grid, feed=args.feed)
    series = SpectrumSeries(
        columns=["omega_rad_s", "s_force_vacuum", "s_force_entangled", "improvement_ratio"],
        rows=rows,
        meta=_series_meta(args, p, "sensor", {"feed": args.feed}),
    )
    _emit(args, series)
    return 0


def cmd_stability_sweep(args) -> int:
    p = _resolve_params(args)
    lo = args.delta_min if args.delta_min is not None else 1e-3 * p.gamma_0
    hi = args.delta_max if args.delta_max is not None else 1e-1 * p.gamma_0
    result = detuning_sweep(p, (lo, hi), args.points, spacing=args.spacing)
    rows = np.array(
        [
            [
                pt.detuning,
                pt.detuning / p.gamma_0,
                pt.g_mean,
                pt.g_diff,
                pt.n_d,
                1.0 if pt.stable else 0.0,
                pt.leading_real,
                pt.n_d_coherent,
                pt.n_d_thermal,
            ]
            for pt in result.points
        ]
    )
    meta = _series_meta(
        args, p, "stability-sweep",
        {
            "threshold_rad_s": "" if result.threshold is None else f"{result.threshold:.17g}",
            "threshold_over_gamma0": ""
            if result.threshold is None
            else f"{result.threshold / p.gamma_0:.17g}",
            "n_d_model": "coherent |d|^2 plus linearized cooled occupation",
        },
    )
    series = SpectrumSeries(
        columns=[
            "detuning_rad_s",
            "detuning_over_gamma0",
            "g_mean_s",
            "g_diff_s",
            "n_d",
            "stable",
            "leading_real_s",
            "n_d_coherent",
            "n_d_thermal",
        ],
        rows=rows,
        meta=meta,
    )
    _emit(args, series)
    return 0


def cmd_selftest(args) -> int:
    p = fig_spectrum()
    d = derive(p)
    rng = np.random.default_rng(7)
    checks: list[tuple[str, bool]] = []

    def add(name: str, ok: bool) -> None:
        checks.append((name, bool(ok)))

    # vacuum identity (decoupled cavity)
    pv = dataclasses.replace(p, eta_p=0.0, eta_m=0.0)
    vac = [abs(x - 1.0) for om in (0.0, d.gamma_mech, p.gamma_0)
           for x in single_mode_psd(solve_fluctuations(pv, om), d.n_T)]
    add("vacuum_identity", max(vac) < 1e-12)

    # commutator preservation on a coarse grid
    worst = 0.0
    for om in default_grid(p, 60):
        worst = max(worst, max(check_commutators(solve_fluctuations(p, om)).values()))
    add("commutator_preservation", worst < 1e-10)

    # closed-form coefficients against the direct solve
    worst = 0.0
    for om in default_grid(p, 60):
        a = solve_fluctuations(p, om).rows
        b = scattering_from_formulas(susceptibilities(p, om), d.gamma_mech).rows
        worst = max(worst, float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300))))
    add("formula_cross_validation", worst < 1e-9)

    # coupling-target round trip
    g_mean = float(rng.uniform(1e5, 5e6))
    g_diff = float(rng.uniform(0.0, 0.05 * g_mean))
    eta_p, eta_m = couplings_for_target(p, g_mean, g_diff)
    dd = derive(dataclasses.replace(p, eta_p=eta_p, eta_m=eta_m))
    add(
        "coupling_round_trip",
        abs(dd.G_mean - g_mean) < 1e-12 * g_mean
        and abs(dd.G_diff - g_diff) <= 1e-12 * max(g_diff, g_mean),
    )

    # synodyne closed form against the scattering route
    worst = 0.0
    for om in default_grid(p, 40):
        a, b = synodyne_psd(p, om), synodyne_psd_formula(p, om)
        worst = max(worst, abs(a - b) / max(abs(b), 1e-300))
    add("synodyne_consistency", worst < 1e-6)

    # entanglement at the headline parameters
    verdict = duan_simon_check(p, 1e-3 * d.gamma_mech, EQUAL_WEIGHTS)
    add("entanglement_certified", verdict.entangled and verdict.total < 0.1)

    # amplifier closed form at a reference point
    opa = match_gain_for_depth(3e5, 3e5, 1.0 / 9.0)
    add("opa_minimum_closed_form", abs(opa_minimum(opa) - opa_psd(opa, 0.0)) < 1e-15)

    # back-action cancellation, relative to the back-action scale K/|gamma_m - i Omega|
    sensor = sensor_from_system(p, feed="vacuum")
    resid = 0.0
    for om in (0.0, d.gamma_mech, p.gamma_0):
        t = sensor_transfer(sensor, om)
        ba_scale = t.K / abs(sensor.gamma_mech - 1j * om)
        resid = max(resid, abs(back_action_evading(sensor, om)[1]) / ba_scale)
    add("back_action_cancellation", resid < 1e-12)

    width = max(len(name) for name, _ in checks)
    failed = 0
    for name, ok in checks:
        print(f"{name.ljust(width)}  {'PASS' if ok else 'FAIL'}")
        failed += 0 if ok else 1
    print(f"{failed} of {len(checks)} checks failed" if failed else f"all {len(checks)} checks passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="optoent",
        description="Sideband-entanglement spectra of a three-mode optomechanical cavity",
    )
    ap.add_argument("--version", action="version", version=f"optoent {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="optimized combination spectral density")
    _add_common(sp, "fig1")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("optimal-angles", help="optimal theta/phi vs frequency")
    _add_common(sp, "fig1")
    sp.set_defaults(func=cmd_optimal_angles)

    sp = sub.add_parser("synodyne", help="constant-weight detection spectrum")
    _add_common(sp, "fig1")
    sp.set_defaults(func=cmd_synodyne)

    sp = sub.add_parser("compare-opa", help="parametric-amplifier comparison")
    _add_common(sp, "fig1")
    sp.set_defaults(func=cmd_compare_opa)

    sp = sub.add_parser("sensor", help="back-action-evading force sensor")
    _add_common(sp, "fig1")
    sp.add_argument("--feed", choices=("vacuum", "synodyne", "optimal"), default="synodyne")
    sp.set_defaults(func=cmd_sensor)

    sp = sub.add_parser("stability-sweep", help="detuning sweep with verdicts")
    _add_common(sp, "fig5")
    sp.add_argument("--delta-min", type=float, default=None, help="sweep start [rad/s]")
    sp.add_argument("--delta-max", type=float, default=None, help="sweep end [rad/s]")
    sp.set_defaults(func=cmd_stability_sweep, points=40)

    sp = sub.add_parser("selftest", help="run the invariant suite")
    sp.set_defaults(func=cmd_selftest)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except OptoentError as exc:
        code = type(exc).__name__
        message = str(exc).replace('"', "'")
        print(f'error: code={code} message="{message}"', file=sys.stderr)
        return 2
    except OSError as exc:
        print(f'error: code=OSError message="{exc}"', file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
