"""Command-line interface.

Four subcommands: spectrum (levels and couplings), scan (response versus
drive frequency), propagate (time evolution with optional density and
band-probability tables) and calibrate (market figures to model parameters).
Each writes CSV tables plus a JSON summary embedding the resolved config.

Exit codes: 0 success, 2 usage or configuration error, 3 domain error
(inputs violate a model precondition), 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, backend
from .calibration import calibrate, read_price_csv, volatility_from_series
from .dynamics import density_evolution, interval_probability, propagate, resonance_scan
from .errors import ConfigError, GupwellError
from .model import TRADING_DAY_SECONDS, validate_params
from .operators import dipole_matrix
from .runio import RunConfig, write_csv, write_dipole_csv, write_json
from .spectrum import characteristic_frequency, continuum_frequency, spectrum_table

_EXIT_CODES = {"config": 2, "domain": 3, "numerical": 4}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gupwell",
        description="Band-limited market well: spectra, driven dynamics, calibration.",
    )
    parser.add_argument("--version", action="version", version=f"gupwell {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON run configuration file")
    common.add_argument("--out", type=Path, help="output directory (default .)")
    common.add_argument("--unit", choices=("day", "second"), help="time unit of inputs/outputs")
    common.add_argument("--m", type=float, help="effective mass")
    common.add_argument("--beta", type=float, help="deformation strength")
    common.add_argument("--d", type=float, help="band width")
    common.add_argument("--lam", type=float, help="drive amplitude")
    common.add_argument("--omega", type=float, help="drive frequency")
    common.add_argument("--n-basis", dest="n_basis", type=int, help="retained levels")

    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("spectrum", parents=[common], help="energy levels and dipole couplings")

    p_scan = sub.add_parser("scan", parents=[common], help="response vs drive frequency")
    p_scan.add_argument("--omega-min", dest="omega_min", type=float)
    p_scan.add_argument("--omega-max", dest="omega_max", type=float)
    p_scan.add_argument("--steps", type=int, help="frequency grid points (>= 3)")
    p_scan.add_argument("--t-horizon", dest="t_horizon", type=float)
    p_scan.add_argument("--time-samples", dest="time_samples", type=int)
    p_scan.add_argument("--exact", action=argparse.BooleanOptionalAction, default=None,
                        help="propagate at every frequency instead of the first-order form")

    p_prop = sub.add_parser("propagate", parents=[common], help="integrate the driven system")
    p_prop.add_argument("--t-final", dest="t_final", type=float)
    p_prop.add_argument("--samples", type=int)
    p_prop.add_argument("--density-points", dest="density_points", type=int,
                        help="write the density on this many grid points (0 = skip)")
    p_prop.add_argument("--window", nargs=2, type=float, metavar=("A", "B"),
                        help="also write P(A <= r <= B) per sample")

    p_cal = sub.add_parser("calibrate", parents=[common], help="market figures to parameters")
    p_cal.add_argument("--sigma-annual", dest="sigma_annual", type=float)
    p_cal.add_argument("--mean-price", dest="mean_price", type=float)
    p_cal.add_argument("--tick", type=float)
    p_cal.add_argument("--limit-fraction", dest="limit_fraction", type=float)
    p_cal.add_argument("--percent-reading", dest="percent_reading",
                       action=argparse.BooleanOptionalAction, default=None,
                       help="read sigma-annual as a percentage (divide by 100)")
    p_cal.add_argument("--series", type=Path, help="date,close CSV to estimate volatility from")
    p_cal.add_argument("--periods-per-year", dest="periods_per_year", type=int)
    return parser


_OVERRIDE_KEYS = (
    "m", "beta", "d", "lam", "omega", "n_basis", "unit", "exact",
    "omega_min", "omega_max", "steps", "t_horizon", "time_samples",
    "t_final", "samples", "density_points",
    "sigma_annual", "mean_price", "tick", "limit_fraction",
    "percent_reading", "periods_per_year",
)


def _collect_overrides(args: argparse.Namespace) -> dict:
    overrides = {}
    for key in _OVERRIDE_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "out", None) is not None:
        overrides["out"] = str(args.out)
    if getattr(args, "series", None) is not None:
        overrides["series"] = str(args.series)
    window = getattr(args, "window", None)
    if window is not None:
        overrides["window_a"], overrides["window_b"] = window
    return overrides


def _summary_head(command: str, cfg: RunConfig, warnings: list) -> dict:
    return {
        "version": __version__,
        "command": command,
        "backend": backend.active_backend(),
        "time_unit": "second" if cfg.unit == "second" else "trading_day",
        "warnings": warnings,
        "config": cfg.to_dict(),
    }


def _validity_warnings(params) -> list:
    if params.first_order_warning:
        return [
            f"validity scale beta*pi^2*n_basis^2/d^2 = {params.validity_scale():.4g} "
            "exceeds 0.1; quartic corrections at the top retained levels are not small"
        ]
    return []


def cmd_spectrum(cfg: RunConfig, out_dir: Path) -> list:
    params = validate_params(cfg.model_params())
    table = spectrum_table(params)
    rows = zip(table.levels, table.e0, table.e1, table.energies, table.omega0, table.omega)
    paths = [
        write_csv(out_dir / "spectrum.csv",
                  ["n", "e0", "e1", "E", "omega0", "omega"], rows),
        write_dipole_csv(out_dir / "dipole.csv", dipole_matrix(params)),
    ]
    summary = _summary_head("spectrum", cfg, _validity_warnings(params))
    summary.update(
        levels=params.n_basis,
        ground_energy=float(table.energies[0]),
        omega2=characteristic_frequency(2, params),
        omega2_0=continuum_frequency(2, params),
    )
    paths.append(write_json(out_dir / "spectrum_summary.json", summary))
    return paths


def cmd_scan(cfg: RunConfig, out_dir: Path) -> list:
    params = validate_params(cfg.model_params())
    if cfg.steps < 3:
        raise ConfigError(f"scan needs steps >= 3, got {cfg.steps}")
    w2_0 = continuum_frequency(2, params)
    lo = cfg.omega_min if cfg.omega_min is not None else 0.9 * w2_0
    hi = cfg.omega_max if cfg.omega_max is not None else 1.1 * w2_0
    horizon = (
        cfg.t_horizon
        if cfg.t_horizon is not None
        else 8.0 * 2.0 * math.pi / characteristic_frequency(2, params)
    )
    result = resonance_scan(
        params, (lo, hi), cfg.steps, horizon,
        exact=cfg.exact, time_samples=cfg.time_samples,
    )
    paths = [
        write_csv(out_dir / "scan.csv", ["omega", "peak_prob"],
                  zip(result.omegas, result.peak_prob)),
    ]
    summary = _summary_head("scan", cfg, _validity_warnings(params))
    summary.update(
        method=result.method,
        omega_min=float(lo),
        omega_max=float(hi),
        t_horizon=result.t_horizon,
        located_peaks=[
            {"level": p.level, "omega": p.omega, "peak_prob": p.peak_prob}
            for p in result.located_peaks
        ],
        reference={str(n): w for n, w in sorted(result.reference.items())},
    )
    paths.append(write_json(out_dir / "scan_summary.json", summary))
    return paths


def cmd_propagate(cfg: RunConfig, out_dir: Path) -> list:
    params = validate_params(cfg.model_params())
    if cfg.t_final is None:
        raise ConfigError("propagate needs t_final (--t-final or config key)")
    if (cfg.window_a is None) != (cfg.window_b is None):
        raise ConfigError("window needs both endpoints")
    traj = propagate(params, cfg.t_final, sampling=cfg.samples)
    depletion = traj.depletion()

    # Long format, one row per (sample time, level).
    rows = (
        [traj.times[i], n + 1, traj.coeffs[i, n].real, traj.coeffs[i, n].imag]
        for i in range(traj.times.size)
        for n in range(params.n_basis)
    )
    paths = [write_csv(out_dir / "trajectory.csv", ["t", "n", "re", "im"], rows)]

    summary = _summary_head("propagate", cfg, _validity_warnings(params))
    summary.update(
        t_final=float(cfg.t_final),
        samples=int(traj.times.size),
        norm_drift=traj.norm_drift(),
        max_depletion=float(np.max(depletion)),
        final_ground_occupation=float(traj.occupation(1)[-1]),
        stats=traj.stats,
    )

    if cfg.density_points:
        if cfg.density_points < 2:
            raise ConfigError(f"density_points must be >= 2, got {cfg.density_points}")
        grid = np.linspace(-params.d / 2, params.d / 2, cfg.density_points)
        table = density_evolution(traj, grid)
        rows = (
            [table.times[i], table.grid[j], table.values[i, j]]
            for i in range(table.times.size)
            for j in range(table.grid.size)
        )
        paths.append(write_csv(out_dir / "density.csv", ["t", "r", "density"], rows))

    if cfg.window_a is not None:
        probs = interval_probability(traj, cfg.window_a, cfg.window_b)
        paths.append(
            write_csv(out_dir / "window.csv", ["t", "probability"],
                      zip(traj.times, probs))
        )
        summary["window"] = {
            "a": cfg.window_a,
            "b": cfg.window_b,
            "min_probability": float(np.min(probs)),
            "max_probability": float(np.max(probs)),
        }

    paths.append(write_json(out_dir / "propagate_summary.json", summary))
    return paths


def cmd_calibrate(cfg: RunConfig, out_dir: Path) -> list:
    if cfg.series is not None:
        closes = read_price_csv(cfg.series)
        sigma_annual = volatility_from_series(closes, cfg.periods_per_year)
        source = {"kind": "series", "path": cfg.series, "closes": len(closes)}
        percent = False  # an estimated volatility is already a decimal
    else:
        sigma_annual = cfg.sigma_annual
        source = {"kind": "explicit"}
        percent = cfg.percent_reading
    record, params = calibrate(
        sigma_annual, cfg.mean_price, cfg.tick, cfg.limit_fraction,
        percent_reading=percent, n_basis=cfg.n_basis, lam=cfg.lam, omega=cfg.omega,
    )
    w2_0 = continuum_frequency(2, params)
    w2 = characteristic_frequency(2, params)

    scale = TRADING_DAY_SECONDS if cfg.unit == "second" else 1.0
    params_out = {
        "m": params.m * scale,
        "beta": params.beta,
        "d": params.d,
        "lam": params.lam / scale,
        "omega": params.omega / scale,
        "n_basis": params.n_basis,
        "time_unit": "second" if cfg.unit == "second" else "trading_day",
    }

    summary = _summary_head("calibrate", cfg, _validity_warnings(params))
    summary.update(
        source=source,
        calibration={
            "sigma_annual": record.sigma_annual,
            "sigma_daily": record.sigma_daily,
            "mean_price": record.mean_price,
            "tick": record.tick,
            "limit_fraction": record.limit_fraction,
            "m0": record.m0,
            "m": record.m,
            "beta0": record.beta0,
            "beta": record.beta,
            "d": record.d,
            "minimal_spread": record.minimal_spread,
        },
        params=params_out,
        frequencies={
            "omega2_0_per_day": w2_0,
            "omega2_per_day": w2,
            "omega2_0_per_second": w2_0 / TRADING_DAY_SECONDS,
            "omega2_per_second": w2 / TRADING_DAY_SECONDS,
            "trading_day_seconds": TRADING_DAY_SECONDS,
            "frequency_scale_note": (
                "internal rates are per trading day; per-second figures assume a "
                "14400 s (4 h) continuous session and scale linearly with that choice"
            ),
        },
    )
    return [write_json(out_dir / "calibration.json", summary)]


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "scan": cmd_scan,
    "propagate": cmd_propagate,
    "calibrate": cmd_calibrate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig.from_file(args.config) if args.config is not None else RunConfig()
        cfg = cfg.merged(_collect_overrides(args))
        out_dir = Path(cfg.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        paths = _COMMANDS[args.command](cfg, out_dir)
    except GupwellError as exc:
        payload = {"error": {"category": exc.category, "message": str(exc)}}
        print(json.dumps(payload), file=sys.stderr)
        return _EXIT_CODES.get(exc.category, 1)
    for path in paths:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
