"""Batch experiment driver.

Subcommands read an INI config (every key defaulted, see config.DEFAULTS),
run one experiment, and write a CSV of results plus a JSON summary echoing
the fully resolved config and master seed. CSVs are byte-identical across
reruns; wall-clock timestamps live only in the JSON.

Exit codes: 0 success, 1 runtime failure, 2 unreadable config or command
line, 3 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import os
import subprocess
import sys

import numpy as np

from . import asymptotics, montecarlo, validation
from .config import (
    ConfigParseError,
    ConfigValidationError,
    load_config,
    parse_float,
    parse_float_list,
    parse_int,
    parse_position,
)
from .fusion import RULES, GridSpec, make_evaluator
from .montecarlo import (
    STREAM_H0_CAL,
    conservative_gamma,
    sample_statistics,
    validate_calibration,
)
from .noise import FAMILIES, NoiseModel, unit_variance
from .quantizer import optimize_threshold, threshold_objective


def _git_describe():
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=os.path.dirname(os.path.abspath(__file__)),
            capture_output=True,
            text=True,
            timeout=10,
        )
        return out.stdout.strip() or None
    except OSError:
        return None


def _format_cell(value) -> str:
    if isinstance(value, float):
        return repr(float(value))  # shortest round-trip form
    return str(value)


def _write_csv(path: str, rows: list[dict], columns: list[str]):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_format_cell(row[c]) for c in columns])


def _write_summary(outdir: str, command: str, cfg_resolved, master_seed, threads, files):
    summary = {
        "command": command,
        "config": cfg_resolved,
        "master_seed": master_seed,
        "threads": threads,
        "git": _git_describe(),
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "files": files,
    }
    path = os.path.join(outdir, f"{command}.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _prepare(args):
    cfg = load_config(args.config, args.set or ())
    if args.threads is not None:
        if args.threads < 1:
            raise ConfigValidationError("threads must be positive")
        cfg.threads = args.threads
    if args.output is not None:
        cfg.output_dir = args.output
    os.makedirs(cfg.output_dir, exist_ok=True)
    return cfg


def _emit(cfg, command: str, rows: list[dict], columns: list[str]):
    csv_path = os.path.join(cfg.output_dir, f"{command}.csv")
    _write_csv(csv_path, rows, columns)
    _write_summary(
        cfg.output_dir, command, cfg.resolved, cfg.master_seed, cfg.threads,
        [os.path.basename(csv_path)],
    )
    print(f"wrote {csv_path} ({len(rows)} rows)")


def _sweep_rules(cfg, section: str) -> list[str]:
    rules = [r.strip() for r in cfg.resolved[section]["rules"].split(",") if r.strip()]
    for r in rules:
        if r not in RULES:
            raise ConfigValidationError(f"unknown rule {r!r}")
        if r == "clairvoyant":
            raise ConfigValidationError(
                "clairvoyant rule needs a known position; use calibrate/roc"
            )
    return rules


def _mc_map(cfg, rules, pfs):
    return {rule: cfg.mc_for_rule(rule, pfs) for rule in rules}


def _grid_for_rule(cfg, section: str) -> GridSpec:
    """Search grid, collapsed to the known position for the clairvoyant rule."""
    rule = cfg.resolved[section]["rule"].strip()
    if rule == "clairvoyant":
        pos = parse_position(cfg.resolved[section]["position"])
        return GridSpec(pos[None, :], cfg.grid.thetas)
    return cfg.grid


def cmd_design_quantizer(args) -> int:
    family = args.family.lower()
    if family not in FAMILIES:
        raise ConfigValidationError(f"unknown noise family {args.family!r}")
    try:
        if args.scale is None:
            model = unit_variance(family, args.shape)
        else:
            model = NoiseModel(family, args.scale, args.shape)
    except ValueError as err:
        raise ConfigValidationError(str(err)) from err
    if not 0.0 <= args.pe < 0.5:
        raise ConfigValidationError("pe must lie in [0, 1/2)")
    interval = None
    if args.interval is not None:
        parts = parse_float_list(args.interval)
        if len(parts) != 2:
            raise ConfigValidationError("interval must be lo,hi")
        interval = (parts[0], parts[1])
    try:
        design = optimize_threshold(model, args.pe, interval, args.tol)
    except ValueError as err:
        raise ConfigValidationError(str(err)) from err
    lo, hi = design.search_interval
    taus = np.linspace(lo, hi, args.curve_points)
    values = threshold_objective(taus, model, args.pe)
    rows = [
        {"tau": float(t), "objective": float(v)} for t, v in zip(taus, values)
    ]
    outdir = args.output or "out"
    os.makedirs(outdir, exist_ok=True)
    csv_path = os.path.join(outdir, "design-quantizer.csv")
    _write_csv(csv_path, rows, ["tau", "objective"])
    echo = {
        "family": family,
        "scale": model.scale,
        "shape": model.shape,
        "pe": args.pe,
        "interval": list(design.search_interval),
        "tol": design.tolerance,
    }
    _write_summary(outdir, "design-quantizer", echo, None, 1, ["design-quantizer.csv"])
    print(f"tau* = {design.tau_star!r}")
    print(f"objective(tau*) = {design.objective_at_star!r}")
    print(f"wrote {csv_path} ({len(rows)} rows)")
    return 0


def cmd_calibrate(args) -> int:
    cfg = _prepare(args)
    section = cfg.section("calibrate")
    rule = section["rule"].strip()
    pfs = cfg.pfs("calibrate")
    grid = _grid_for_rule(cfg, "calibrate")
    mc = cfg.mc_for_rule(rule, pfs)
    ev = make_evaluator(rule, cfg.scene, grid)
    h0 = sample_statistics(
        ev, cfg.scene, mc.trials_h0, mc.master_seed, STREAM_H0_CAL,
        threads=cfg.threads,
    )
    rows = []
    for pf in pfs:
        if pf * mc.trials_h0 < 100:
            raise ConfigValidationError(
                "too few trials to resolve the target tail"
            )
        gamma, achieved = conservative_gamma(h0, pf)
        holdout, holdout_se = validate_calibration(
            ev, cfg.scene, grid, gamma, mc.trials_h0, mc.master_seed,
            threads=cfg.threads,
        )
        rows.append(
            {
                "rule": rule,
                "pf_target": pf,
                "gamma": gamma,
                "achieved_pf": achieved,
                "holdout_pf": holdout,
                "holdout_pf_se": holdout_se,
                "trials_h0": mc.trials_h0,
            }
        )
        print(
            f"rule={rule} pf={pf!r}: gamma={gamma!r} achieved={achieved!r} "
            f"holdout={holdout!r}"
        )
    _emit(cfg, "calibrate", rows, list(rows[0].keys()))
    return 0


def cmd_sweep_tau(args) -> int:
    cfg = _prepare(args)
    section = cfg.section("sweep-tau")
    rules = _sweep_rules(cfg, "sweep-tau")
    pfs = cfg.pfs("sweep-tau")
    taus = parse_float_list(section["taus"])
    snrs = parse_float_list(section["snr_db"])
    polarities = [int(p) for p in parse_float_list(section["polarities"])]
    if any(p not in (-1, 1) for p in polarities):
        raise ConfigValidationError("polarities must be 1 or -1")
    rows = montecarlo.sweep_tau(
        cfg.scene, cfg.grid, taus, snrs, _mc_map(cfg, rules, pfs),
        rules=rules, polarities=polarities, threads=cfg.threads,
    )
    _emit(cfg, "sweep-tau", rows, list(rows[0].keys()))
    return 0


def cmd_sweep_snr(args) -> int:
    cfg = _prepare(args)
    section = cfg.section("sweep-snr")
    rules = _sweep_rules(cfg, "sweep-snr")
    pfs = cfg.pfs("sweep-snr")
    snrs = parse_float_list(section["snr_db"])
    rows = montecarlo.sweep_snr(
        cfg.scene, cfg.grid, snrs, _mc_map(cfg, rules, pfs), rules=rules,
        threads=cfg.threads,
    )
    _emit(cfg, "sweep-snr", rows, list(rows[0].keys()))
    return 0


def cmd_heatmap(args) -> int:
    cfg = _prepare(args)
    section = cfg.section("heatmap")
    rules = _sweep_rules(cfg, "heatmap")
    pfs = cfg.pfs("heatmap")
    cells = parse_int(section["cells"], "heatmap.cells")
    if cells < 1:
        raise ConfigValidationError("heatmap needs at least one cell")
    snr_db = parse_float(section["snr_db"], "heatmap.snr_db")
    lo, hi = cfg.scene.region
    frac = (np.arange(cells) + 0.5) / cells
    xs = lo[0] + frac * (hi[0] - lo[0])
    ys = lo[1] + frac * (hi[1] - lo[1])
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    lattice = np.column_stack([gx.ravel(), gy.ravel()])
    rows = montecarlo.heatmap_pd(
        cfg.scene, cfg.grid, lattice, snr_db, _mc_map(cfg, rules, pfs),
        rules=rules, threads=cfg.threads,
    )
    _emit(cfg, "heatmap", rows, list(rows[0].keys()))
    return 0


def cmd_roc(args) -> int:
    cfg = _prepare(args)
    section = cfg.section("roc")
    rule = section["rule"].strip()
    grid = _grid_for_rule(cfg, "roc")
    mc = cfg.mc_for_rule(rule, (0.01,))
    points = parse_int(section["points"], "roc.points")
    snr_db = parse_float(section["snr_db"], "roc.snr_db")
    rows = montecarlo.roc(
        cfg.scene, grid, rule, snr_db, points, mc, threads=cfg.threads
    )
    _emit(cfg, "roc", rows, list(rows[0].keys()))
    return 0


def cmd_predict(args) -> int:
    cfg = _prepare(args)
    section = cfg.section("predict")
    position = parse_position(section["position"])
    pfs = cfg.pfs("predict")
    snrs = parse_float_list(section["snr_db"])
    rows = []
    for snr_db in snrs:
        theta = montecarlo.amplitude_for_snr(cfg.scene, snr_db)
        lam = asymptotics.noncentrality(theta, position, cfg.scene)
        for pf in pfs:
            pd = asymptotics.clairvoyant_pd(pf, lam)
            rows.append(
                {
                    "snr_db": float(snr_db),
                    "theta": theta,
                    "noncentrality": lam,
                    "pf_target": pf,
                    "pd_predicted": pd,
                }
            )
    for row in rows:
        print(
            f"snr={row['snr_db']:+.1f} dB noncentrality={row['noncentrality']!r} "
            f"pf={row['pf_target']!r} pd={row['pd_predicted']!r}"
        )
    _emit(cfg, "predict", rows, list(rows[0].keys()))
    return 0


def cmd_validate(args) -> int:
    results = validation.run_all()
    failed = False
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
        failed = failed or not ok
    return 3 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bitfuse",
        description="Decentralized one-bit detection experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="INI config path (defaults apply)")
        p.add_argument("--output", help="output directory override")
        p.add_argument("--threads", type=int, help="worker process cap")
        p.add_argument(
            "--set",
            action="append",
            metavar="SECTION.KEY=VALUE",
            help="override one config value",
        )

    dq = sub.add_parser("design-quantizer", help="optimize a quantizer threshold")
    dq.add_argument("--family", required=True, help="noise family name")
    dq.add_argument("--scale", type=float, help="noise scale (default: unit variance)")
    dq.add_argument("--shape", type=float, help="generalized Gaussian exponent")
    dq.add_argument("--pe", type=float, default=0.0, help="channel error rate")
    dq.add_argument("--interval", help="search interval lo,hi")
    dq.add_argument("--tol", type=float, default=1e-8, help="search tolerance")
    dq.add_argument("--curve-points", type=int, default=201)
    dq.add_argument("--output", help="output directory")
    dq.set_defaults(handler=cmd_design_quantizer)

    for name, handler in (
        ("calibrate", cmd_calibrate),
        ("sweep-tau", cmd_sweep_tau),
        ("sweep-snr", cmd_sweep_snr),
        ("heatmap", cmd_heatmap),
        ("roc", cmd_roc),
        ("predict", cmd_predict),
    ):
        p = sub.add_parser(name)
        common(p)
        p.set_defaults(handler=handler)

    v = sub.add_parser("validate", help="run the invariant self-checks")
    v.set_defaults(handler=cmd_validate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except ConfigParseError as err:
        print(f"config parse error: {err}", file=sys.stderr)
        return 2
    except ConfigValidationError as err:
        print(f"validation error: {err}", file=sys.stderr)
        return 3
    except Exception as err:  # noqa: BLE001 - boundary of the process
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
