"""Experiment configuration: INI-style files with per-module sections.

Every key has a documented default; unknown sections or keys are rejected so
typos fail loudly. Parsing failures of the file itself and semantic
validation failures are distinct error types because the command line maps
them to different exit codes.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass

import numpy as np

from .fusion import RULES, GridSpec, default_grids
from .montecarlo import McConfig
from .noise import FAMILIES, NoiseModel, unit_variance, variance
from .scene import Scene, preset_grid_wsn


class ConfigParseError(Exception):
    """The config file is not syntactically readable."""


class ConfigValidationError(Exception):
    """The config is readable but invalid."""


DEFAULTS: dict[str, dict[str, str]] = {
    "scene": {
        "sensors": "grid:7",
        "region": "0,0,1,1",
        "noise": "gaussian",
        "scale": "unit",
        "shape": "",
        "tau": "0.0",
        "pe": "0.0",
        "eta": "0.2",
        "alpha": "4.0",
    },
    "grid": {
        "nc": "50",
        "snr_db": "-10:1:20",
    },
    "mc": {
        "trials_h0": "50000",
        "trials_h1": "20000",
        "trials_h0_glr": "10000",
        "trials_h1_glr": "5000",
        "master_seed": "20260815",
        "threads": "1",
    },
    "output": {
        "directory": "out",
    },
    "calibrate": {
        "rule": "grao",
        "pfs": "0.01",
        "position": "0.5,0.5",
    },
    "sweep-tau": {
        "taus": "-2:0.25:2",
        "snr_db": "0",
        "pfs": "0.01",
        "rules": "grao,glr",
        "polarities": "1,-1",
    },
    "sweep-snr": {
        "snr_db": "-10:2:20",
        "pfs": "0.05,0.01",
        "rules": "grao,glr",
    },
    "heatmap": {
        "cells": "10",
        "snr_db": "5",
        "pfs": "0.01",
        "rules": "grao,glr",
    },
    "roc": {
        "rule": "grao",
        "snr_db": "5",
        "points": "50",
        "position": "0.5,0.5",
    },
    "predict": {
        "position": "0.5,0.5",
        "snr_db": "-10:1:20",
        "pfs": "0.05,0.01",
    },
}


def parse_float_list(text: str) -> list[float]:
    """Comma list "a,b,c" or inclusive range "start:step:stop"."""
    text = text.strip()
    try:
        if ":" in text:
            start, step, stop = (float(p) for p in text.split(":"))
            if step <= 0.0:
                raise ValueError("range step must be positive")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            if count < 1:
                raise ValueError("empty range")
            return [start + i * step for i in range(count)]
        return [float(p) for p in text.split(",") if p.strip() != ""]
    except ValueError as err:
        raise ConfigValidationError(f"bad number list {text!r}: {err}") from err


def parse_float(text: str, key: str) -> float:
    try:
        return float(text)
    except ValueError as err:
        raise ConfigValidationError(f"bad float for {key}: {text!r}") from err


def parse_int(text: str, key: str) -> int:
    try:
        return int(text)
    except ValueError as err:
        raise ConfigValidationError(f"bad integer for {key}: {text!r}") from err


def _parse_rules(text: str) -> list[str]:
    rules = [r.strip() for r in text.split(",") if r.strip()]
    for r in rules:
        if r not in RULES:
            raise ConfigValidationError(
                f"unknown rule {r!r}; expected one of {', '.join(RULES)}"
            )
    if not rules:
        raise ConfigValidationError("need at least one rule")
    return rules


def parse_position(text: str) -> np.ndarray:
    parts = parse_float_list(text)
    if len(parts) != 2:
        raise ConfigValidationError(f"position needs two coordinates: {text!r}")
    return np.array(parts)


def _build_noise(raw: dict[str, str]) -> NoiseModel:
    family = raw["noise"].strip().lower()
    if family not in FAMILIES:
        raise ConfigValidationError(
            f"unknown noise family {family!r}; expected one of {', '.join(FAMILIES)}"
        )
    shape_text = raw["shape"].strip()
    shape = parse_float(shape_text, "scene.shape") if shape_text else None
    try:
        if raw["scale"].strip().lower() == "unit":
            return unit_variance(family, shape)
        return NoiseModel(family, parse_float(raw["scale"], "scene.scale"), shape)
    except ValueError as err:
        raise ConfigValidationError(str(err)) from err


def _build_sensors(text: str, region) -> np.ndarray:
    text = text.strip()
    for prefix, centered in (("grid:", False), ("cellgrid:", True)):
        if text.startswith(prefix):
            side = parse_int(text[len(prefix):], "scene.sensors")
            try:
                return preset_grid_wsn(side, region, cell_centered=centered)
            except ValueError as err:
                raise ConfigValidationError(str(err)) from err
    points = [p for p in text.split(";") if p.strip()]
    if not points:
        raise ConfigValidationError(f"bad sensor layout {text!r}")
    return np.array([parse_position(p) for p in points])


def _build_scene(raw: dict[str, str]) -> Scene:
    bounds = parse_float_list(raw["region"])
    if len(bounds) != 4:
        raise ConfigValidationError("region needs xmin,ymin,xmax,ymax")
    region = (np.array(bounds[:2]), np.array(bounds[2:]))
    noise = _build_noise(raw)
    sensors = _build_sensors(raw["sensors"], region)
    taus = parse_float_list(raw["tau"])
    pes = parse_float_list(raw["pe"])
    for name, vals in (("tau", taus), ("pe", pes)):
        if len(vals) not in (1, len(sensors)):
            raise ConfigValidationError(
                f"scene.{name} must be a scalar or one value per sensor"
            )
    try:
        return Scene(
            sensors=sensors,
            noise=noise,
            taus=taus[0] if len(taus) == 1 else np.array(taus),
            pes=pes[0] if len(pes) == 1 else np.array(pes),
            aaf_eta=parse_float(raw["eta"], "scene.eta"),
            aaf_alpha=parse_float(raw["alpha"], "scene.alpha"),
            region=region,
        )
    except ValueError as err:
        raise ConfigValidationError(str(err)) from err


@dataclass
class ExperimentConfig:
    """A fully resolved experiment description."""

    resolved: dict[str, dict[str, str]]
    scene: Scene
    grid: GridSpec
    master_seed: int
    threads: int
    output_dir: str
    trials: dict[str, int]

    def section(self, name: str) -> dict[str, str]:
        return dict(self.resolved[name])

    def mc_for_rule(self, rule: str, pfs, target_draw="uniform") -> McConfig:
        """Trial budget for one rule; the likelihood rule gets the reduced
        counts because of its amplitude-grid cost factor."""
        suffix = "_glr" if rule == "glr" else ""
        try:
            return McConfig(
                trials_h0=self.trials["h0" + suffix],
                trials_h1=self.trials["h1" + suffix],
                master_seed=self.master_seed,
                pf_targets=tuple(pfs),
                rule=rule,
                target_draw=target_draw,
            )
        except ValueError as err:
            raise ConfigValidationError(str(err)) from err

    def pfs(self, section: str) -> list[float]:
        pfs = parse_float_list(self.resolved[section]["pfs"])
        if not all(0.0 < pf < 1.0 for pf in pfs):
            raise ConfigValidationError("pf targets must lie in (0, 1)")
        return pfs


def _resolve(parser: configparser.ConfigParser, overrides) -> dict:
    resolved = {sec: dict(keys) for sec, keys in DEFAULTS.items()}
    for sec in parser.sections():
        if sec not in DEFAULTS:
            raise ConfigValidationError(f"unknown config section [{sec}]")
        for key, value in parser.items(sec):
            if key not in DEFAULTS[sec]:
                raise ConfigValidationError(f"unknown key {key!r} in [{sec}]")
            resolved[sec][key] = value.strip()
    for item in overrides or ():
        try:
            dest, value = item.split("=", 1)
            sec, key = dest.split(".", 1)
        except ValueError as err:
            raise ConfigValidationError(
                f"override must look like section.key=value: {item!r}"
            ) from err
        if sec not in DEFAULTS or key not in DEFAULTS[sec]:
            raise ConfigValidationError(f"unknown override target {dest!r}")
        resolved[sec][key] = value.strip()
    return resolved


def load_config(path: str | None, overrides=()) -> ExperimentConfig:
    """Read, default-fill, and validate a config; path None means defaults."""
    parser = configparser.ConfigParser(interpolation=None)
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                parser.read_file(fh)
        except OSError as err:
            raise ConfigParseError(f"cannot read {path}: {err}") from err
        except configparser.Error as err:
            raise ConfigParseError(str(err)) from err
    resolved = _resolve(parser, overrides)

    scene = _build_scene(resolved["scene"])
    nc = parse_int(resolved["grid"]["nc"], "grid.nc")
    snrs = parse_float_list(resolved["grid"]["snr_db"])
    try:
        std = math.sqrt(variance(scene.noise[0]))
    except ValueError:
        std = 1.0  # no finite variance; amplitude grid stays nominal
    try:
        grid = default_grids(scene.region, nc, snrs, noise_std=std)
    except ValueError as err:
        raise ConfigValidationError(str(err)) from err

    mc = resolved["mc"]
    trials = {
        "h0": parse_int(mc["trials_h0"], "mc.trials_h0"),
        "h1": parse_int(mc["trials_h1"], "mc.trials_h1"),
        "h0_glr": parse_int(mc["trials_h0_glr"], "mc.trials_h0_glr"),
        "h1_glr": parse_int(mc["trials_h1_glr"], "mc.trials_h1_glr"),
    }
    if any(v < 1 for v in trials.values()):
        raise ConfigValidationError("trial counts must be positive")
    master_seed = parse_int(mc["master_seed"], "mc.master_seed")
    if not 0 <= master_seed < 2**64:
        raise ConfigValidationError("master seed must fit in 64 bits")
    threads = parse_int(mc["threads"], "mc.threads")
    if threads < 1:
        raise ConfigValidationError("threads must be positive")

    return ExperimentConfig(
        resolved=resolved,
        scene=scene,
        grid=grid,
        master_seed=master_seed,
        threads=threads,
        output_dir=resolved["output"]["directory"],
        trials=trials,
    )
