"""Reproducible Monte Carlo experiments over the fusion statistics.

Every trial draws its randomness from a counter-based generator keyed by
(master_seed, stream, trial index), so any trial can be regenerated in
isolation and results are bit-identical under any execution schedule. Trials
are evaluated in fixed-size chunks (see fusion.CHUNK); worker processes only
ever split work at chunk boundaries, and the BLAS is pinned to one thread
inside evaluation, because multi-threaded matrix kernels are not bitwise
reproducible.

Streams: 1 = null-hypothesis calibration, 2 = held-out null validation,
3 = signal-present estimation. Reusing a stream across sweep points gives
common random numbers, which smooths curve comparisons on purpose.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass

import numpy as np
from threadpoolctl import threadpool_limits

from .fusion import CHUNK, GridSpec, make_evaluator
from .noise import variance
from .scene import (
    Scene,
    TargetState,
    generate_measurements,
    quantize,
    transmit_bits,
)

STREAM_H0_CAL = 1
STREAM_H0_VAL = 2
STREAM_H1 = 3

_TRIAL_BITS = 48  # trial index occupies the low bits of the counter key


@dataclass(frozen=True)
class McConfig:
    """Trial budget and protocol for one experiment.

    target_draw is either the string "uniform" (redraw the target position
    uniformly over the region each trial) or a fixed position.
    """

    trials_h0: int
    trials_h1: int
    master_seed: int
    pf_targets: tuple[float, ...] = (0.01,)
    rule: str = "grao"
    target_draw: object = "uniform"

    def __post_init__(self):
        if self.trials_h0 < 1 or self.trials_h1 < 1:
            raise ValueError("trial counts must be positive")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master seed must fit in 64 bits")
        if not all(0.0 < pf < 1.0 for pf in self.pf_targets):
            raise ValueError("false-alarm targets must lie in (0, 1)")


@dataclass(frozen=True)
class McResult:
    """Calibrated threshold and detection estimate for one operating point."""

    gamma: float
    pf_target: float
    achieved_pf: float
    achieved_pf_se: float
    pd: float
    pd_se: float
    trials_h0: int
    trials_h1: int
    master_seed: int


def trial_generator(master_seed: int, stream: int, trial: int) -> np.random.Generator:
    """The counter-based generator owned by one trial."""
    if not 0 <= trial < 2**_TRIAL_BITS:
        raise ValueError("trial index out of range")
    key = np.array(
        [master_seed, (stream << _TRIAL_BITS) + trial], dtype=np.uint64
    )
    return np.random.Generator(np.random.Philox(key=key))


def _generate_chunk(scene, master_seed, stream, start, count, theta, draw):
    """Bit matrix for trials [start, start+count), shape (count, K).

    Per-trial draw order is fixed: target position (only when drawn
    uniformly), then the noise vector, then channel flips (only when some
    error rate is positive).
    """
    lo, hi = scene.region
    span = hi - lo
    bits = np.empty((count, scene.k), dtype=np.float64)
    for t in range(count):
        rng = trial_generator(master_seed, stream, start + t)
        if draw is None:
            target = None
        else:
            if isinstance(draw, str):  # "uniform"
                pos = lo + rng.random(len(lo)) * span
            else:
                pos = draw
            target = TargetState(theta, pos)
        y = generate_measurements(scene, target, rng)
        bits[t] = transmit_bits(quantize(y, scene.taus), scene.pes, rng)
    return bits


# worker context for fork-based pools; set immediately before forking
_POOL_CTX = None


def _run_chunk(index):
    ev, scene, master_seed, stream, trials, theta, draw = _POOL_CTX
    start = index * CHUNK
    count = min(CHUNK, trials - start)
    bits = _generate_chunk(scene, master_seed, stream, start, count, theta, draw)
    with threadpool_limits(limits=1, user_api="blas"):
        return ev.values(bits)


def sample_statistics(
    evaluator,
    scene: Scene,
    trials: int,
    master_seed: int,
    stream: int,
    theta: float = 0.0,
    draw=None,
    threads: int = 1,
) -> np.ndarray:
    """Statistic values for `trials` independent trials.

    draw=None samples the null hypothesis; draw="uniform" or a fixed
    position samples the alternative at the given amplitude. The result is
    independent of `threads`.
    """
    global _POOL_CTX
    if trials < 1:
        raise ValueError("need at least one trial")
    n_chunks = math.ceil(trials / CHUNK)
    _POOL_CTX = (evaluator, scene, master_seed, stream, trials, theta, draw)
    try:
        workers = min(threads, n_chunks)
        if workers > 1 and "fork" in multiprocessing.get_all_start_methods():
            ctx = multiprocessing.get_context("fork")
            with ctx.Pool(workers) as pool:
                parts = pool.map(_run_chunk, range(n_chunks))
        else:
            parts = [_run_chunk(i) for i in range(n_chunks)]
    finally:
        _POOL_CTX = None
    return np.concatenate(parts)


def conservative_gamma(sample: np.ndarray, pf0: float) -> tuple[float, float]:
    """Smallest sampled threshold whose exceedance rate is at most pf0.

    Returns (gamma, achieved rate); the decision rule is value > gamma, so
    the achieved rate never overshoots the target.
    """
    n = len(sample)
    m = int(math.floor(pf0 * n))
    gamma = float(np.partition(sample, n - 1 - m)[n - 1 - m])
    return gamma, float(np.mean(sample > gamma))


def _binomial_se(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n)


def calibrate_threshold(
    rule, scene: Scene, grid: GridSpec, pf0: float, trials: int, seed: int,
    threads: int = 1,
) -> tuple[float, float]:
    """Calibrate the decision threshold at a target false-alarm rate.

    `rule` is a rule name or a prebuilt evaluator. Requires pf0 * trials of
    at least 100 so the estimated tail has some resolution.
    """
    if not 0.0 < pf0 < 1.0:
        raise ValueError("false-alarm target must lie in (0, 1)")
    if pf0 * trials < 100:
        raise ValueError("too few trials to resolve the target tail")
    ev = make_evaluator(rule, scene, grid) if isinstance(rule, str) else rule
    sample = sample_statistics(
        ev, scene, trials, seed, STREAM_H0_CAL, threads=threads
    )
    return conservative_gamma(sample, pf0)


def estimate_pd(
    rule, scene: Scene, grid: GridSpec, target_draw, theta: float,
    gamma: float, trials: int, seed: int, threads: int = 1,
) -> tuple[float, float]:
    """Detection probability at a calibrated threshold, with its SE."""
    ev = make_evaluator(rule, scene, grid) if isinstance(rule, str) else rule
    vals = sample_statistics(
        ev, scene, trials, seed, STREAM_H1, theta=theta, draw=target_draw,
        threads=threads,
    )
    pd = float(np.mean(vals > gamma))
    return pd, _binomial_se(pd, trials)


def validate_calibration(
    rule, scene: Scene, grid: GridSpec, gamma: float, trials: int, seed: int,
    threads: int = 1,
) -> tuple[float, float]:
    """Exceedance rate of gamma on a held-out null sample, with its SE."""
    ev = make_evaluator(rule, scene, grid) if isinstance(rule, str) else rule
    vals = sample_statistics(
        ev, scene, trials, seed, STREAM_H0_VAL, threads=threads
    )
    rate = float(np.mean(vals > gamma))
    return rate, _binomial_se(rate, trials)


def amplitude_for_snr(scene: Scene, snr_db: float) -> float:
    """Target amplitude giving the requested SNR against the scene's noise.

    Needs a common finite noise variance across sensors (the SNR is a
    network-level quantity here).
    """
    variances = [variance(m) for m in scene.noise]
    if max(variances) - min(variances) > 1e-12 * max(variances):
        raise ValueError("SNR sweep needs a shared noise variance")
    return math.sqrt(variances[0]) * 10.0 ** (snr_db / 20.0)


def _mc_for(mc, rule: str) -> McConfig:
    return mc if isinstance(mc, McConfig) else mc[rule]


def run_operating_point(
    rule, scene: Scene, grid: GridSpec, mc: McConfig, theta: float,
    threads: int = 1,
) -> list[McResult]:
    """Calibrate and estimate detection at one amplitude, per pf target."""
    ev = make_evaluator(rule, scene, grid) if isinstance(rule, str) else rule
    h0 = sample_statistics(
        ev, scene, mc.trials_h0, mc.master_seed, STREAM_H0_CAL, threads=threads
    )
    out = []
    for pf in mc.pf_targets:
        gamma, achieved = conservative_gamma(h0, pf)
        pd, pd_se = estimate_pd(
            ev, scene, grid, mc.target_draw, theta, gamma, mc.trials_h1,
            mc.master_seed, threads=threads,
        )
        out.append(
            McResult(
                gamma, pf, achieved, _binomial_se(achieved, mc.trials_h0),
                pd, pd_se, mc.trials_h0, mc.trials_h1, mc.master_seed,
            )
        )
    return out


def sweep_tau(
    scene: Scene,
    grid: GridSpec,
    taus,
    snr_db_list,
    mc,
    rules=("grao", "glr"),
    polarities=(1, -1),
    threads: int = 1,
) -> list[dict]:
    """Detection vs a common quantizer threshold, per rule and polarity.

    Each threshold is applied to every sensor and the decision threshold is
    recalibrated; one output row per (rule, tau, pf, snr, polarity).
    """
    rows = []
    for rule in rules:
        cfg = _mc_for(mc, rule)
        for tau in taus:
            scn = scene.with_taus(np.full(scene.k, float(tau)))
            ev = make_evaluator(rule, scn, grid)
            h0 = sample_statistics(
                ev, scn, cfg.trials_h0, cfg.master_seed, STREAM_H0_CAL,
                threads=threads,
            )
            gammas = {pf: conservative_gamma(h0, pf) for pf in cfg.pf_targets}
            for snr_db in snr_db_list:
                amp = amplitude_for_snr(scn, snr_db)
                for pol in polarities:
                    theta = pol * amp
                    vals = sample_statistics(
                        ev, scn, cfg.trials_h1, cfg.master_seed, STREAM_H1,
                        theta=theta, draw=cfg.target_draw, threads=threads,
                    )
                    for pf in cfg.pf_targets:
                        gamma, achieved = gammas[pf]
                        pd = float(np.mean(vals > gamma))
                        rows.append(
                            {
                                "rule": rule,
                                "tau": float(tau),
                                "pf_target": pf,
                                "snr_db": float(snr_db),
                                "polarity": int(pol),
                                "theta": theta,
                                "gamma": gamma,
                                "achieved_pf": achieved,
                                "pd": pd,
                                "pd_se": _binomial_se(pd, cfg.trials_h1),
                                "trials_h0": cfg.trials_h0,
                                "trials_h1": cfg.trials_h1,
                            }
                        )
    return rows


def sweep_snr(
    scene: Scene,
    grid: GridSpec,
    snr_db_list,
    mc,
    rules=("grao", "glr"),
    threads: int = 1,
) -> list[dict]:
    """Detection vs SNR per rule and pf target, positive polarity.

    Calibration happens once per rule; the target is redrawn per trial when
    the config says so.
    """
    rows = []
    for rule in rules:
        cfg = _mc_for(mc, rule)
        ev = make_evaluator(rule, scene, grid)
        h0 = sample_statistics(
            ev, scene, cfg.trials_h0, cfg.master_seed, STREAM_H0_CAL,
            threads=threads,
        )
        gammas = {pf: conservative_gamma(h0, pf) for pf in cfg.pf_targets}
        for snr_db in snr_db_list:
            theta = amplitude_for_snr(scene, snr_db)
            vals = sample_statistics(
                ev, scene, cfg.trials_h1, cfg.master_seed, STREAM_H1,
                theta=theta, draw=cfg.target_draw, threads=threads,
            )
            for pf in cfg.pf_targets:
                gamma, achieved = gammas[pf]
                pd = float(np.mean(vals > gamma))
                rows.append(
                    {
                        "rule": rule,
                        "pf_target": pf,
                        "snr_db": float(snr_db),
                        "theta": theta,
                        "gamma": gamma,
                        "achieved_pf": achieved,
                        "pd": pd,
                        "pd_se": _binomial_se(pd, cfg.trials_h1),
                        "trials_h0": cfg.trials_h0,
                        "trials_h1": cfg.trials_h1,
                    }
                )
    return rows


def heatmap_pd(
    scene: Scene,
    grid: GridSpec,
    positions,
    snr_db: float,
    mc,
    rules=("grao", "glr"),
    threads: int = 1,
) -> list[dict]:
    """Detection probability per fixed target position.

    The supplied positions form the evaluation lattice; the statistic keeps
    its own search grid. Calibration is shared across positions (the null
    does not depend on the target).
    """
    positions = np.atleast_2d(np.asarray(positions, dtype=np.float64))
    rows = []
    for rule in rules:
        cfg = _mc_for(mc, rule)
        theta = amplitude_for_snr(scene, snr_db)
        ev = make_evaluator(rule, scene, grid)
        h0 = sample_statistics(
            ev, scene, cfg.trials_h0, cfg.master_seed, STREAM_H0_CAL,
            threads=threads,
        )
        gammas = {pf: conservative_gamma(h0, pf) for pf in cfg.pf_targets}
        for pos in positions:
            vals = sample_statistics(
                ev, scene, cfg.trials_h1, cfg.master_seed, STREAM_H1,
                theta=theta, draw=pos, threads=threads,
            )
            for pf in cfg.pf_targets:
                gamma, achieved = gammas[pf]
                pd = float(np.mean(vals > gamma))
                rows.append(
                    {
                        "rule": rule,
                        "pf_target": pf,
                        "snr_db": float(snr_db),
                        "theta": theta,
                        "gamma": gamma,
                        "achieved_pf": achieved,
                        "x": float(pos[0]),
                        "y": float(pos[1]),
                        "pd": pd,
                        "se": _binomial_se(pd, cfg.trials_h1),
                    }
                )
    return rows


def roc(
    scene: Scene,
    grid: GridSpec,
    rule: str,
    snr_db: float,
    n_points: int,
    mc: McConfig,
    threads: int = 1,
) -> list[dict]:
    """Empirical ROC by sweeping the threshold over null order statistics.

    The last point uses a sentinel below every sampled value so the curve
    reaches (1, 1) exactly.
    """
    if n_points < 2:
        raise ValueError("need at least two ROC points")
    cfg = _mc_for(mc, rule)
    ev = make_evaluator(rule, scene, grid)
    h0 = sample_statistics(
        ev, scene, cfg.trials_h0, cfg.master_seed, STREAM_H0_CAL,
        threads=threads,
    )
    theta = amplitude_for_snr(scene, snr_db)
    h1 = sample_statistics(
        ev, scene, cfg.trials_h1, cfg.master_seed, STREAM_H1, theta=theta,
        draw=cfg.target_draw, threads=threads,
    )
    rows = []
    for j in range(n_points):
        target = j / (n_points - 1)
        if target >= 1.0:
            gamma = float(h0.min()) - 1.0
        else:
            gamma, _ = conservative_gamma(h0, target)
        pf = float(np.mean(h0 > gamma))
        pd = float(np.mean(h1 > gamma))
        rows.append(
            {
                "gamma": gamma,
                "pf": pf,
                "pf_se": _binomial_se(pf, cfg.trials_h0),
                "pd": pd,
                "pd_se": _binomial_se(pd, cfg.trials_h1),
            }
        )
    return rows
