"""Self-contained invariant checks runnable from the command line.

Each check exercises an exact identity of the statistics on randomized
inputs: pmf normalization, the information/score-variance identity, the
score as the likelihood gradient, and the agreement of the zero-threshold
closed forms with their generic counterparts.
"""

from __future__ import annotations

import itertools

import numpy as np

from .fusion import (
    GridSpec,
    fisher_information,
    glr_statistic,
    grao_statistic,
    grao_statistic_optimized,
    log_likelihood,
    score,
)
from .asymptotics import noncentrality, noncentrality_optimized
from .noise import NoiseModel
from .scene import Scene


def _random_model(rng) -> NoiseModel:
    family = rng.choice(["gaussian", "laplace", "gengauss", "cauchy"])
    scale = float(rng.uniform(0.5, 2.0))
    if family == "gengauss":
        return NoiseModel(family, scale, float(rng.uniform(0.4, 2.0)))
    return NoiseModel(family, scale)


def _random_scene(rng, k: int, zero_tau: bool = False) -> Scene:
    return Scene(
        sensors=rng.random((k, 2)),
        noise=tuple(_random_model(rng) for _ in range(k)),
        taus=np.zeros(k) if zero_tau else rng.uniform(-1.0, 1.0, k),
        pes=rng.uniform(0.0, 0.4, k),
        aaf_eta=float(rng.uniform(0.1, 0.5)),
        aaf_alpha=float(rng.uniform(1.0, 5.0)),
    )


def _all_reports(k: int):
    return (np.array(b, dtype=np.uint8) for b in itertools.product((0, 1), repeat=k))


def check_likelihood_normalization(rng, n_scenes: int = 20):
    """Sum of exp(log-likelihood) over all bit vectors must be 1."""
    worst = 0.0
    for _ in range(n_scenes):
        k = int(rng.integers(1, 9))
        scn = _random_scene(rng, k)
        theta = float(rng.normal(0.0, 2.0))
        pos = rng.random(2)
        total = sum(
            np.exp(log_likelihood(b, theta, pos, scn)) for b in _all_reports(k)
        )
        worst = max(worst, abs(total - 1.0))
    return worst < 1e-12, f"max |sum - 1| = {worst:.3e}"


def check_information_identity(rng, n_scenes: int = 10):
    """Fisher information equals the exact second moment of the score."""
    worst = 0.0
    for _ in range(n_scenes):
        k = int(rng.integers(1, 7))
        scn = _random_scene(rng, k)
        pos = rng.random(2)
        moment = sum(
            np.exp(log_likelihood(b, 0.0, pos, scn)) * score(b, pos, scn) ** 2
            for b in _all_reports(k)
        )
        fi = fisher_information(0.0, pos, scn)
        worst = max(worst, abs(moment - fi) / max(1.0, abs(fi)))
    return worst < 1e-10, f"max relative error = {worst:.3e}"


def check_score_gradient(rng, n_cases: int = 50, step: float = 1e-5):
    """Score equals the central difference of the log-likelihood at zero."""
    worst = 0.0
    for _ in range(n_cases):
        k = int(rng.integers(1, 11))
        scn = _random_scene(rng, k)
        pos = rng.random(2)
        bits = (rng.random(k) < 0.5).astype(np.uint8)
        diff = (
            log_likelihood(bits, step, pos, scn)
            - log_likelihood(bits, -step, pos, scn)
        ) / (2.0 * step)
        s = score(bits, pos, scn)
        worst = max(worst, abs(diff - s) / max(1.0, abs(s)))
    return worst < 1e-6, f"max relative error = {worst:.3e}"


def check_zero_tau_statistic(rng, n_cases: int = 20):
    """Zero-threshold closed form matches the generic statistic."""
    worst = 0.0
    for _ in range(n_cases):
        k = int(rng.integers(1, 11))
        scn = _random_scene(rng, k, zero_tau=True)
        grid = GridSpec(rng.random((5, 2)), [-1.0, 0.0, 1.0])
        bits = (rng.random(k) < 0.5).astype(np.uint8)
        a = grao_statistic(bits, scn, grid).value
        b = grao_statistic_optimized(bits, scn, grid).value
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return worst < 1e-12, f"max relative error = {worst:.3e}"


def check_noncentrality_forms(rng, n_cases: int = 20):
    """Zero-threshold noncentrality matches amplitude^2 times information."""
    worst = 0.0
    for _ in range(n_cases):
        k = int(rng.integers(1, 11))
        scn = _random_scene(rng, k, zero_tau=True)
        pos = rng.random(2)
        theta = float(rng.normal(0.0, 2.0))
        a = noncentrality(theta, pos, scn)
        b = noncentrality_optimized(theta, pos, scn)
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return worst < 1e-12, f"max relative error = {worst:.3e}"


def check_statistics_nonnegative(rng, n_cases: int = 20):
    """Both maximized statistics are nonnegative on random reports."""
    low = np.inf
    for _ in range(n_cases):
        k = int(rng.integers(1, 9))
        scn = _random_scene(rng, k)
        grid = GridSpec(rng.random((4, 2)), [-0.5, 0.0, 0.5])
        bits = (rng.random(k) < 0.5).astype(np.uint8)
        low = min(
            low,
            grao_statistic(bits, scn, grid).value,
            glr_statistic(bits, scn, grid).value,
        )
    return low >= 0.0, f"min statistic = {low:.3e}"


CHECKS = (
    ("likelihood normalization", check_likelihood_normalization),
    ("information identity", check_information_identity),
    ("score gradient", check_score_gradient),
    ("zero-threshold statistic", check_zero_tau_statistic),
    ("noncentrality forms", check_noncentrality_forms),
    ("statistic nonnegativity", check_statistics_nonnegative),
)


def run_all(seed: int = 20260815):
    """Run every check; returns a list of (name, ok, detail)."""
    results = []
    for name, fn in CHECKS:
        rng = np.random.default_rng(seed)
        ok, detail = fn(rng)
        results.append((name, bool(ok), detail))
    return results
