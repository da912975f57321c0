"""Quantizer-threshold design.

Each sensor's threshold is chosen independently to maximize its information
density at amplitude zero. The objective trades the squared noise density at
the threshold against the bit variance plus a channel penalty that grows with
the reporting error rate; for the symmetric unimodal families here the
maximizer is the noise median, i.e. threshold zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .noise import NoiseModel, ccdf, pdf

SCAN_POINTS = 10_001


@dataclass(frozen=True)
class ThresholdDesign:
    """Result of a threshold search over an interval."""

    tau_star: float
    objective_at_star: float
    search_interval: tuple[float, float]
    tolerance: float


def bsc_penalty(pe: float) -> float:
    """Channel penalty added to the bit variance in the design objective.

    Zero for a clean channel and strictly increasing in the error rate,
    diverging as the rate approaches 1/2.
    """
    if not 0.0 <= pe < 0.5:
        raise ValueError("channel error rate must lie in [0, 1/2)")
    return pe * (1.0 - pe) / (1.0 - 2.0 * pe) ** 2


def threshold_objective(tau, noise: NoiseModel, pe: float):
    """Per-sensor information density at amplitude zero, as a function of tau.

    Equals pdf(tau)^2 / (penalty + ccdf(tau) * (1 - ccdf(tau))); accepts
    scalar or array tau.
    """
    delta = bsc_penalty(pe)
    tau = np.asarray(tau, dtype=np.float64)
    p = pdf(noise, tau)
    f = ccdf(noise, tau)
    out = np.asarray(p) ** 2 / (delta + np.asarray(f) * (1.0 - np.asarray(f)))
    return out if out.ndim else float(out)


def optimize_threshold(
    noise: NoiseModel,
    pe: float,
    interval: tuple[float, float] | None = None,
    tol: float = 1e-8,
) -> ThresholdDesign:
    """Maximize the design objective over an interval containing zero.

    A uniform coarse scan guards against multimodality, then golden-section
    refinement tightens the best bracket to the requested tolerance.
    """
    if interval is None:
        interval = (-5.0 * noise.scale, 5.0 * noise.scale)
    lo, hi = float(interval[0]), float(interval[1])
    if not (lo <= 0.0 <= hi and lo < hi):
        raise ValueError("search interval must contain zero")
    if not tol > 0.0:
        raise ValueError("tolerance must be positive")

    probes = np.linspace(lo, hi, SCAN_POINTS)
    values = threshold_objective(probes, noise, pe)
    best = int(np.argmax(values))
    tau_star, obj_star = float(probes[best]), float(values[best])

    def negated(tau):
        return -threshold_objective(tau, noise, pe)

    if 0 < best < SCAN_POINTS - 1:
        bracket = (probes[best - 1], probes[best], probes[best + 1])
        res = minimize_scalar(
            negated, bracket=bracket, method="golden", options={"xtol": tol}
        )
        refined_tau, refined_obj = float(res.x), float(-res.fun)
    else:
        # maximum sits on the interval edge; refine within the last cell
        inner_lo = probes[max(best - 1, 0)]
        inner_hi = probes[min(best + 1, SCAN_POINTS - 1)]
        res = minimize_scalar(
            negated, bounds=(inner_lo, inner_hi), method="bounded",
            options={"xatol": tol},
        )
        refined_tau, refined_obj = float(res.x), float(-res.fun)

    # the refinement must never lose to a probe it was seeded from
    if refined_obj >= obj_star and lo <= refined_tau <= hi:
        tau_star, obj_star = refined_tau, refined_obj
    return ThresholdDesign(tau_star, obj_star, (lo, hi), tol)
