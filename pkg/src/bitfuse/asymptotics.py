"""Asymptotic performance of the known-position (clairvoyant) tests.

In the weak-signal regime the clairvoyant statistic is chi-square with one
degree of freedom under the null and noncentral chi-square under the
alternative, with noncentrality amplitude^2 times the null Fisher
information. These routines provide that machinery and the resulting
detection-probability prediction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc, gammaincc, gammaln

from .fusion import fisher_information
from .noise import pdf
from .scene import Scene, gain_vector

# truncate the Poisson mixture once this much of its mass is accumulated
_POISSON_TAIL = 1e-14

# quantile bisection domain and tolerance
_QUANTILE_HI = 1e3
_QUANTILE_TOL = 1e-12


@dataclass(frozen=True)
class AsymptoticPrediction:
    """Noncentrality and predicted detection probability at a target level."""

    noncentrality: float
    pf: float
    pd_predicted: float


def noncentrality(theta1: float, position, scene: Scene) -> float:
    """Noncentrality of the clairvoyant statistic at the given amplitude."""
    return theta1**2 * fisher_information(0.0, position, scene)


def noncentrality_optimized(theta1: float, position, scene: Scene) -> float:
    """Zero-threshold closed form: 4 theta^2 sum((1-2pe)^2 pdf(0)^2 g^2)."""
    if np.any(scene.taus != 0.0):
        raise ValueError("optimized form requires tau = 0")
    g = gain_vector(scene, position)
    c = (1.0 - 2.0 * scene.pes) * np.array([pdf(m, 0.0) for m in scene.noise])
    return 4.0 * theta1**2 * float(np.sum(c**2 * g**2))


def chi2_cdf(x: float, dof: int) -> float:
    """Central chi-square CDF via the regularized incomplete gamma."""
    if dof < 1:
        raise ValueError("degrees of freedom must be at least 1")
    if x <= 0.0:
        return 0.0
    return float(gammainc(dof / 2.0, x / 2.0))


def chi2_quantile(p: float, dof: int) -> float:
    """Inverse central chi-square CDF by bisection."""
    if not 0.0 < p < 1.0:
        raise ValueError("probability must lie in (0, 1)")
    if dof < 1:
        raise ValueError("degrees of freedom must be at least 1")
    lo, hi = 0.0, _QUANTILE_HI
    if chi2_cdf(hi, dof) < p:
        raise ValueError("quantile outside the supported range")
    while hi - lo > _QUANTILE_TOL:
        mid = 0.5 * (lo + hi)
        if chi2_cdf(mid, dof) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def noncentral_chi2_ccdf(x: float, dof: int, lam: float) -> float:
    """Pr{noncentral chi-square(dof, lam) > x} by Poisson mixture.

    The mixture weights are Poisson(lam/2) over the order j, each term a
    central chi-square tail with dof + 2j degrees of freedom; terms are
    accumulated until the remaining Poisson mass is negligible.
    """
    if lam < 0.0:
        raise ValueError("noncentrality must be nonnegative")
    if dof < 1:
        raise ValueError("degrees of freedom must be at least 1")
    if x <= 0.0:
        return 1.0
    if lam == 0.0:
        return float(gammaincc(dof / 2.0, x / 2.0))
    half = lam / 2.0
    # enough orders that the truncated Poisson tail is below the target:
    # mean + wide deviation band, then verified and extended if needed.
    # the tail mass P(J > j_hi) is checked through the incomplete gamma,
    # not through 1 - sum(w): the summed weights carry enough rounding
    # error at large lam that the naive check can fail forever
    j_hi = int(half + 12.0 * math.sqrt(half + 4.0) + 30.0)
    while gammainc(j_hi + 1.0, half) > _POISSON_TAIL:
        j_hi *= 2
    j = np.arange(j_hi + 1)
    log_w = j * math.log(half) - half - gammaln(j + 1.0)
    w = np.exp(log_w)
    tails = gammaincc(dof / 2.0 + j, x / 2.0)
    return float(np.dot(w, tails))


def clairvoyant_pd(pf: float, lam: float) -> float:
    """Predicted detection probability of the clairvoyant test at level pf."""
    if not 0.0 < pf < 1.0:
        raise ValueError("false-alarm level must lie in (0, 1)")
    gamma = chi2_quantile(1.0 - pf, 1)
    return noncentral_chi2_ccdf(gamma, 1, lam)


def predict(scene: Scene, position, theta1: float, pf: float) -> AsymptoticPrediction:
    """Bundle noncentrality and predicted power for one operating point."""
    lam = noncentrality(theta1, position, scene)
    return AsymptoticPrediction(lam, pf, clairvoyant_pd(pf, lam))
