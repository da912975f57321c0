"""Zero-mean, unimodal, symmetric noise families.

Each family exposes a density, a complementary CDF (``Pr{w > x}``) and a
sampler, all parameterized by a single positive scale (plus a shape exponent
for the generalized Gaussian). These are the measurement-noise models the
sensing layer quantizes against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc, gammaincc, gammaln

FAMILIES = ("gaussian", "laplace", "gengauss", "cauchy")

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class NoiseModel:
    """A symmetric noise family with a fixed scale.

    family: one of "gaussian", "laplace", "gengauss", "cauchy".
    scale: family-specific positive scale (sigma, beta, the generalized
        Gaussian scale, or the Cauchy half-width).
    shape: generalized Gaussian exponent, required for that family and
        restricted to (0, 2]; must be None otherwise.
    """

    family: str
    scale: float
    shape: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown noise family {self.family!r}")
        if not (self.scale > 0.0 and math.isfinite(self.scale)):
            raise ValueError("scale must be positive and finite")
        if self.family == "gengauss":
            if self.shape is None:
                raise ValueError("gengauss requires a shape exponent")
            # shape 0 is degenerate; above 2 the tails thin past the
            # supported family and the design properties no longer hold
            if not (0.0 < self.shape <= 2.0):
                raise ValueError("gengauss shape must lie in (0, 2]")
        elif self.shape is not None:
            raise ValueError(f"{self.family} takes no shape parameter")


def pdf(model: NoiseModel, x):
    """Density p_w(x); accepts scalars or arrays."""
    x = np.asarray(x, dtype=np.float64)
    s = model.scale
    if model.family == "gaussian":
        out = _INV_SQRT_2PI / s * np.exp(-0.5 * (x / s) ** 2)
    elif model.family == "laplace":
        out = np.exp(-np.abs(x) / s) / (2.0 * s)
    elif model.family == "gengauss":
        e = model.shape
        norm = e / (2.0 * s * math.exp(gammaln(1.0 / e)))
        out = norm * np.exp(-((np.abs(x) / s) ** e))
    else:  # cauchy
        out = 1.0 / (math.pi * s * (1.0 + (x / s) ** 2))
    return out if out.ndim else float(out)


def ccdf(model: NoiseModel, x):
    """Complementary CDF Pr{w > x}; accepts scalars or arrays."""
    x = np.asarray(x, dtype=np.float64)
    s = model.scale
    if model.family == "gaussian":
        out = 0.5 * erfc(x / (s * _SQRT2))
    elif model.family == "laplace":
        half = 0.5 * np.exp(-np.abs(x) / s)
        out = np.where(x >= 0.0, half, 1.0 - half)
    elif model.family == "gengauss":
        e = model.shape
        half = 0.5 * gammaincc(1.0 / e, (np.abs(x) / s) ** e)
        out = np.where(x >= 0.0, half, 1.0 - half)
    else:  # cauchy
        out = 0.5 - np.arctan(x / s) / math.pi
    return out if out.ndim else float(out)


def sample(model: NoiseModel, rng: np.random.Generator, size=None):
    """Draw i.i.d. noise from the model using the supplied generator."""
    s = model.scale
    if model.family == "gaussian":
        return s * rng.standard_normal(size)
    if model.family == "laplace":
        return rng.laplace(0.0, s, size)
    if model.family == "gengauss":
        e = model.shape
        # |w|^e / s^e is Gamma(1/e); attach a random sign for symmetry
        mag = s * rng.standard_gamma(1.0 / e, size) ** (1.0 / e)
        sign = np.where(rng.random(size) < 0.5, -1.0, 1.0)
        return mag * sign
    return s * rng.standard_cauchy(size)


def variance(model: NoiseModel) -> float:
    """E[w^2]; raises for Cauchy, which has none."""
    if model.family == "gaussian":
        return model.scale**2
    if model.family == "laplace":
        return 2.0 * model.scale**2
    if model.family == "gengauss":
        e = model.shape
        return model.scale**2 * math.exp(gammaln(3.0 / e) - gammaln(1.0 / e))
    raise ValueError("no finite variance; pass explicit scale")


def unit_variance(family: str, shape: float | None = None) -> NoiseModel:
    """Build a model with E[w^2] = 1; Cauchy is rejected."""
    if family == "gaussian":
        return NoiseModel("gaussian", 1.0)
    if family == "laplace":
        return NoiseModel("laplace", 1.0 / _SQRT2)
    if family == "gengauss":
        if shape is None:
            raise ValueError("gengauss requires a shape exponent")
        scale = math.exp(0.5 * (gammaln(1.0 / shape) - gammaln(3.0 / shape)))
        return NoiseModel("gengauss", scale, shape)
    if family == "cauchy":
        raise ValueError("no finite variance; pass explicit scale")
    raise ValueError(f"unknown noise family {family!r}")
