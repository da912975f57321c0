"""Noise families against independent references.

scipy.stats ships its own implementations of all four families, and
numerical quadrature ties the density, tail, and variance together without
reusing any package code.
"""

import math

import numpy as np
import pytest
from scipy import stats
from scipy.integrate import quad

from bitfuse import NoiseModel, ccdf, pdf, sample, unit_variance, variance

GRID = np.array([-4.0, -1.3, -0.2, 0.0, 0.4, 1.0, 2.7])


def reference(model):
    if model.family == "gaussian":
        return stats.norm(scale=model.scale)
    if model.family == "laplace":
        return stats.laplace(scale=model.scale)
    if model.family == "gengauss":
        return stats.gennorm(model.shape, scale=model.scale)
    return stats.cauchy(scale=model.scale)


MODELS = [
    NoiseModel("gaussian", 1.0),
    NoiseModel("gaussian", 0.3),
    NoiseModel("laplace", 1.0 / math.sqrt(2.0)),
    NoiseModel("laplace", 2.5),
    NoiseModel("gengauss", 1.0, 0.7),
    NoiseModel("gengauss", 0.8, 1.5),
    NoiseModel("gengauss", 1.2, 2.0),
    NoiseModel("cauchy", 1.0),
    NoiseModel("cauchy", 0.5),
]


@pytest.mark.parametrize("model", MODELS, ids=str)
def test_pdf_matches_scipy(model):
    np.testing.assert_allclose(
        pdf(model, GRID), reference(model).pdf(GRID), rtol=1e-12
    )


@pytest.mark.parametrize("model", MODELS, ids=str)
def test_ccdf_matches_scipy(model):
    np.testing.assert_allclose(
        ccdf(model, GRID), reference(model).sf(GRID), rtol=1e-11, atol=1e-14
    )


@pytest.mark.parametrize("model", MODELS, ids=str)
def test_ccdf_integrates_the_pdf(model):
    for x in (-1.1, 0.0, 0.8):
        tail, err = quad(lambda t: pdf(model, t), x, np.inf, limit=200)
        assert abs(tail - ccdf(model, x)) < max(1e-9, 10 * err)


@pytest.mark.parametrize("model", MODELS, ids=str)
def test_pdf_normalizes(model):
    total, _ = quad(lambda t: pdf(model, t), -np.inf, np.inf, limit=200)
    assert abs(total - 1.0) < 1e-8


@pytest.mark.parametrize("model", MODELS, ids=str)
def test_symmetry(model):
    np.testing.assert_allclose(pdf(model, GRID), pdf(model, -GRID), rtol=1e-14)
    np.testing.assert_allclose(
        ccdf(model, GRID) + ccdf(model, -GRID), 1.0, atol=1e-14
    )


def test_known_values():
    # closed forms: standard normal density peak, Cauchy quartile, and the
    # exponential tail of the unit-variance Laplace
    assert abs(pdf(NoiseModel("gaussian", 1.0), 0.0) - 1.0 / math.sqrt(2 * math.pi)) < 1e-15
    assert abs(ccdf(NoiseModel("cauchy", 1.0), 1.0) - 0.25) < 1e-15
    lap = unit_variance("laplace")
    assert abs(lap.scale - 1.0 / math.sqrt(2.0)) < 1e-15
    assert abs(ccdf(lap, 1.0) - 0.5 * math.exp(-math.sqrt(2.0))) < 1e-15


def test_gengauss_shape_two_is_gaussian():
    # at shape 2 the family collapses to a Gaussian with sigma = scale/sqrt(2),
    # exercising the incomplete-gamma tail against the erfc one
    gg = unit_variance("gengauss", 2.0)
    gauss = NoiseModel("gaussian", 1.0)
    assert abs(gg.scale - math.sqrt(2.0)) < 1e-12
    np.testing.assert_allclose(pdf(gg, GRID), pdf(gauss, GRID), rtol=1e-12)
    np.testing.assert_allclose(ccdf(gg, GRID), ccdf(gauss, GRID), rtol=1e-10)


@pytest.mark.parametrize(
    "model",
    [m for m in MODELS if m.family != "cauchy"],
    ids=str,
)
def test_variance_matches_quadrature(model):
    num, _ = quad(lambda t: t * t * pdf(model, t), -np.inf, np.inf, limit=400)
    assert abs(num - variance(model)) < 1e-7 * variance(model)


def test_unit_variance_families():
    for family, shape in (
        ("gaussian", None),
        ("laplace", None),
        ("gengauss", 0.8),
        ("gengauss", 2.0),
    ):
        assert abs(variance(unit_variance(family, shape)) - 1.0) < 1e-12


def test_cauchy_has_no_variance():
    with pytest.raises(ValueError, match="no finite variance"):
        variance(NoiseModel("cauchy", 1.0))
    with pytest.raises(ValueError, match="no finite variance"):
        unit_variance("cauchy")


@pytest.mark.parametrize("model", MODELS, ids=str)
def test_sampler_matches_ccdf(model):
    rng = np.random.default_rng(7)
    draws = sample(model, rng, 100_000)
    stat = stats.kstest(draws, lambda x: 1.0 - ccdf(model, x)).statistic
    assert stat < 0.01  # KS 1% critical value at this n is ~0.005


def test_sampler_scalar_and_shape():
    rng = np.random.default_rng(0)
    assert np.shape(sample(NoiseModel("laplace", 1.0), rng)) == ()
    assert sample(NoiseModel("gengauss", 1.0, 1.0), rng, (3, 2)).shape == (3, 2)


def test_sample_variance_close():
    rng = np.random.default_rng(11)
    for family, shape in (("gaussian", None), ("laplace", None), ("gengauss", 1.3)):
        model = unit_variance(family, shape)
        draws = sample(model, rng, 200_000)
        assert abs(np.var(draws) - 1.0) < 0.05


def test_model_validation():
    with pytest.raises(ValueError, match="unknown noise family"):
        NoiseModel("uniform", 1.0)
    with pytest.raises(ValueError, match="positive"):
        NoiseModel("gaussian", 0.0)
    with pytest.raises(ValueError, match="positive"):
        NoiseModel("gaussian", math.inf)
    with pytest.raises(ValueError, match="shape"):
        NoiseModel("gengauss", 1.0)
    with pytest.raises(ValueError, match="shape"):
        NoiseModel("gengauss", 1.0, 2.5)
    with pytest.raises(ValueError, match="shape"):
        NoiseModel("gengauss", 1.0, 0.0)
    with pytest.raises(ValueError, match="no shape"):
        NoiseModel("gaussian", 1.0, 1.0)
    with pytest.raises(ValueError, match="shape"):
        unit_variance("gengauss")
    with pytest.raises(ValueError, match="unknown noise family"):
        unit_variance("bogus")
