"""Chi-square machinery and noncentrality against scipy.stats and quadrature."""

import numpy as np
import pytest
from scipy import stats
from scipy.integrate import quad

from bitfuse import (
    NoiseModel,
    Scene,
    chi2_cdf,
    chi2_quantile,
    clairvoyant_pd,
    fisher_information,
    noncentral_chi2_ccdf,
    noncentrality,
    noncentrality_optimized,
    predict,
)

XS = [0.05, 0.5, 1.0, 3.8, 10.0, 30.0]


@pytest.mark.parametrize("dof", [1, 2, 5, 20])
def test_chi2_cdf_matches_scipy(dof):
    for x in XS:
        assert abs(chi2_cdf(x, dof) - stats.chi2.cdf(x, dof)) < 1e-13
    assert chi2_cdf(0.0, dof) == 0.0
    assert chi2_cdf(-1.0, dof) == 0.0


@pytest.mark.parametrize("dof", [1, 2, 7])
def test_chi2_quantile_matches_scipy(dof):
    for p in (0.01, 0.25, 0.5, 0.95, 0.999):
        got = chi2_quantile(p, dof)
        assert abs(got - stats.chi2.ppf(p, dof)) < 1e-9
        # bisection bounds the error in x; through the CDF that error is
        # scaled by the local density, steep near 0 for dof = 1
        assert abs(chi2_cdf(got, dof) - p) < 1e-10


def test_chi2_quantile_frozen_point():
    # the usual one-sided 5% point of a single squared normal
    assert abs(chi2_quantile(0.95, 1) - 3.841458820694124) < 1e-9


def test_chi2_validation():
    with pytest.raises(ValueError):
        chi2_cdf(1.0, 0)
    with pytest.raises(ValueError):
        chi2_quantile(0.0, 1)
    with pytest.raises(ValueError):
        chi2_quantile(1.0, 1)
    with pytest.raises(ValueError, match="outside"):
        # the bisection domain tops out at 1e3, far below this median
        chi2_quantile(0.9, 2000)


@pytest.mark.parametrize("dof", [1, 3])
@pytest.mark.parametrize("lam", [0.0, 0.3, 4.2, 50.0])
def test_noncentral_ccdf_matches_scipy(dof, lam):
    for x in XS + [80.0]:
        want = stats.ncx2.sf(x, dof, lam) if lam > 0 else stats.chi2.sf(x, dof)
        got = noncentral_chi2_ccdf(x, dof, lam)
        assert abs(got - want) < 1e-10 * max(want, 1e-8)
    assert noncentral_chi2_ccdf(0.0, dof, lam) == 1.0
    assert noncentral_chi2_ccdf(-2.0, dof, lam) == 1.0


def test_noncentral_ccdf_large_lam_terminates():
    # regression: the term-count check used to rely on the summed Poisson
    # weights reaching 1 - 1e-14, which rounding can prevent outright at
    # large lam (423.11001288116 looped until the machine gave out)
    for lam in (423.11001288116, 133.79913415276476, 1000.25):
        for x in (6.634896601021456, 300.0, 1500.0):
            want = stats.ncx2.sf(x, 1, lam)
            got = noncentral_chi2_ccdf(x, 1, lam)
            assert abs(got - want) < 1e-10 * max(want, 1e-8)


def test_noncentral_ccdf_mean_identity():
    # integrating the tail over x recovers the mean dof + lam
    dof, lam = 3, 4.2
    mean, err = quad(
        lambda x: noncentral_chi2_ccdf(x, dof, lam), 0.0, np.inf, limit=300
    )
    assert abs(mean - (dof + lam)) < max(1e-6, 10 * err)


def test_noncentral_ccdf_validation():
    with pytest.raises(ValueError):
        noncentral_chi2_ccdf(1.0, 1, -0.1)
    with pytest.raises(ValueError):
        noncentral_chi2_ccdf(1.0, 0, 1.0)


def test_clairvoyant_pd_reduces_to_pf():
    # with no signal the detection rate is the false-alarm rate
    for pf in (0.01, 0.05, 0.5):
        assert abs(clairvoyant_pd(pf, 0.0) - pf) < 1e-9


def test_clairvoyant_pd_monotone_in_noncentrality():
    lams = [0.0, 0.5, 2.0, 8.0, 32.0]
    pds = [clairvoyant_pd(0.01, lam) for lam in lams]
    assert all(b > a for a, b in zip(pds, pds[1:]))
    assert pds[-1] > 0.99
    with pytest.raises(ValueError):
        clairvoyant_pd(0.0, 1.0)


def one_sensor_scene(tau=0.0, pe=0.0):
    return Scene(
        sensors=np.array([[0.5, 0.5], [0.1, 0.9]]),
        noise=NoiseModel("gaussian", 1.0),
        taus=tau,
        pes=pe,
        aaf_eta=0.2,
        aaf_alpha=4.0,
    )


def test_noncentrality_is_amplitude_scaled_information():
    scene = one_sensor_scene(tau=0.4, pe=0.1)
    pos = [0.3, 0.3]
    fi = fisher_information(0.0, pos, scene)
    assert abs(noncentrality(2.0, pos, scene) - 4.0 * fi) < 1e-12
    assert noncentrality(0.0, pos, scene) == 0.0


def test_noncentrality_zero_tau_form():
    scene = one_sensor_scene(pe=0.2)
    pos = [0.6, 0.4]
    a = noncentrality(1.7, pos, scene)
    b = noncentrality_optimized(1.7, pos, scene)
    assert abs(a - b) < 1e-12 * a
    with pytest.raises(ValueError, match="tau = 0"):
        noncentrality_optimized(1.0, pos, one_sensor_scene(tau=0.3))


def test_predict_bundle():
    scene = one_sensor_scene()
    out = predict(scene, [0.5, 0.5], 1.5, 0.05)
    assert out.pf == 0.05
    assert abs(out.noncentrality - noncentrality(1.5, [0.5, 0.5], scene)) < 1e-15
    assert abs(out.pd_predicted - clairvoyant_pd(0.05, out.noncentrality)) < 1e-15
    assert 0.05 < out.pd_predicted < 1.0
