"""Geometry, measurement generation, quantization, and the bit channel."""

import math

import numpy as np
import pytest

from bitfuse import (
    BitReport,
    NoiseModel,
    Scene,
    TargetState,
    aaf,
    bsc_transmit,
    gain_matrix,
    gain_vector,
    generate_measurements,
    generate_report,
    preset_grid_wsn,
    quantize,
)
from bitfuse.scene import transmit_bits

ETA, ALPHA = 0.2, 4.0


def small_scene(taus=0.0, pes=0.0, k_side=3):
    sensors = preset_grid_wsn(k_side, (np.zeros(2), np.ones(2)))
    return Scene(
        sensors=sensors,
        noise=NoiseModel("gaussian", 1.0),
        taus=taus,
        pes=pes,
        aaf_eta=ETA,
        aaf_alpha=ALPHA,
    )


def test_aaf_known_values():
    # distance 0 gives unit gain; at distance eta the gain is 1/sqrt(2);
    # at 2*eta with exponent 4 it is 1/sqrt(1+16)
    assert aaf([0.3, 0.4], [0.3, 0.4], ETA, ALPHA) == 1.0
    assert abs(aaf([0.0, 0.0], [0.2, 0.0], ETA, ALPHA) - 1 / math.sqrt(2)) < 1e-15
    assert abs(aaf([0.0, 0.0], [0.0, 0.4], ETA, ALPHA) - 1 / math.sqrt(17)) < 1e-15


def test_aaf_monotone_in_distance():
    d = np.linspace(0.0, 3.0, 40)
    pts = np.column_stack([d, np.zeros_like(d)])
    g = aaf(np.zeros(2), pts, ETA, ALPHA)
    assert g[0] == 1.0
    assert (np.diff(g) < 0).all()


def test_aaf_validates_parameters():
    with pytest.raises(ValueError):
        aaf([0, 0], [1, 1], 0.0, 4.0)
    with pytest.raises(ValueError):
        aaf([0, 0], [1, 1], 0.2, -1.0)


def test_gain_vector_matches_matrix():
    scene = small_scene()
    positions = np.array([[0.1, 0.9], [0.5, 0.5], [0.7, 0.2]])
    mat = gain_matrix(scene, positions)
    assert mat.shape == (3, scene.k)
    for i, pos in enumerate(positions):
        np.testing.assert_array_equal(mat[i], gain_vector(scene, pos))
    assert (mat > 0).all() and (mat <= 1).all()


def test_quantize_tie_goes_to_one():
    bits = quantize(np.array([-0.5, 0.0, 0.5]), 0.0)
    np.testing.assert_array_equal(bits, [0, 1, 1])
    assert bits.dtype == np.uint8


def test_quantize_vector_thresholds():
    y = np.array([0.2, 0.2, 0.2])
    np.testing.assert_array_equal(quantize(y, np.array([0.0, 0.2, 0.5])), [1, 1, 0])
    with pytest.raises(ValueError, match="mismatch"):
        quantize(y, np.array([0.0, 0.2]))


def test_quantize_batched_rows():
    y = np.array([[0.5, -0.5], [-0.5, 0.5]])
    np.testing.assert_array_equal(quantize(y, np.zeros(2)), [[1, 0], [0, 1]])


def test_clean_channel_consumes_no_randomness():
    bits = np.array([1, 0, 1, 1], dtype=np.uint8)
    rng = np.random.default_rng(123)
    out = transmit_bits(bits, 0.0, rng)
    np.testing.assert_array_equal(out, bits)
    # the generator must be in its initial state still
    assert rng.random() == np.random.default_rng(123).random()


def test_channel_flip_rate():
    rng = np.random.default_rng(5)
    n = 40_000
    sent = np.zeros(n, dtype=np.uint8)
    got = transmit_bits(sent, 0.3, rng)
    rate = got.mean()
    assert abs(rate - 0.3) < 4 * math.sqrt(0.3 * 0.7 / n)


def test_channel_validates_rate():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        transmit_bits(np.array([1, 0], dtype=np.uint8), 0.5, rng)
    report = bsc_transmit(np.array([1, 0], dtype=np.uint8), 0.0, rng)
    assert isinstance(report, BitReport)


def test_bit_report_validation():
    with pytest.raises(ValueError):
        BitReport(np.array([[1, 0]]))
    with pytest.raises(ValueError):
        BitReport(np.array([0, 2]))
    np.testing.assert_array_equal(BitReport([1, 0, 1]).bits, [1, 0, 1])


def test_scene_broadcasts_and_freezes():
    scene = small_scene(taus=0.3, pes=0.1)
    assert scene.k == 9
    np.testing.assert_array_equal(scene.taus, np.full(9, 0.3))
    np.testing.assert_array_equal(scene.pes, np.full(9, 0.1))
    assert len(scene.noise) == 9
    assert scene.shared_noise == NoiseModel("gaussian", 1.0)
    with pytest.raises(ValueError):
        scene.taus[0] = 1.0
    shifted = scene.with_taus(np.zeros(9))
    assert (shifted.taus == 0).all() and (scene.taus == 0.3).all()


def test_scene_mixed_noise_has_no_shared_model():
    sensors = np.array([[0.2, 0.2], [0.8, 0.8]])
    scene = Scene(
        sensors=sensors,
        noise=(NoiseModel("gaussian", 1.0), NoiseModel("laplace", 1.0)),
        taus=0.0,
        pes=0.0,
        aaf_eta=ETA,
        aaf_alpha=ALPHA,
    )
    assert scene.shared_noise is None


def test_scene_validation():
    sensors = np.array([[0.5, 0.5]])
    ok = dict(noise=NoiseModel("gaussian", 1.0), taus=0.0, pes=0.0,
              aaf_eta=ETA, aaf_alpha=ALPHA)
    with pytest.raises(ValueError, match="1/2"):
        Scene(sensors=sensors, **{**ok, "pes": 0.5})
    with pytest.raises(ValueError, match="inside"):
        Scene(sensors=np.array([[1.5, 0.5]]), **ok)
    with pytest.raises(ValueError, match="positive"):
        Scene(sensors=sensors, **{**ok, "aaf_eta": 0.0})
    with pytest.raises(ValueError, match="per sensor"):
        Scene(sensors=sensors, **{**ok, "noise": (NoiseModel("gaussian", 1.0),) * 2})
    with pytest.raises(ValueError, match="box"):
        Scene(sensors=sensors, region=(np.ones(2), np.zeros(2)), **ok)


def test_measurements_signal_plus_noise():
    scene = small_scene()
    target = TargetState(2.0, np.array([0.4, 0.6]))
    noise_only = generate_measurements(scene, None, np.random.default_rng(9))
    with_signal = generate_measurements(scene, target, np.random.default_rng(9))
    np.testing.assert_allclose(
        with_signal - noise_only, 2.0 * gain_vector(scene, target.position),
        atol=1e-15,
    )


def test_zero_amplitude_is_noise_only():
    scene = small_scene()
    a = generate_measurements(scene, None, np.random.default_rng(4))
    b = generate_measurements(
        scene, TargetState(0.0, np.array([0.5, 0.5])), np.random.default_rng(4)
    )
    np.testing.assert_array_equal(a, b)


def test_generate_report_shape():
    scene = small_scene(pes=0.2)
    report = generate_report(
        scene, TargetState(1.0, np.array([0.5, 0.5])), np.random.default_rng(2)
    )
    assert report.bits.shape == (scene.k,)
    assert set(np.unique(report.bits)) <= {0, 1}


def test_preset_grid_boundary_inclusive():
    grid = preset_grid_wsn(7, (np.zeros(2), np.ones(2)))
    assert grid.shape == (49, 2)
    # corners sit exactly on the region corners, spacing 1/6
    assert [0.0, 0.0] in grid.tolist() and [1.0, 1.0] in grid.tolist()
    xs = np.unique(grid[:, 0])
    np.testing.assert_allclose(np.diff(xs), 1.0 / 6.0, rtol=1e-15)


def test_preset_grid_cell_centered():
    grid = preset_grid_wsn(2, (np.zeros(2), np.ones(2)), cell_centered=True)
    expect = {(0.25, 0.25), (0.25, 0.75), (0.75, 0.25), (0.75, 0.75)}
    assert {tuple(row) for row in grid} == expect


def test_preset_grid_validation():
    with pytest.raises(ValueError):
        preset_grid_wsn(1, (np.zeros(2), np.ones(2)))
    with pytest.raises(ValueError):
        preset_grid_wsn(3, (np.zeros(3), np.ones(3)))
