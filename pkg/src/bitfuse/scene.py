"""Sensor-network scene: geometry, target signature, and bit reporting.

A scene owns the sensor positions, per-sensor noise models, quantizer
thresholds, and reporting-channel error rates. The generative chain for one
trial is measure -> quantize -> transmit: each sensor sees the target's
attenuated amplitude in additive noise, thresholds it to one bit, and ships
the bit through an independent binary symmetric channel.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .noise import NoiseModel, sample


@dataclass(frozen=True, eq=False)
class TargetState:
    """Amplitude and position of the (single) emitting target."""

    theta: float
    position: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "position", np.asarray(self.position, dtype=np.float64)
        )


@dataclass(frozen=True, eq=False)
class BitReport:
    """Received bit vector at the fusion center, one bit per sensor."""

    bits: np.ndarray

    def __post_init__(self):
        bits = np.asarray(self.bits, dtype=np.uint8)
        if bits.ndim != 1 or not np.isin(bits, (0, 1)).all():
            raise ValueError("bits must be a 1-D binary vector")
        object.__setattr__(self, "bits", bits)


@dataclass(frozen=True, eq=False)
class Scene:
    """Immutable description of the network and its sensing parameters.

    sensors: (K, d) positions inside the closed region.
    noise: one NoiseModel per sensor (a single model broadcasts).
    taus: per-sensor quantizer thresholds (scalar broadcasts).
    pes: per-sensor channel bit-error rates, each in [0, 1/2).
    aaf_eta: attenuation length scale (approximate target extent).
    aaf_alpha: attenuation decay exponent.
    region: ((lo_1..lo_d), (hi_1..hi_d)) axis-aligned box.
    """

    sensors: np.ndarray
    noise: tuple[NoiseModel, ...]
    taus: np.ndarray
    pes: np.ndarray
    aaf_eta: float
    aaf_alpha: float
    region: tuple[np.ndarray, np.ndarray] = field(
        default=(np.zeros(2), np.ones(2))
    )

    def __post_init__(self):
        sensors = np.atleast_2d(np.asarray(self.sensors, dtype=np.float64))
        k = len(sensors)
        if k < 1:
            raise ValueError("need at least one sensor")
        noise = self.noise
        if isinstance(noise, NoiseModel):
            noise = (noise,) * k
        noise = tuple(noise)
        if len(noise) != k:
            raise ValueError("need one noise model per sensor")
        taus = np.broadcast_to(
            np.asarray(self.taus, dtype=np.float64), (k,)
        ).copy()
        pes = np.broadcast_to(np.asarray(self.pes, dtype=np.float64), (k,)).copy()
        if ((pes < 0.0) | (pes >= 0.5)).any():
            # at pe = 1/2 the channel output carries no information and the
            # fusion statistics degenerate, so it is rejected outright
            raise ValueError("channel error rates must lie in [0, 1/2)")
        if not (self.aaf_eta > 0.0 and self.aaf_alpha > 0.0):
            raise ValueError("attenuation parameters must be positive")
        lo = np.asarray(self.region[0], dtype=np.float64)
        hi = np.asarray(self.region[1], dtype=np.float64)
        if lo.shape != hi.shape or (lo >= hi).any():
            raise ValueError("region must be a nondegenerate box")
        if ((sensors < lo) | (sensors > hi)).any():
            raise ValueError("sensors must lie inside the closed region")
        for arr in (sensors, taus, pes, lo, hi):
            arr.setflags(write=False)
        object.__setattr__(self, "sensors", sensors)
        object.__setattr__(self, "noise", noise)
        object.__setattr__(self, "taus", taus)
        object.__setattr__(self, "pes", pes)
        object.__setattr__(self, "region", (lo, hi))

    @property
    def k(self) -> int:
        return len(self.sensors)

    @property
    def shared_noise(self) -> NoiseModel | None:
        """The common model when all sensors share one, else None."""
        first = self.noise[0]
        return first if all(m == first for m in self.noise) else None

    def with_taus(self, taus) -> "Scene":
        return replace(self, taus=np.asarray(taus, dtype=np.float64))


def aaf(x_t, x_k, eta: float, alpha: float):
    """Amplitude attenuation gain in (0, 1] between target and sensor.

    Broadcasts over leading axes: the last axis of both arguments is the
    spatial dimension.
    """
    if not (eta > 0.0 and alpha > 0.0):
        raise ValueError("attenuation parameters must be positive")
    x_t = np.asarray(x_t, dtype=np.float64)
    x_k = np.asarray(x_k, dtype=np.float64)
    dist = np.linalg.norm(x_t - x_k, axis=-1)
    out = 1.0 / np.sqrt(1.0 + (dist / eta) ** alpha)
    return out if out.ndim else float(out)


def gain_vector(scene: Scene, position) -> np.ndarray:
    """Gains from one target position to every sensor, shape (K,)."""
    return aaf(
        np.asarray(position, dtype=np.float64)[None, :],
        scene.sensors,
        scene.aaf_eta,
        scene.aaf_alpha,
    )


def gain_matrix(scene: Scene, positions) -> np.ndarray:
    """Gains from many candidate positions to every sensor, shape (N, K)."""
    positions = np.atleast_2d(np.asarray(positions, dtype=np.float64))
    return aaf(
        positions[:, None, :],
        scene.sensors[None, :, :],
        scene.aaf_eta,
        scene.aaf_alpha,
    )


def generate_measurements(
    scene: Scene, target: TargetState | None, rng: np.random.Generator
) -> np.ndarray:
    """One vector of sensor observations; target None means noise only."""
    shared = scene.shared_noise
    if shared is not None:
        w = sample(shared, rng, scene.k)
    else:
        w = np.array([sample(m, rng) for m in scene.noise])
    if target is None or target.theta == 0.0:
        return w
    return target.theta * gain_vector(scene, target.position) + w


def quantize(y, taus) -> np.ndarray:
    """Threshold observations to bits; the tie y == tau maps to 1."""
    y = np.asarray(y, dtype=np.float64)
    taus = np.asarray(taus, dtype=np.float64)
    if taus.ndim and y.shape[-1] != taus.shape[-1]:
        raise ValueError("observation/threshold length mismatch")
    return (y >= taus).astype(np.uint8)


def transmit_bits(bits, pes, rng: np.random.Generator) -> np.ndarray:
    """Channel core of bsc_transmit, returning the raw bit array.

    Draws no randomness at all when every rate is zero, so noiseless-channel
    runs consume the same stream positions as their generative core.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    pes = np.broadcast_to(np.asarray(pes, dtype=np.float64), bits.shape)
    if ((pes < 0.0) | (pes >= 0.5)).any():
        raise ValueError("channel error rates must lie in [0, 1/2)")
    if pes.any():
        flips = rng.random(bits.shape) < pes
        bits = (bits ^ flips).astype(np.uint8)
    return bits


def bsc_transmit(bits, pes, rng: np.random.Generator) -> BitReport:
    """Flip each bit independently with its channel error rate."""
    return BitReport(transmit_bits(bits, pes, rng))


def generate_report(
    scene: Scene, target: TargetState | None, rng: np.random.Generator
) -> BitReport:
    """Full per-trial chain: measure, quantize, transmit."""
    y = generate_measurements(scene, target, rng)
    return bsc_transmit(quantize(y, scene.taus), scene.pes, rng)


def preset_grid_wsn(k_side: int, region, cell_centered: bool = False):
    """Regular k_side x k_side sensor grid over a 2-D box region.

    Default placement includes the boundary (corner sensors sit on the region
    corners); cell_centered=True instead centers sensors in the k_side^2
    equal cells.
    """
    if k_side < 2:
        raise ValueError("need at least a 2 x 2 grid")
    lo = np.asarray(region[0], dtype=np.float64)
    hi = np.asarray(region[1], dtype=np.float64)
    if lo.shape != (2,) or hi.shape != (2,):
        raise ValueError("preset grid is 2-D")
    if cell_centered:
        frac = (np.arange(k_side) + 0.5) / k_side
    else:
        frac = np.linspace(0.0, 1.0, k_side)
    xs = lo[0] + frac * (hi[0] - lo[0])
    ys = lo[1] + frac * (hi[1] - lo[1])
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    return np.column_stack([gx.ravel(), gy.ravel()])
