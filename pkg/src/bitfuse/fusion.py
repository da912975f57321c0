"""Fusion-center decision statistics over received bit reports.

Two composite tests against the unknown (amplitude, position) pair:

* the generalized likelihood ratio, maximizing the exact bit log-likelihood
  over a joint amplitude/position grid, and
* the generalized score (Rao-type) statistic, which needs no amplitude
  estimate: the squared score at amplitude zero, normalized by the null
  Fisher information, maximized over the position grid only.

Per-trial work is a matrix product against precomputed tables, so the score
statistic costs O(K * N_positions) and the likelihood ratio costs
O(K * N_positions * N_thetas) per evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .noise import ccdf, pdf
from .scene import BitReport, Scene, gain_matrix, gain_vector

# probabilities are clamped away from {0, 1} before logs and divisions;
# reachable only with pe = 0 and extreme thresholds or amplitudes
ALPHA_CLAMP = 1e-12

# fixed evaluation block size: all matrix products see identical shapes no
# matter how trials are batched or distributed, which keeps BLAS results
# bit-identical across worker counts
CHUNK = 4096

RULES = ("glr", "grao", "grao_optimized", "clairvoyant")


@dataclass(frozen=True, eq=False)
class GridSpec:
    """Discretized search space: candidate positions and amplitudes."""

    positions: np.ndarray
    thetas: np.ndarray

    def __post_init__(self):
        positions = np.atleast_2d(np.asarray(self.positions, dtype=np.float64))
        thetas = np.asarray(self.thetas, dtype=np.float64).ravel()
        if len(positions) < 1:
            raise ValueError("need at least one candidate position")
        if np.count_nonzero(thetas == 0.0) != 1:
            raise ValueError("amplitude grid must contain 0 exactly once")
        positions.setflags(write=False)
        thetas.setflags(write=False)
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "thetas", thetas)

    @property
    def n_positions(self) -> int:
        return len(self.positions)

    @property
    def n_thetas(self) -> int:
        return len(self.thetas)


@dataclass(frozen=True, eq=False)
class StatisticResult:
    """A maximized statistic value with its grid argmax indices."""

    value: float
    argmax_position: int
    argmax_theta: int | None = None


def default_grids(region, nc: int, snr_db_range, noise_std: float = 1.0) -> GridSpec:
    """Standard search grid: nc x nc cell centers and symmetric amplitudes.

    Amplitudes are +/- noise_std * 10^(snr/20) for each SNR in the range,
    plus the mandatory 0, ordered ascending.
    """
    if nc < 1:
        raise ValueError("need at least one grid cell per side")
    lo = np.asarray(region[0], dtype=np.float64)
    hi = np.asarray(region[1], dtype=np.float64)
    frac = (np.arange(nc) + 0.5) / nc
    xs = lo[0] + frac * (hi[0] - lo[0])
    ys = lo[1] + frac * (hi[1] - lo[1])
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    positions = np.column_stack([gx.ravel(), gy.ravel()])
    snrs = np.asarray(list(snr_db_range), dtype=np.float64)
    if snrs.size == 0:
        raise ValueError("need at least one SNR level")
    amps = np.sort(noise_std * 10.0 ** (snrs / 20.0))
    thetas = np.concatenate([-amps[::-1], [0.0], amps])
    return GridSpec(positions, thetas)


def _as_bits(report) -> np.ndarray:
    bits = report.bits if isinstance(report, BitReport) else report
    return np.asarray(bits, dtype=np.float64)


def _clamp(p):
    return np.clip(p, ALPHA_CLAMP, 1.0 - ALPHA_CLAMP)


def bit_probability(scene: Scene, k: int, theta: float, position) -> float:
    """Pr{received bit k = 1} for a target of the given amplitude/position."""
    g = gain_vector(scene, position)[k]
    beta = ccdf(scene.noise[k], scene.taus[k] - theta * g)
    pe = scene.pes[k]
    return float(pe + (1.0 - 2.0 * pe) * beta)


def bit_probabilities(scene: Scene, theta: float, position) -> np.ndarray:
    """Vector of Pr{received bit = 1} across sensors, shape (K,)."""
    g = gain_vector(scene, position)
    beta = np.array(
        [
            ccdf(m, t - theta * gk)
            for m, t, gk in zip(scene.noise, scene.taus, g)
        ]
    )
    return scene.pes + (1.0 - 2.0 * scene.pes) * beta


def _bit_probability_table(scene: Scene, theta: float, gains: np.ndarray):
    """Pr{bit k = 1} for every row of a (N, K) gain table."""
    out = np.empty_like(gains)
    for k, model in enumerate(scene.noise):
        beta = ccdf(model, scene.taus[k] - theta * gains[:, k])
        out[:, k] = scene.pes[k] + (1.0 - 2.0 * scene.pes[k]) * beta
    return out


def log_likelihood(report, theta: float, position, scene: Scene) -> float:
    """Exact log-pmf of the received bits under the given target state."""
    bits = _as_bits(report)
    a = _clamp(bit_probabilities(scene, theta, position))
    return float(np.sum(bits * np.log(a) + (1.0 - bits) * np.log1p(-a)))


def _null_stats(scene: Scene):
    """Per-sensor quantities at amplitude zero: (a0, score coef, psi0).

    a0 is the null bit probability; coef maps a received bit to its score
    contribution (before the gain weight); psi0 is the per-sensor information
    density, so the Fisher information at a position is sum(psi0 * g^2).
    """
    fade = 1.0 - 2.0 * scene.pes
    p_tau = np.array([pdf(m, t) for m, t in zip(scene.noise, scene.taus)])
    beta0 = np.array([ccdf(m, t) for m, t in zip(scene.noise, scene.taus)])
    a0 = _clamp(scene.pes + fade * beta0)
    var0 = a0 * (1.0 - a0)
    coef = fade * p_tau / var0
    psi0 = fade**2 * p_tau**2 / var0
    return a0, coef, psi0


def score(report, position, scene: Scene) -> float:
    """Derivative of the log-likelihood in amplitude, at amplitude zero."""
    bits = _as_bits(report)
    a0, coef, _ = _null_stats(scene)
    g = gain_vector(scene, position)
    return float(np.sum(coef * (bits - a0) * g))


def fisher_information(theta: float, position, scene: Scene) -> float:
    """Information about the amplitude at a known position."""
    g = gain_vector(scene, position)
    fade = 1.0 - 2.0 * scene.pes
    shifted = scene.taus - theta * g
    p = np.array([pdf(m, x) for m, x in zip(scene.noise, shifted)])
    beta = np.array([ccdf(m, x) for m, x in zip(scene.noise, shifted)])
    a = _clamp(scene.pes + fade * beta)
    psi = fade**2 * p**2 / (a * (1.0 - a))
    return float(np.sum(psi * g**2))


class GRaoEvaluator:
    """Score statistic maximized over the position grid.

    Tables (gains, null coefficients, per-position information) are built
    once; each evaluation is one (trials, K) x (K, N) product, a square, and
    a row max.
    """

    def __init__(self, scene: Scene, grid: GridSpec):
        self.scene = scene
        self.grid = grid
        self.a0, self.coef, psi0 = _null_stats(scene)
        g = gain_matrix(scene, grid.positions)
        self.gains_t = np.ascontiguousarray(g.T)  # (K, N)
        self.den = (g * g) @ psi0  # (N,)
        self.valid = self.den > 0.0
        if not self.valid.any():
            raise ValueError("every grid position has zero information")

    def values(self, bits) -> np.ndarray:
        """Statistic value per row of a (trials, K) bit matrix."""
        bits = np.atleast_2d(np.asarray(bits, dtype=np.float64))
        out = np.empty(len(bits))
        for s in range(0, len(bits), CHUNK):
            block = bits[s : s + CHUNK]
            lam = self._position_values(block)
            out[s : s + CHUNK] = lam.max(axis=1)
        return out

    def _position_values(self, block) -> np.ndarray:
        nu = (block - self.a0) * self.coef
        num = nu @ self.gains_t
        num *= num
        lam = np.full(num.shape, -np.inf)
        np.divide(num, self.den, out=lam, where=self.valid)
        return lam

    def result(self, report) -> StatisticResult:
        bits = _as_bits(report).reshape(1, -1)
        lam = self._position_values(bits)[0]
        idx = int(np.argmax(lam))
        return StatisticResult(float(lam[idx]), idx)


class GRaoOptimizedEvaluator:
    """Zero-threshold form of the score statistic.

    Valid only when every sensor quantizes at zero; algebraically identical
    to the generic evaluator there, but computed through the specialized
    expression 4 * (sum c_k g (b - 1/2))^2 / sum c_k^2 g^2 with
    c_k = (1 - 2 pe_k) * pdf_k(0).
    """

    def __init__(self, scene: Scene, grid: GridSpec):
        if np.any(scene.taus != 0.0):
            raise ValueError("optimized form requires tau = 0")
        self.scene = scene
        self.grid = grid
        c = (1.0 - 2.0 * scene.pes) * np.array(
            [pdf(m, 0.0) for m in scene.noise]
        )
        self.c = c
        g = gain_matrix(scene, grid.positions)
        self.gains_t = np.ascontiguousarray(g.T)
        self.den = (g * g) @ (c * c)
        self.valid = self.den > 0.0
        if not self.valid.any():
            raise ValueError("every grid position has zero information")

    def _position_values(self, block) -> np.ndarray:
        centered = (block - 0.5) * self.c
        num = centered @ self.gains_t
        num *= num
        num *= 4.0
        lam = np.full(num.shape, -np.inf)
        np.divide(num, self.den, out=lam, where=self.valid)
        return lam

    values = GRaoEvaluator.values
    result = GRaoEvaluator.result


class GLREvaluator:
    """Likelihood-ratio statistic maximized over positions and amplitudes.

    One (K, N) log-odds table per candidate amplitude; each evaluation runs
    N_thetas matrix products with a running max, then subtracts the null
    log-likelihood.
    """

    def __init__(self, scene: Scene, grid: GridSpec):
        self.scene = scene
        self.grid = grid
        g = gain_matrix(scene, grid.positions)
        self.tables = []
        self.consts = []
        for theta in grid.thetas:
            a = _clamp(_bit_probability_table(scene, theta, g))
            log_a, log_na = np.log(a), np.log1p(-a)
            self.tables.append(np.ascontiguousarray((log_a - log_na).T))
            self.consts.append(log_na.sum(axis=1))
        a0 = _clamp(_bit_probability_table(scene, 0.0, g[:1]))[0]
        self.w0 = np.log(a0) - np.log1p(-a0)
        self.c0 = float(np.log1p(-a0).sum())

    def values(self, bits) -> np.ndarray:
        bits = np.atleast_2d(np.asarray(bits, dtype=np.float64))
        out = np.empty(len(bits))
        for s in range(0, len(bits), CHUNK):
            block = bits[s : s + CHUNK]
            best = np.full(len(block), -np.inf)
            for table, const in zip(self.tables, self.consts):
                ll = block @ table
                ll += const
                np.maximum(best, ll.max(axis=1), out=best)
            null = block @ self.w0 + self.c0
            # the amplitude grid contains 0, so best >= null up to BLAS
            # roundoff (the null term goes through a different kernel)
            out[s : s + CHUNK] = np.maximum(2.0 * (best - null), 0.0)
        return out

    def result(self, report) -> StatisticResult:
        bits = _as_bits(report).reshape(1, -1)
        cols = [
            (bits @ table)[0] + const
            for table, const in zip(self.tables, self.consts)
        ]
        ll = np.column_stack(cols)  # (N positions, N thetas)
        flat = int(np.argmax(ll))
        i, j = divmod(flat, self.grid.n_thetas)
        null = float(bits[0] @ self.w0 + self.c0)
        value = max(2.0 * (float(ll.flat[flat]) - null), 0.0)
        return StatisticResult(value, i, j)


def make_evaluator(rule: str, scene: Scene, grid: GridSpec):
    """Build the batched evaluator for a named decision rule."""
    if rule == "glr":
        return GLREvaluator(scene, grid)
    if rule == "grao":
        return GRaoEvaluator(scene, grid)
    if rule == "grao_optimized":
        return GRaoOptimizedEvaluator(scene, grid)
    if rule == "clairvoyant":
        if grid.n_positions != 1:
            raise ValueError("clairvoyant rule needs a single known position")
        return GRaoEvaluator(scene, grid)
    raise ValueError(f"unknown rule {rule!r}")


def grao_statistic(report, scene: Scene, grid: GridSpec) -> StatisticResult:
    """Maximized score statistic for one report."""
    return GRaoEvaluator(scene, grid).result(report)


def grao_statistic_optimized(report, scene: Scene, grid: GridSpec) -> StatisticResult:
    """Zero-threshold maximized score statistic for one report."""
    return GRaoOptimizedEvaluator(scene, grid).result(report)


def glr_statistic(report, scene: Scene, grid: GridSpec) -> StatisticResult:
    """Maximized likelihood-ratio statistic for one report."""
    return GLREvaluator(scene, grid).result(report)
