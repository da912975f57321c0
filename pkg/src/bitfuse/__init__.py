"""Decentralized detection from one-bit sensor reports.

A wireless sensor network watches a region for a target that emits an
isotropically attenuated signal of unknown amplitude and sign from an
unknown position.  Each sensor quantizes its noisy measurement to a
single bit and forwards it over a binary symmetric channel.  This
package provides the fusion statistics that decide target presence from
the received bits, the quantizer threshold design that maximizes
per-sensor information, asymptotic performance predictions, and a
reproducible Monte Carlo harness.
"""

from .asymptotics import (
    AsymptoticPrediction,
    chi2_cdf,
    chi2_quantile,
    clairvoyant_pd,
    noncentral_chi2_ccdf,
    noncentrality,
    noncentrality_optimized,
    predict,
)
from .fusion import (
    RULES,
    GLREvaluator,
    GRaoEvaluator,
    GRaoOptimizedEvaluator,
    GridSpec,
    StatisticResult,
    bit_probabilities,
    bit_probability,
    default_grids,
    fisher_information,
    glr_statistic,
    grao_statistic,
    grao_statistic_optimized,
    log_likelihood,
    make_evaluator,
    score,
)
from .montecarlo import (
    McConfig,
    McResult,
    amplitude_for_snr,
    calibrate_threshold,
    conservative_gamma,
    estimate_pd,
    heatmap_pd,
    roc,
    run_operating_point,
    sample_statistics,
    sweep_snr,
    sweep_tau,
    trial_generator,
    validate_calibration,
)
from .noise import FAMILIES, NoiseModel, ccdf, pdf, sample, unit_variance, variance
from .quantizer import (
    ThresholdDesign,
    bsc_penalty,
    optimize_threshold,
    threshold_objective,
)
from .scene import (
    BitReport,
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

__version__ = "0.1.0"

__all__ = [
    "AsymptoticPrediction",
    "BitReport",
    "FAMILIES",
    "GLREvaluator",
    "GRaoEvaluator",
    "GRaoOptimizedEvaluator",
    "GridSpec",
    "McConfig",
    "McResult",
    "NoiseModel",
    "RULES",
    "Scene",
    "StatisticResult",
    "TargetState",
    "ThresholdDesign",
    "aaf",
    "amplitude_for_snr",
    "bit_probabilities",
    "bit_probability",
    "bsc_penalty",
    "bsc_transmit",
    "calibrate_threshold",
    "ccdf",
    "chi2_cdf",
    "chi2_quantile",
    "clairvoyant_pd",
    "conservative_gamma",
    "default_grids",
    "estimate_pd",
    "fisher_information",
    "gain_matrix",
    "gain_vector",
    "generate_measurements",
    "generate_report",
    "glr_statistic",
    "grao_statistic",
    "grao_statistic_optimized",
    "heatmap_pd",
    "log_likelihood",
    "make_evaluator",
    "noncentral_chi2_ccdf",
    "noncentrality",
    "noncentrality_optimized",
    "optimize_threshold",
    "pdf",
    "predict",
    "preset_grid_wsn",
    "quantize",
    "roc",
    "run_operating_point",
    "sample",
    "sample_statistics",
    "score",
    "sweep_snr",
    "sweep_tau",
    "threshold_objective",
    "trial_generator",
    "unit_variance",
    "validate_calibration",
    "variance",
]
