"""Drift-aware surface-code QEC runtime simulator.

Predicts per-tile logical error rates in real time from detector fire
rate streams and drives a remap/recalibration scheduler over a grid of
surface-code tiles.
"""

__version__ = "0.1.0"

from .power_law import (  # noqa: E402
    PowerLawFit,
    Prediction,
    PredictorConfig,
    fit_power_law,
    invert_ler_to_dfr,
    predict_ler,
    z_from_alpha,
)
from .predictor import DfrBuffer, breach_gap, detect_breach, evaluate_l1, predict_tile  # noqa: E402
from .runtime import ExperimentConfig, run_memory_experiment  # noqa: E402
from .sampling import generate_fit_dataset, sample_code_capacity  # noqa: E402
from .surface import build_rotated_code, decode_min_weight  # noqa: E402

__all__ = [
    "DfrBuffer",
    "ExperimentConfig",
    "PowerLawFit",
    "Prediction",
    "PredictorConfig",
    "breach_gap",
    "build_rotated_code",
    "decode_min_weight",
    "detect_breach",
    "evaluate_l1",
    "fit_power_law",
    "generate_fit_dataset",
    "invert_ler_to_dfr",
    "predict_ler",
    "predict_tile",
    "run_memory_experiment",
    "sample_code_capacity",
    "z_from_alpha",
]
