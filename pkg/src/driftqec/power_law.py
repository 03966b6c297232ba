"""DFR -> LER power-law model: fitting, confidence intervals, prediction.

The logical error rate of a tile scales with its detector fire rate as
ler ~ A * dfr^b; both the fit and all predictions are carried out in
log10 space where the relation is linear.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from statistics import NormalDist

from .errors import NumericalError

# Smallest rate we ever report; avoids exact zeros from underflow.
_LER_FLOOR = 1e-300

_STANDARD_NORMAL = NormalDist()


@dataclass(frozen=True)
class PowerLawFit:
    """log10 ler = log_A + b * log10 dfr, with OLS standard errors."""

    d: int
    log_A: float
    b: float
    sigma_logA: float
    sigma_b: float
    n_samples: int
    residual_rms: float

    def __post_init__(self) -> None:
        if self.d < 3 or self.d % 2 == 0:
            raise ValueError(f"code distance must be an odd integer >= 3, got {self.d}")
        if self.sigma_logA < 0 or self.sigma_b < 0:
            raise ValueError("standard errors must be >= 0")
        if self.n_samples < 3:
            raise ValueError(f"fit requires at least 3 samples, got {self.n_samples}")

    @property
    def detectors_per_round(self) -> int:
        return self.d * self.d - 1

    def to_json(self) -> str:
        return json.dumps(
            {
                "d": self.d,
                "log_A": self.log_A,
                "b": self.b,
                "sigma_logA": self.sigma_logA,
                "sigma_b": self.sigma_b,
                "n_samples": self.n_samples,
                "residual_rms": self.residual_rms,
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "PowerLawFit":
        obj = json.loads(text)
        return cls(
            d=int(obj["d"]),
            log_A=float(obj["log_A"]),
            b=float(obj["b"]),
            sigma_logA=float(obj["sigma_logA"]),
            sigma_b=float(obj["sigma_b"]),
            n_samples=int(obj["n_samples"]),
            residual_rms=float(obj["residual_rms"]),
        )


@dataclass(frozen=True)
class PredictorConfig:
    """Tuning knobs for the sliding-window LER predictor."""

    k: int
    alpha: float
    multiplier: float
    target_ler: float

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"buffer capacity k must be >= 1, got {self.k}")
        if not 0 < self.alpha < 1:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if not -1 <= self.multiplier <= 1:
            raise ValueError(f"interval multiplier must be in [-1, 1], got {self.multiplier}")
        if not 0 < self.target_ler < 1:
            raise ValueError(f"target_ler must be in (0, 1), got {self.target_ler}")


@dataclass(frozen=True)
class Prediction:
    """Point estimate plus confidence bounds; `used` is the tuned estimate.

    `valid` is False while the estimate is uninformative (warm-up, or an
    all-zeros detector window); invalid predictions never raise breaches.
    """

    best: float
    low: float
    high: float
    used: float
    valid: bool


def fit_power_law(samples: list[tuple[float, float]], d: int) -> PowerLawFit:
    """Ordinary least squares on (log10 dfr, log10 ler).

    Samples with dfr <= 0 are excluded; the exclusion count is implicit in
    `n_samples`. Raises on fewer than 3 usable samples or a degenerate
    design (zero variance in log10 dfr).
    """
    usable = [(dfr, ler) for dfr, ler in samples if dfr > 0 and 0 < ler < 1]
    n = len(usable)
    if n < 3:
        raise ValueError(f"insufficient samples: need >= 3 with dfr > 0 and ler in (0,1), got {n}")

    xs = [math.log10(dfr) for dfr, _ in usable]
    ys = [math.log10(ler) for _, ler in usable]
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    if sxx == 0:
        raise NumericalError("degenerate design: zero variance in log10 dfr")
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))

    b = sxy / sxx
    log_A = mean_y - b * mean_x
    rss = sum((y - (log_A + b * x)) ** 2 for x, y in zip(xs, ys))
    # Unbiased residual variance; n == 3 leaves one degree of freedom.
    sigma2 = rss / (n - 2)
    sigma_b = math.sqrt(sigma2 / sxx)
    sigma_logA = math.sqrt(sigma2 * (1.0 / n + mean_x**2 / sxx))

    return PowerLawFit(
        d=d,
        log_A=log_A,
        b=b,
        sigma_logA=sigma_logA,
        sigma_b=sigma_b,
        n_samples=n,
        residual_rms=math.sqrt(rss / n),
    )


def z_from_alpha(alpha: float) -> float:
    """Two-sided z-score for confidence parameter alpha: Phi^-1(1 - alpha/2).

    Strictly decreasing in alpha; a lower alpha widens the interval.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    return _STANDARD_NORMAL.inv_cdf(1.0 - alpha / 2.0)


def interval_half_width(fit: PowerLawFit, log10_dfr: float, z: float) -> float:
    """Half-width of the log10-LER confidence interval at a given log10 DFR.

    Treats intercept and slope uncertainties as independent (the
    covariance cross-term is dropped, which is slightly conservative).
    """
    return z * math.sqrt(fit.sigma_logA**2 + log10_dfr**2 * fit.sigma_b**2)


def _clamp_rate(value: float) -> float:
    return min(1.0, max(_LER_FLOOR, value))


def predict_ler(fit: PowerLawFit, mean_dfr: float, config: PredictorConfig) -> Prediction:
    """Predict the LER for an observed mean DFR.

    best = 10^(log_A + b log10 dfr); low/high = best * 10^(-h) / 10^(+h)
    with h the z-scaled parameter uncertainty; used slides along the
    interval in log space: used = best * 10^(m*h), so m=+1 gives the
    conservative upper bound and m=-1 the lower one.

    A zero mean DFR (all detectors silent for the whole window) carries no
    information: the result is the smallest DFR resolvable by the window,
    1/(k*N), pushed through the fit, flagged invalid.
    """
    if not 0 <= mean_dfr <= 1:
        raise ValueError(f"mean_dfr must be in [0, 1], got {mean_dfr}")
    valid = True
    if mean_dfr == 0:
        mean_dfr = 1.0 / (config.k * fit.detectors_per_round)
        valid = False

    log_dfr = math.log10(mean_dfr)
    log_best = fit.log_A + fit.b * log_dfr
    h = interval_half_width(fit, log_dfr, z_from_alpha(config.alpha))
    best = _clamp_rate(10.0**log_best)
    low = _clamp_rate(10.0 ** (log_best - h))
    high = _clamp_rate(10.0 ** (log_best + h))
    used = _clamp_rate(10.0 ** (log_best + config.multiplier * h))
    return Prediction(best=best, low=low, high=high, used=used, valid=valid)


def invert_ler_to_dfr(fit: PowerLawFit, ler: float) -> float:
    """DFR at which the fitted relation yields `ler`, clamped to [0, 1]."""
    if not 0 < ler < 1:
        raise ValueError(f"ler must be in (0, 1), got {ler}")
    if fit.b == 0:
        raise ValueError("cannot invert a flat fit (b = 0)")
    dfr = 10.0 ** ((math.log10(ler) - fit.log_A) / fit.b)
    return min(1.0, max(0.0, dfr))
