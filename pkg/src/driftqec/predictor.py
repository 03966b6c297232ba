"""Per-tile sliding-window DFR state and real-time LER prediction.

Within a cycle the prediction is formed from the buffer *before* that
cycle's DFR sample is pushed: the sample only exists once the cycle's
rounds have completed. After any reset this makes exactly the first k
cycles invalid (warm-up) and cycle k+1 the first valid one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .power_law import Prediction, PowerLawFit, PredictorConfig, predict_ler, z_from_alpha


class DfrBuffer:
    """Ring buffer of the k most recent per-cycle DFR values of one tile."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError(f"buffer capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._entries: list[float] = []
        self._next = 0

    @property
    def count(self) -> int:
        return len(self._entries)

    @property
    def saturated(self) -> bool:
        return len(self._entries) == self.capacity

    def push(self, dfr: float) -> None:
        """Append a sample, evicting the oldest once the buffer is full."""
        if not 0 <= dfr <= 1:
            raise ValueError(f"dfr must be in [0, 1], got {dfr}")
        if len(self._entries) < self.capacity:
            self._entries.append(dfr)
        else:
            self._entries[self._next] = dfr
            self._next = (self._next + 1) % self.capacity

    def mean(self) -> float:
        if not self._entries:
            raise ValueError("cannot take the mean of an empty buffer")
        return sum(self._entries) / len(self._entries)

    def values(self) -> list[float]:
        """Held entries, oldest first."""
        return self._entries[self._next:] + self._entries[: self._next]

    def clear(self) -> None:
        self._entries = []
        self._next = 0


def predict_tile(buffer: DfrBuffer, fit: PowerLawFit, config: PredictorConfig) -> Prediction:
    """Predict a tile's LER; invalid until the buffer has saturated.

    Unsaturated buffers still report the partial-mean estimate (useful for
    warm-up logging) but flag it invalid, so it can never raise a breach.
    """
    if buffer.saturated:
        return predict_ler(fit, buffer.mean(), config)
    mean = buffer.mean() if buffer.count else 0.0
    inner = predict_ler(fit, mean, config)
    return Prediction(best=inner.best, low=inner.low, high=inner.high,
                      used=inner.used, valid=False)


def detect_breach(prediction: Prediction, target_ler: float) -> bool:
    """True iff a valid prediction strictly exceeds the target LER."""
    return prediction.valid and prediction.used > target_ler


@dataclass(frozen=True)
class PredictionSeries:
    """Per-cycle predictions for one tile over a run."""

    mean_dfr: np.ndarray = field(repr=False)
    best: np.ndarray = field(repr=False)
    low: np.ndarray = field(repr=False)
    high: np.ndarray = field(repr=False)
    used: np.ndarray = field(repr=False)
    valid: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return self.mean_dfr.size


def draw_observed_dfr_series(
    true_dfr: np.ndarray, bits_per_cycle: int, rng: np.random.Generator
) -> np.ndarray:
    """Empirical fired fraction per cycle: Binomial(bits, dfr)/bits."""
    true_dfr = np.asarray(true_dfr, dtype=float)
    if np.any((true_dfr < 0) | (true_dfr > 1)):
        raise ValueError("true DFR values must be in [0, 1]")
    return rng.binomial(bits_per_cycle, true_dfr) / bits_per_cycle


def predict_series(
    observed_dfr: np.ndarray, fit: PowerLawFit, config: PredictorConfig
) -> PredictionSeries:
    """Rolling-window predictions over a per-cycle observed DFR series.

    Equivalent to pushing the series through a DfrBuffer of capacity k and
    calling predict_tile each cycle before the push, but vectorized: the
    prediction at cycle t uses the mean of observations t-k .. t-1.
    """
    observed = np.asarray(observed_dfr, dtype=float)
    n = observed.size
    k = config.k
    cumulative = np.concatenate([[0.0], np.cumsum(observed)])

    mean = np.zeros(n)
    valid = np.zeros(n, dtype=bool)
    if n > k:
        mean[k:] = (cumulative[k:-1] - cumulative[:-k-1]) / k
        valid[k:] = True
    # Warm-up cycles estimate from the partial window for logging parity
    # with predict_tile; they stay invalid either way.
    partial = np.arange(1, min(k, n))
    if partial.size:
        mean[partial] = cumulative[partial] / partial

    silent = valid & (mean == 0)
    floor_dfr = 1.0 / (k * fit.detectors_per_round)
    query = np.where(mean > 0, mean, floor_dfr)
    valid = valid & ~silent

    log_dfr = np.log10(query)
    log_best = fit.log_A + fit.b * log_dfr
    h = z_from_alpha(config.alpha) * np.sqrt(
        fit.sigma_logA**2 + log_dfr**2 * fit.sigma_b**2
    )

    def rate(exponent: np.ndarray) -> np.ndarray:
        return np.clip(10.0**exponent, 1e-300, 1.0)

    return PredictionSeries(
        mean_dfr=mean,
        best=rate(log_best),
        low=rate(log_best - h),
        high=rate(log_best + h),
        used=rate(log_best + config.multiplier * h),
        valid=valid,
    )


def evaluate_l1(true_ler: np.ndarray, series: PredictionSeries) -> float:
    """Mean absolute error |used - true| over valid-prediction cycles."""
    true_ler = np.asarray(true_ler, dtype=float)
    if true_ler.shape != series.used.shape:
        raise ValueError("prediction series must align with the true trace cycles")
    if not series.valid.any():
        raise ValueError("no valid prediction cycles to evaluate")
    return float(np.mean(np.abs(series.used[series.valid] - true_ler[series.valid])))


@dataclass(frozen=True)
class BreachReport:
    """First threshold crossings of the true and predicted LER series."""

    predicted_breach_cycle: int | None
    true_breach_cycle: int | None
    gap: int | None
    zealous: bool


def _first_exceeding(values: np.ndarray, mask: np.ndarray, threshold: float) -> int | None:
    hits = np.flatnonzero(mask & (values > threshold))
    return int(hits[0]) if hits.size else None


def breach_gap(
    true_ler: np.ndarray, series: PredictionSeries, target_ler: float
) -> BreachReport:
    """Cycle gap between the true breach and the predicted breach.

    Positive gaps mean the predictor fired early (zealous); the gap is
    undefined unless both series breach.
    """
    true_ler = np.asarray(true_ler, dtype=float)
    if true_ler.shape != series.used.shape:
        raise ValueError("prediction series must align with the true trace cycles")
    predicted = _first_exceeding(series.used, series.valid, target_ler)
    true_cycle = _first_exceeding(true_ler, np.ones(true_ler.size, dtype=bool), target_ler)
    gap = None
    if predicted is not None and true_cycle is not None:
        gap = true_cycle - predicted
    return BreachReport(
        predicted_breach_cycle=predicted,
        true_breach_cycle=true_cycle,
        gap=gap,
        zealous=bool(gap is not None and gap > 0),
    )


def prediction_log_lines(
    series: PredictionSeries, target_ler: float, tile: int = 0
) -> list[str]:
    """Per-cycle prediction log: cycle,tile,mean_dfr,best,low,high,used,valid,breach."""
    lines = ["cycle,tile,mean_dfr,best,low,high,used,valid,breach"]
    breach = series.valid & (series.used > target_ler)
    for t in range(len(series)):
        lines.append(
            f"{t},{tile},{series.mean_dfr[t]!r},{series.best[t]!r},{series.low[t]!r},"
            f"{series.high[t]!r},{series.used[t]!r},{int(series.valid[t])},{int(breach[t])}"
        )
    return lines
