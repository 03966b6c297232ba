"""Parameter sweeps over the predictor: buffer size, confidence, multiplier.

Each seed draws one observed per-cycle DFR series from the trace's ground
truth; every axis value is then evaluated on that same series, so sweep
comparisons are paired (a larger buffer sees exactly the observations a
smaller one did).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .drift import drift_cycle_ler_cycles, exponential_ler_cycles
from .errors import ConfigError
from .power_law import PowerLawFit, PredictorConfig
from .predictor import breach_gap, draw_observed_dfr_series, evaluate_l1, predict_series

SWEEP_AXES = ("buffer_k", "alpha", "multiplier")


def build_true_ler_cycles(trace: dict, total_cycles: int) -> np.ndarray:
    """Dense per-cycle ground-truth LER for a sweep trace spec."""
    spec = dict(trace)
    kind = spec.pop("kind", None)
    try:
        if kind == "static":
            level = float(spec["ler"])
            if not 0 < level < 1:
                raise ConfigError(f"static trace needs ler in (0, 1), got {level}")
            return np.full(total_cycles, level)
        if kind == "exponential":
            return exponential_ler_cycles(
                p0=float(spec["p0"]),
                tau_cycles=float(spec["tau_cycles"]),
                length=total_cycles,
                clamp=float(spec.get("clamp", 0.5)),
            )
        if kind == "drift_cycle":
            return drift_cycle_ler_cycles(
                log10_mid=float(spec["log10_mid"]),
                amplitude_decades=float(spec["amplitude_decades"]),
                period_cycles=float(spec["period_cycles"]),
                length=total_cycles,
            )
        if kind == "burst_step":
            base = float(spec["base_ler"])
            burst = float(spec["burst_ler"])
            at = int(spec["burst_cycle"])
            if not 0 < base < burst < 1 or not 0 <= at < total_cycles:
                raise ConfigError("burst_step needs 0 < base_ler < burst_ler < 1 "
                                  "and burst_cycle within the run")
            out = np.full(total_cycles, base)
            out[at:] = burst
            return out
    except KeyError as exc:
        raise ConfigError(f"sweep trace missing field {exc}") from exc
    raise ConfigError(f"unknown sweep trace kind {kind!r}")


def true_dfr_from_ler(fit: PowerLawFit, ler: np.ndarray) -> np.ndarray:
    """Invert the fitted power law per cycle, clamped to [0, 1]."""
    log_dfr = (np.log10(ler) - fit.log_A) / fit.b
    return np.clip(10.0**log_dfr, 0.0, 1.0)


@dataclass(frozen=True)
class SweepConfig:
    fit: PowerLawFit
    d: int
    trace: dict
    predictor: PredictorConfig
    total_cycles: int
    n_seeds: int
    seed: int

    @property
    def bits_per_cycle(self) -> int:
        return self.d * (self.d**2 - 1)


@dataclass(frozen=True)
class SweepResult:
    """Per-(value, seed) metrics for one axis sweep."""

    axis: str
    values: tuple[float, ...]
    l1: np.ndarray = field(repr=False)  # float64[n_values, n_seeds]
    gap: np.ndarray = field(repr=False)  # float64[n_values, n_seeds]; NaN if undefined
    predicted_breach: np.ndarray = field(repr=False)  # float64, NaN if none
    true_breach: np.ndarray = field(repr=False)

    def csv_lines(self) -> list[str]:
        lines = ["axis,value,seeds,mean_l1,mean_gap,zealous_fraction,breach_fraction"]
        for i, value in enumerate(self.values):
            gaps = self.gap[i]
            defined = ~np.isnan(gaps)
            mean_gap = float(np.mean(gaps[defined])) if defined.any() else float("nan")
            zealous = float(np.mean(gaps[defined] > 0)) if defined.any() else float("nan")
            breach_frac = float(np.mean(~np.isnan(self.predicted_breach[i])))
            lines.append(
                f"{self.axis},{value!r},{self.gap.shape[1]},{float(np.mean(self.l1[i]))!r},"
                f"{mean_gap!r},{zealous!r},{breach_frac!r}"
            )
        return lines


def _vary(config: SweepConfig, axis: str, value: float) -> PredictorConfig:
    base = config.predictor
    if axis == "buffer_k":
        return replace(base, k=int(value))
    if axis == "alpha":
        return replace(base, alpha=float(value))
    if axis == "multiplier":
        return replace(base, multiplier=float(value))
    raise ConfigError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")


def run_sweep(config: SweepConfig, axis: str, values: list[float]) -> SweepResult:
    """Evaluate L1 and breach-gap metrics across axis values and seeds."""
    if len(values) < 2:
        raise ConfigError("a sweep needs at least 2 axis values")
    if config.n_seeds < 1:
        raise ConfigError("n_seeds must be >= 1")
    variants = [_vary(config, axis, v) for v in values]
    if axis == "buffer_k" and max(v.k for v in variants) >= config.total_cycles:
        raise ConfigError("total_cycles shorter than warm-up for the largest buffer")

    true_ler = build_true_ler_cycles(config.trace, config.total_cycles)
    true_dfr = true_dfr_from_ler(config.fit, true_ler)

    n_values, n_seeds = len(values), config.n_seeds
    l1 = np.zeros((n_values, n_seeds))
    gap = np.full((n_values, n_seeds), np.nan)
    predicted = np.full((n_values, n_seeds), np.nan)
    true_b = np.full((n_values, n_seeds), np.nan)

    seed_roots = np.random.SeedSequence(config.seed).spawn(n_seeds)
    for s, root in enumerate(seed_roots):
        rng = np.random.default_rng(root)
        observed = draw_observed_dfr_series(true_dfr, config.bits_per_cycle, rng)
        for i, variant in enumerate(variants):
            series = predict_series(observed, config.fit, variant)
            l1[i, s] = evaluate_l1(true_ler, series)
            report = breach_gap(true_ler, series, variant.target_ler)
            if report.predicted_breach_cycle is not None:
                predicted[i, s] = report.predicted_breach_cycle
            if report.true_breach_cycle is not None:
                true_b[i, s] = report.true_breach_cycle
            if report.gap is not None:
                gap[i, s] = report.gap
    return SweepResult(
        axis=axis,
        values=tuple(float(v) for v in values),
        l1=l1,
        gap=gap,
        predicted_breach=predicted,
        true_breach=true_b,
    )


def time_to_breach(
    config: SweepConfig, burst_cycle: int, k_values: list[int]
) -> np.ndarray:
    """Cycles from a burst onset to the first breach at or after it.

    Breaches before the onset are small-buffer false alarms, not burst
    responses, so they are ignored here (the sweep CSV's breach_fraction
    still exposes them). NaN when a buffer never responds within the run.
    """
    true_ler = build_true_ler_cycles(config.trace, config.total_cycles)
    true_dfr = true_dfr_from_ler(config.fit, true_ler)
    out = np.full((len(k_values), config.n_seeds), np.nan)
    seed_roots = np.random.SeedSequence(config.seed).spawn(config.n_seeds)
    for s, root in enumerate(seed_roots):
        rng = np.random.default_rng(root)
        observed = draw_observed_dfr_series(true_dfr, config.bits_per_cycle, rng)
        for i, k in enumerate(k_values):
            variant = replace(config.predictor, k=int(k))
            series = predict_series(observed, config.fit, variant)
            breaching = series.valid & (series.used > variant.target_ler)
            hits = np.flatnonzero(breaching[burst_cycle:])
            if hits.size:
                out[i, s] = int(hits[0])
    return out


def sweep_config_from_json(obj: dict, *, base_dir: str = ".") -> SweepConfig:
    import json
    import os

    try:
        fit_spec = obj["fit"]
        if isinstance(fit_spec, str):
            path = fit_spec if os.path.isabs(fit_spec) else os.path.join(base_dir, fit_spec)
            with open(path, encoding="utf-8") as fh:
                fit = PowerLawFit.from_json(fh.read())
        else:
            fit = PowerLawFit.from_json(json.dumps(fit_spec))
        pred = obj["predictor"]
        return SweepConfig(
            fit=fit,
            d=int(obj.get("distance", fit.d)),
            trace=dict(obj["trace"]),
            predictor=PredictorConfig(
                k=int(pred["buffer_k"]),
                alpha=float(pred["alpha"]),
                multiplier=float(pred["multiplier"]),
                target_ler=float(pred["target_ler"]),
            ),
            total_cycles=int(obj["total_cycles"]),
            n_seeds=int(obj.get("n_seeds", 50)),
            seed=int(obj["seed"]),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"sweep config missing or malformed field: {exc}") from exc
