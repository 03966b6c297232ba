"""Time-varying noise: slow exponential drift, burst events, DFR/LER traces.

Physical error rates follow p(t) = p0 * 10^(t/P), where the drift
constant P is the time to a tenfold increase. Burst events multiply the
affected rates while active and decay exponentially afterwards. Rates are
clamped (default 0.5) since the drift law is only meaningful below a
maximally-mixed channel.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .power_law import PowerLawFit
from .surface import CodeLayout


class Channel(enum.Enum):
    SINGLE_QUBIT_GATE = "single_qubit_gate"
    TWO_QUBIT_GATE = "two_qubit_gate"
    MEASUREMENT = "measurement"
    RESET = "reset"
    DATA_DECOHERENCE = "data_decoherence"
    ANCILLA_DECOHERENCE = "ancilla_decoherence"


@dataclass(frozen=True, order=True)
class ComponentId:
    tile_id: str
    channel: Channel
    index: int

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError(f"component index must be >= 0, got {self.index}")


def enumerate_components(layout: CodeLayout, tile_id: str = "tile0") -> tuple[ComponentId, ...]:
    """Deterministic component list for one tile's layout.

    Data qubits carry gate and decoherence channels; each stabilizer's
    ancilla carries measurement, reset and decoherence; every
    stabilizer-data adjacency is a two-qubit gate.
    """
    out: list[ComponentId] = []
    for q in range(layout.n_data):
        out.append(ComponentId(tile_id, Channel.SINGLE_QUBIT_GATE, q))
        out.append(ComponentId(tile_id, Channel.DATA_DECOHERENCE, q))
    n_ancilla = len(layout.x_stabilizers) + len(layout.z_stabilizers)
    for a in range(n_ancilla):
        out.append(ComponentId(tile_id, Channel.MEASUREMENT, a))
        out.append(ComponentId(tile_id, Channel.RESET, a))
        out.append(ComponentId(tile_id, Channel.ANCILLA_DECOHERENCE, a))
    edge = 0
    for stab in layout.x_stabilizers + layout.z_stabilizers:
        for _ in sorted(stab):
            out.append(ComponentId(tile_id, Channel.TWO_QUBIT_GATE, edge))
            edge += 1
    return tuple(out)


@dataclass(frozen=True)
class PhysicalErrorConfig:
    """Snapshot of per-component error probabilities at one instant."""

    entries: dict[ComponentId, float]

    def __post_init__(self) -> None:
        for cid, p in self.entries.items():
            if not 0 < p < 1:
                raise ValueError(f"probability for {cid} must be in (0, 1), got {p}")

    def mean_rate(self) -> float:
        return sum(self.entries.values()) / len(self.entries)


@dataclass(frozen=True)
class SlowDriftModel:
    baselines: dict[ComponentId, float]
    drift_constants: dict[ComponentId, float]
    clamp: float = 0.5

    def __post_init__(self) -> None:
        if self.baselines.keys() != self.drift_constants.keys():
            raise ValueError("baselines and drift_constants must cover the same components")
        if not self.baselines:
            raise ValueError("model must cover at least one component")
        for cid, p0 in self.baselines.items():
            if not 0 < p0 < 1:
                raise ValueError(f"baseline for {cid} must be in (0, 1), got {p0}")
        for cid, P in self.drift_constants.items():
            if P <= 0:
                raise ValueError(f"drift constant for {cid} must be > 0, got {P}")
        if not 0 < self.clamp <= 1:
            raise ValueError(f"clamp must be in (0, 1], got {self.clamp}")


@dataclass(frozen=True)
class BurstEvent:
    """Multiplicative error burst with exponential recovery after it ends."""

    start: float
    duration: float
    magnitude: float
    affected: frozenset[ComponentId]
    recovery_constant: float

    def __post_init__(self) -> None:
        if self.duration < 0:
            raise ValueError(f"duration must be >= 0, got {self.duration}")
        if self.magnitude < 1:
            raise ValueError(f"magnitude must be >= 1, got {self.magnitude}")
        if self.recovery_constant <= 0:
            raise ValueError(f"recovery_constant must be > 0, got {self.recovery_constant}")

    def factor_at(self, t: float) -> float:
        if t < self.start:
            return 1.0
        if t <= self.start + self.duration:
            return self.magnitude
        elapsed = t - self.start - self.duration
        return 1.0 + (self.magnitude - 1.0) * math.exp(-elapsed / self.recovery_constant)


def sample_slow_drift_model(
    seed,
    layout: CodeLayout,
    p0_range: tuple[float, float],
    mu: float,
    sigma: float,
    *,
    shared_drift: bool = False,
    tile_id: str = "tile0",
    clamp: float = 0.5,
) -> SlowDriftModel:
    """Draw baselines uniform in p0_range and drift constants Lognormal(mu, sigma^2).

    `shared_drift` gives every component the same drift constant (one
    draw); the default drifts each component independently.
    """
    lo, hi = p0_range
    if not 0 < lo < hi < 1:
        raise ValueError(f"p0_range must satisfy 0 < lo < hi < 1, got ({lo}, {hi})")
    if sigma < 0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    rng = np.random.default_rng(seed)
    components = enumerate_components(layout, tile_id)
    p0 = rng.uniform(lo, hi, len(components))
    if shared_drift:
        constants = np.full(len(components), rng.lognormal(mu, sigma))
    else:
        constants = rng.lognormal(mu, sigma, len(components))
    return SlowDriftModel(
        baselines={c: float(v) for c, v in zip(components, p0)},
        drift_constants={c: float(v) for c, v in zip(components, constants)},
        clamp=clamp,
    )


def physical_rates_at(
    model: SlowDriftModel, bursts: list[BurstEvent], t: float
) -> PhysicalErrorConfig:
    """Per-component rates at time t: min(clamp, p0 * 10^(t/P) * burst factors)."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    entries = {}
    for cid, p0 in model.baselines.items():
        rate = p0 * 10.0 ** (t / model.drift_constants[cid])
        for burst in bursts:
            if cid in burst.affected:
                rate *= burst.factor_at(t)
        entries[cid] = min(model.clamp, rate)
    return PhysicalErrorConfig(entries=entries)


@dataclass(frozen=True)
class DfrTrace:
    """Detector-fire-rate samples over time.

    `window_size` is the smallest number of rounds averaged into any one
    sample (adaptive importers may use larger windows per sample; the
    per-sample spans are recoverable from the timestamps).
    """

    cycle_time: float
    times: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    window_size: int = 1

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        if self.cycle_time <= 0:
            raise ValueError(f"cycle_time must be > 0, got {self.cycle_time}")
        if self.window_size < 1:
            raise ValueError(f"window_size must be >= 1, got {self.window_size}")
        if times.ndim != 1 or times.shape != values.shape or times.size == 0:
            raise ValueError("times and values must be equal-length non-empty 1-d arrays")
        if np.any(np.diff(times) <= 0):
            raise ValueError("sample times must be strictly increasing")
        if np.any((values < 0) | (values > 1)):
            raise ValueError("dfr samples must be in [0, 1]")

    @property
    def duration(self) -> float:
        return float(self.times[-1])


@dataclass(frozen=True)
class LerTrace:
    """Logical-error-rate samples over time, log-linearly interpolated."""

    times: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        if times.ndim != 1 or times.shape != values.shape or times.size == 0:
            raise ValueError("times and values must be equal-length non-empty 1-d arrays")
        if np.any(np.diff(times) <= 0):
            raise ValueError("sample times must be strictly increasing")
        if np.any((values <= 0) | (values > 1)):
            raise ValueError("ler samples must be in (0, 1]")

    def value_at(self, t):
        """Interpolate log-linearly; clamps to the end values outside the span."""
        return 10.0 ** np.interp(t, self.times, np.log10(self.values))


def import_dfr_trace(
    round_fractions, round_time: float, max_rel_uncertainty: float
) -> DfrTrace:
    """Average per-round fired fractions into windows of bounded uncertainty.

    Each emitted sample spans the smallest window n (searched by doubling,
    then refined) whose own estimate satisfies sqrt(p(1-p)/n)/p < u,
    equivalently n > (1-p)/(p u^2). Samples are timestamped at the window's
    end. A trailing stretch that cannot satisfy the bound is discarded;
    if no window qualifies the trace is uninformative and this raises.
    """
    fractions = np.asarray(round_fractions, dtype=float)
    if fractions.ndim != 1 or fractions.size == 0:
        raise ValueError("round_fractions must be a non-empty 1-d sequence")
    if np.any((fractions < 0) | (fractions > 1)):
        raise ValueError("per-round fractions must be in [0, 1]")
    if not 0 < max_rel_uncertainty < 1:
        raise ValueError(f"max_rel_uncertainty must be in (0, 1), got {max_rel_uncertainty}")
    if round_time <= 0:
        raise ValueError(f"round_time must be > 0, got {round_time}")

    u2 = max_rel_uncertainty**2
    cumulative = np.concatenate([[0.0], np.cumsum(fractions)])
    total = fractions.size

    def satisfies(start: int, n: int) -> bool:
        c = cumulative[start + n] - cumulative[start]
        # c*(n*u^2 + 1) > n  <=>  n > (1-p)/(p u^2) with p = c/n; the relative
        # epsilon keeps cumsum rounding from passing exactly-critical windows.
        return c * (n * u2 + 1.0) > n * (1.0 + 1e-9)

    times: list[float] = []
    values: list[float] = []
    windows: list[int] = []
    start = 0
    while start < total:
        n = 1
        while start + n <= total and not satisfies(start, n):
            n *= 2
        if start + n > total:
            n = total - start
            if n == 0 or not satisfies(start, n):
                break
        if n > 1:
            lo = n // 2 + 1
            candidates = np.arange(lo, n + 1)
            counts = cumulative[start + candidates] - cumulative[start]
            ok = counts * (candidates * u2 + 1.0) > candidates * (1.0 + 1e-9)
            n = int(candidates[np.argmax(ok)]) if ok.any() else n
        count = cumulative[start + n] - cumulative[start]
        start += n
        times.append(start * round_time)
        values.append(count / n)
        windows.append(n)

    if not values:
        raise ValueError("trace uninformative at requested uncertainty")
    return DfrTrace(
        cycle_time=round_time,
        times=np.array(times),
        values=np.array(values),
        window_size=min(windows),
    )


def synth_volatile_trace(
    seed, duration: float, base_dfr: float, jump_rate: float, jump_scale: float
) -> DfrTrace:
    """Synthetic volatile DFR trace: log-space mean reversion plus Poisson jumps.

    The log10 DFR follows an Ornstein-Uhlenbeck walk around log10(base_dfr)
    (reversion 0.8/s, diffusion 0.06/sqrt(s), 1 kHz samples); each Poisson
    jump multiplies the DFR by jump_scale and then relaxes back through the
    same reversion. Samples are clamped to (1e-9, 0.5).
    """
    if not 0 < base_dfr < 1:
        raise ValueError(f"base_dfr must be in (0, 1), got {base_dfr}")
    if duration <= 0:
        raise ValueError(f"duration must be > 0, got {duration}")
    if jump_rate < 0 or jump_scale < 1:
        raise ValueError("jump_rate must be >= 0 and jump_scale >= 1")

    dt = 1e-3
    reversion = 0.8
    diffusion = 0.06
    steps = max(1, int(round(duration / dt)))
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(steps)
    jumps = rng.poisson(jump_rate * dt, steps)

    center = math.log10(base_dfr)
    jump_step = math.log10(jump_scale)
    sigma_step = diffusion * math.sqrt(dt)
    lo, hi = -9.0, math.log10(0.5)

    x = center
    values = np.empty(steps)
    for i in range(steps):
        x += reversion * (center - x) * dt + sigma_step * noise[i] + jumps[i] * jump_step
        x = min(hi, max(lo, x))
        values[i] = x
    return DfrTrace(
        cycle_time=dt,
        times=dt * np.arange(1, steps + 1),
        values=10.0**values,
        window_size=1,
    )


def fit_logical_drift_constant(trace: LerTrace) -> float:
    """Seconds for the trace's LER to grow tenfold, by constrained least squares.

    Fits log10 p(t) = log10 p(t0) + (t - t0)/tau with the intercept pinned
    to the first sample. Returns +inf when the fitted slope is <= 0 (no
    drift).
    """
    if trace.times.size < 2:
        raise ValueError("drift fit requires at least 2 samples")
    t = trace.times - trace.times[0]
    y = np.log10(trace.values) - math.log10(trace.values[0])
    denom = float(np.dot(t, t))
    slope = float(np.dot(t, y)) / denom
    if slope <= 0:
        return math.inf
    return 1.0 / slope


def ler_trace_from_dfr_trace(fit: PowerLawFit, trace: DfrTrace) -> LerTrace:
    """Map a DFR trace through the fitted power law (median prediction)."""
    log_dfr = np.log10(np.maximum(trace.values, 1e-300))
    ler = 10.0 ** (fit.log_A + fit.b * log_dfr)
    return LerTrace(times=trace.times.copy(), values=np.clip(ler, 1e-300, 1.0))


def exponential_ler_cycles(
    p0: float, tau_cycles: float, length: int, clamp: float = 0.5
) -> np.ndarray:
    """Per-cycle LER under slow drift: min(clamp, p0 * 10^(c/tau))."""
    if not 0 < p0 < 1 or tau_cycles <= 0 or not 0 < clamp <= 1:
        raise ValueError("need p0 in (0,1), tau_cycles > 0 and clamp in (0,1]")
    cycles = np.arange(length, dtype=float)
    return np.minimum(clamp, p0 * 10.0 ** (cycles / tau_cycles))


def drift_cycle_ler_cycles(
    log10_mid: float,
    amplitude_decades: float,
    period_cycles: float,
    length: int,
    start_phase_rad: float = -math.pi / 2,
) -> np.ndarray:
    """Per-cycle LER for a periodic drift-and-recovery pattern.

    log10 LER swings sinusoidally around log10_mid; the default phase
    starts at the minimum, the freshly-calibrated state.
    """
    if amplitude_decades < 0 or period_cycles <= 0:
        raise ValueError("need amplitude_decades >= 0 and period_cycles > 0")
    if log10_mid + amplitude_decades > 0:
        raise ValueError("peak LER must stay below 1 (log10_mid + amplitude < 0)")
    cycles = np.arange(length, dtype=float)
    phase = 2 * math.pi * cycles / period_cycles + start_phase_rad
    return 10.0 ** (log10_mid + amplitude_decades * np.sin(phase))


def dfr_trace_csv_lines(trace: DfrTrace) -> list[str]:
    lines = ["time_s,dfr"]
    for t, v in zip(trace.times, trace.values):
        lines.append(f"{float(t)!r},{float(v)!r}")
    return lines


def read_dfr_trace_csv(text: str, cycle_time: float = 1.1e-6) -> DfrTrace:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "time_s,dfr":
        raise ValueError("DFR trace CSV must start with header 'time_s,dfr'")
    times = []
    values = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 2:
            raise ValueError(f"malformed DFR trace row: {ln!r}")
        times.append(float(parts[0]))
        values.append(float(parts[1]))
    return DfrTrace(cycle_time=cycle_time, times=np.array(times), values=np.array(values))


def read_detector_rounds_csv(text: str) -> np.ndarray:
    """Parse 'round,fired_count,total_detectors' rows into per-round fractions."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != "round,fired_count,total_detectors":
        raise ValueError("detector CSV must start with header 'round,fired_count,total_detectors'")
    fractions = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 3:
            raise ValueError(f"malformed detector row: {ln!r}")
        fired, total = int(parts[1]), int(parts[2])
        if total < 1 or not 0 <= fired <= total:
            raise ValueError(f"invalid detector counts in row: {ln!r}")
        fractions.append(fired / total)
    if not fractions:
        raise ValueError("detector CSV contains no data rows")
    return np.array(fractions)


def read_detector_rounds_binary(data: bytes) -> np.ndarray:
    """Parse little-endian uint32 (fired, total) pairs into per-round fractions."""
    raw = np.frombuffer(data, dtype="<u4")
    if raw.size == 0 or raw.size % 2:
        raise ValueError("binary detector stream must hold uint32 (fired,total) pairs")
    pairs = raw.reshape(-1, 2).astype(np.int64)
    if np.any(pairs[:, 1] < 1) or np.any(pairs[:, 0] > pairs[:, 1]):
        raise ValueError("invalid detector counts in binary stream")
    return pairs[:, 0] / pairs[:, 1]
