"""Tile-grid runtime: cycle loop, remap scheduling, recalibration lifecycle.

Every cycle, each live tile advances its ground-truth trace cursor, forms
an LER prediction from its DFR buffer (before this cycle's sample is
pushed), and collects an observed DFR when it is running QEC (active
tiles) or dummy QEC (available and warming-up tiles). Recalibrating tiles
are dark: no detectors fire. Phase timers advance at end of cycle, then
breaches on active tiles are resolved into remaps or explicit deferrals
within the same cycle.

Recalibration completion resets the tile's trace cursor to zero - a
freshly calibrated tile restarts its noise trajectory - and clears the DFR
buffer, which makes the subsequent warm-up exactly k cycles long.

The per-cycle loop is the hot path; it runs on a compiled kernel when the
extension built, with a pure-Python fallback that consumes the random
stream identically (see driftqec._kernels).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .drift import (
    drift_cycle_ler_cycles,
    exponential_ler_cycles,
    ler_trace_from_dfr_trace,
    synth_volatile_trace,
)
from .errors import ConfigError
from .power_law import PowerLawFit, PredictorConfig, z_from_alpha

PHASE_ACTIVE = 0
PHASE_AVAILABLE = 1
PHASE_RECALIBRATING = 2
PHASE_WARM_UP = 3
PHASE_DISABLED = 4


class TilePhase(enum.Enum):
    ACTIVE = PHASE_ACTIVE
    AVAILABLE = PHASE_AVAILABLE
    RECALIBRATING = PHASE_RECALIBRATING
    WARM_UP = PHASE_WARM_UP
    DISABLED = PHASE_DISABLED

    @property
    def label(self) -> str:
        return self.name.lower()


# Transitions the runtime may perform; anything else is a bug.
LEGAL_TRANSITIONS = frozenset(
    {
        (TilePhase.ACTIVE, TilePhase.RECALIBRATING),
        (TilePhase.RECALIBRATING, TilePhase.WARM_UP),
        (TilePhase.WARM_UP, TilePhase.AVAILABLE),
        (TilePhase.AVAILABLE, TilePhase.ACTIVE),
    }
)


@dataclass(frozen=True)
class RemapEvent:
    cycle: int
    qubit_id: int
    from_tile: int
    to_tile: int
    latency_cycles: int


@dataclass(frozen=True)
class DeferredRemap:
    cycle: int
    qubit_id: int
    tile: int
    reason: str  # "no_target" or "in_transit"


def observed_dfr(true_dfr: float, n_detectors: int, d: int, rng: np.random.Generator) -> float:
    """One cycle's empirical fired fraction: Binomial(d*N, dfr) / (d*N)."""
    if not 0 <= true_dfr <= 1:
        raise ValueError(f"true_dfr must be in [0, 1], got {true_dfr}")
    bits = d * n_detectors
    return float(rng.binomial(bits, true_dfr)) / bits


@dataclass(frozen=True)
class ExperimentConfig:
    rows: int
    cols: int
    qubit_tiles: tuple[int, ...]
    relocation_tiles: frozenset[int]
    predictor: PredictorConfig
    fit: PowerLawFit
    trace: dict
    total_cycles: int
    seed: int
    recalibration_cycles: int = 250_000
    remap_latency_cycles: int = 2
    distance: int = 3
    round_time_s: float = 1.1e-6
    disabled_tiles: frozenset[int] = frozenset()

    @property
    def n_tiles(self) -> int:
        return self.rows * self.cols

    @property
    def cycle_time_s(self) -> float:
        return self.distance * self.round_time_s

    @property
    def bits_per_cycle(self) -> int:
        return self.distance * (self.distance**2 - 1)

    def validate(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ConfigError("grid must have at least one tile")
        if self.total_cycles < 1:
            raise ConfigError("total_cycles must be >= 1")
        if self.total_cycles < self.predictor.k:
            raise ConfigError(
                f"total_cycles {self.total_cycles} shorter than warm-up "
                f"(buffer size {self.predictor.k})"
            )
        if self.recalibration_cycles < 1 or self.remap_latency_cycles < 0:
            raise ConfigError("recalibration_cycles must be >= 1 and remap latency >= 0")
        n = self.n_tiles
        for t in list(self.qubit_tiles) + list(self.relocation_tiles) + list(self.disabled_tiles):
            if not 0 <= t < n:
                raise ConfigError(f"tile index {t} outside the {self.rows}x{self.cols} grid")
        if len(set(self.qubit_tiles)) != len(self.qubit_tiles):
            raise ConfigError("each tile may host at most one qubit")
        if set(self.qubit_tiles) & self.disabled_tiles:
            raise ConfigError("cannot place a qubit on a disabled tile")
        if self.qubit_tiles:
            free = set(range(n)) - set(self.qubit_tiles) - self.disabled_tiles
            if not free:
                raise ConfigError("no available tile remains for remapping")


def _staggered_offsets(n_tiles: int, total_cycles: int) -> list[int]:
    return [i * total_cycles // n_tiles for i in range(n_tiles)]


def _build_trace_tables(config: ExperimentConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Dense per-cycle ground-truth tables.

    Returns (ler_table, dfr_table, offsets): tables are (rows, L) with one
    row per independent trace (a single shared row otherwise); offsets are
    initial per-tile cursors into their row. L covers the worst cursor,
    total_cycles + max(offset).
    """
    spec = dict(config.trace)
    kind = spec.pop("kind", None)
    offsets_spec = spec.pop("offsets", "staggered")
    independent = bool(spec.pop("independent", False))

    if offsets_spec == "staggered":
        offsets = _staggered_offsets(config.n_tiles, config.total_cycles)
    elif offsets_spec == "none":
        offsets = [0] * config.n_tiles
    else:
        offsets = [int(v) for v in offsets_spec]
        if len(offsets) != config.n_tiles or any(v < 0 for v in offsets):
            raise ConfigError("trace offsets must list one non-negative cursor per tile")

    length = config.total_cycles + max(offsets) + 1
    cycles = np.arange(length, dtype=float)
    n_rows = config.n_tiles if independent else 1

    def one_row(row: int) -> np.ndarray:
        if kind == "exponential":
            try:
                return exponential_ler_cycles(
                    p0=float(spec["p0"]),
                    tau_cycles=float(spec["tau_cycles"]),
                    length=length,
                    clamp=float(spec.get("clamp", 0.5)),
                )
            except ValueError as exc:
                raise ConfigError(f"exponential trace: {exc}") from exc
        if kind == "drift_cycle":
            try:
                return drift_cycle_ler_cycles(
                    log10_mid=float(spec["log10_mid"]),
                    amplitude_decades=float(spec["amplitude_decades"]),
                    period_cycles=float(spec["period_cycles"]),
                    length=length,
                    start_phase_rad=float(spec.get("start_phase_rad", -math.pi / 2)),
                )
            except ValueError as exc:
                raise ConfigError(f"drift_cycle trace: {exc}") from exc
        if kind == "volatile":
            dfr_trace = synth_volatile_trace(
                seed=np.random.SeedSequence([config.seed, 0x7A11, row]),
                duration=length * config.cycle_time_s,
                base_dfr=float(spec["base_dfr"]),
                jump_rate=float(spec.get("jump_rate", 0.1)),
                jump_scale=float(spec.get("jump_scale", 3.0)),
            )
            ler = ler_trace_from_dfr_trace(config.fit, dfr_trace)
            return ler.value_at(cycles * config.cycle_time_s)
        if kind == "dfr_csv":
            from .drift import read_dfr_trace_csv

            with open(spec["path"], encoding="utf-8") as fh:
                dfr_trace = read_dfr_trace_csv(fh.read())
            ler = ler_trace_from_dfr_trace(config.fit, dfr_trace)
            return ler.value_at(cycles * config.cycle_time_s)
        raise ConfigError(f"unknown trace kind {kind!r}")

    ler_table = np.vstack([one_row(r) for r in range(n_rows)])
    ler_table = np.clip(ler_table, 1e-300, 1.0)
    log_dfr = (np.log10(ler_table) - config.fit.log_A) / config.fit.b
    dfr_table = np.clip(10.0**log_dfr, 0.0, 1.0)
    return ler_table, dfr_table, np.array(offsets, dtype=np.int64)


@dataclass
class SimPlan:
    """Kernel-ready view of an experiment: plain arrays and scalars only."""

    n_tiles: int
    n_qubits: int
    total_cycles: int
    k: int
    bits_per_cycle: int
    log_A: float
    b: float
    sigma_logA: float
    sigma_b: float
    z: float
    multiplier: float
    target_ler: float
    floor_dfr: float
    floor_used: float
    recalibration_cycles: int
    remap_latency_cycles: int
    relocation: np.ndarray  # uint8[n_tiles]
    ler_table: np.ndarray  # float64[rows, L]
    dfr_table: np.ndarray  # float64[rows, L]
    trace_row: np.ndarray  # int64[n_tiles]
    offsets: np.ndarray  # int64[n_tiles]
    initial_phase: np.ndarray  # uint8[n_tiles]
    initial_qubit_tile: np.ndarray  # int64[n_qubits]


@dataclass
class SimState:
    phase: np.ndarray
    timer: np.ndarray
    cursor: np.ndarray
    buffer: np.ndarray  # float64[n_tiles, k]
    buf_pos: np.ndarray
    buf_count: np.ndarray
    buf_sum: np.ndarray
    tile_qubit: np.ndarray
    qubit_tile: np.ndarray
    transit_remaining: np.ndarray
    transit_src: np.ndarray
    rng: np.random.Generator


@dataclass
class SimRecords:
    true_ler: np.ndarray  # float64[T, n_tiles]
    obs_dfr: np.ndarray  # float64[T, n_tiles]; NaN when the tile was dark
    used: np.ndarray  # float64[T, n_tiles]
    valid: np.ndarray  # uint8[T, n_tiles]
    breach: np.ndarray  # uint8[T, n_tiles]
    phase: np.ndarray  # uint8[T, n_tiles]
    qubit_true: np.ndarray  # float64[T, n_qubits]
    qubit_tile: np.ndarray  # int64[T, n_qubits]
    qubit_above: np.ndarray  # uint8[T, n_qubits]


def build_plan(config: ExperimentConfig) -> SimPlan:
    config.validate()
    ler_table, dfr_table, offsets = _build_trace_tables(config)
    n_tiles = config.n_tiles
    relocation = np.zeros(n_tiles, dtype=np.uint8)
    for t in config.relocation_tiles:
        relocation[t] = 1
    initial_phase = np.full(n_tiles, PHASE_AVAILABLE, dtype=np.uint8)
    for t in config.disabled_tiles:
        initial_phase[t] = PHASE_DISABLED
    for t in config.qubit_tiles:
        initial_phase[t] = PHASE_ACTIVE
    trace_row = (
        np.arange(n_tiles, dtype=np.int64)
        if ler_table.shape[0] > 1
        else np.zeros(n_tiles, dtype=np.int64)
    )
    fit = config.fit
    z = z_from_alpha(config.predictor.alpha)
    floor_dfr = 1.0 / (config.predictor.k * fit.detectors_per_round)
    lg_floor = math.log10(floor_dfr)
    half_floor = z * math.sqrt(fit.sigma_logA**2 + lg_floor**2 * fit.sigma_b**2)
    floor_used = 10.0 ** (fit.log_A + fit.b * lg_floor + config.predictor.multiplier * half_floor)
    floor_used = min(1.0, max(1e-300, floor_used))
    return SimPlan(
        n_tiles=n_tiles,
        n_qubits=len(config.qubit_tiles),
        total_cycles=config.total_cycles,
        k=config.predictor.k,
        bits_per_cycle=config.bits_per_cycle,
        log_A=fit.log_A,
        b=fit.b,
        sigma_logA=fit.sigma_logA,
        sigma_b=fit.sigma_b,
        z=z,
        multiplier=config.predictor.multiplier,
        target_ler=config.predictor.target_ler,
        floor_dfr=floor_dfr,
        floor_used=floor_used,
        recalibration_cycles=config.recalibration_cycles,
        remap_latency_cycles=config.remap_latency_cycles,
        relocation=relocation,
        ler_table=ler_table,
        dfr_table=dfr_table,
        trace_row=trace_row,
        offsets=offsets,
        initial_phase=initial_phase,
        initial_qubit_tile=np.array(config.qubit_tiles, dtype=np.int64),
    )


def init_state(plan: SimPlan, seed) -> SimState:
    n_tiles = plan.n_tiles
    tile_qubit = np.full(n_tiles, -1, dtype=np.int64)
    for q, t in enumerate(plan.initial_qubit_tile):
        tile_qubit[t] = q
    return SimState(
        phase=plan.initial_phase.copy(),
        timer=np.zeros(n_tiles, dtype=np.int64),
        cursor=plan.offsets.copy(),
        buffer=np.zeros((n_tiles, plan.k), dtype=np.float64),
        buf_pos=np.zeros(n_tiles, dtype=np.int64),
        buf_count=np.zeros(n_tiles, dtype=np.int64),
        buf_sum=np.zeros(n_tiles, dtype=np.float64),
        tile_qubit=tile_qubit,
        qubit_tile=plan.initial_qubit_tile.copy(),
        transit_remaining=np.zeros(plan.n_qubits, dtype=np.int64),
        transit_src=np.full(plan.n_qubits, -1, dtype=np.int64),
        rng=np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed))),
    )


def alloc_records(plan: SimPlan) -> SimRecords:
    shape = (plan.total_cycles, plan.n_tiles)
    qshape = (plan.total_cycles, plan.n_qubits)
    return SimRecords(
        true_ler=np.zeros(shape),
        obs_dfr=np.full(shape, np.nan),
        used=np.zeros(shape),
        valid=np.zeros(shape, dtype=np.uint8),
        breach=np.zeros(shape, dtype=np.uint8),
        phase=np.zeros(shape, dtype=np.uint8),
        qubit_true=np.zeros(qshape),
        qubit_tile=np.zeros(qshape, dtype=np.int64),
        qubit_above=np.zeros(qshape, dtype=np.uint8),
    )


def select_target(
    plan: SimPlan, state: SimState, records: SimRecords, cycle: int, excluding: int
) -> int | None:
    """Pick the remap destination among available relocation tiles.

    Valid predictions at or below target come first (lowest used, then
    lowest id), then valid ones above target, then tiles whose prediction
    is still invalid. Returns None when no candidate exists.
    """
    best_key = None
    best_tile = None
    for t in range(plan.n_tiles):
        if t == excluding or not plan.relocation[t] or state.phase[t] != PHASE_AVAILABLE:
            continue
        if records.valid[cycle, t]:
            used = float(records.used[cycle, t])
            key = (0 if used <= plan.target_ler else 1, used, t)
        else:
            key = (2, 0.0, t)
        if best_key is None or key < best_key:
            best_key = key
            best_tile = t
    return best_tile


def trigger_remap(
    plan: SimPlan, state: SimState, cycle: int, qubit: int, target: int
) -> RemapEvent:
    """Move `qubit` to `target`; its old tile starts recalibrating now.

    The qubit occupies the target after the remap latency; in transit its
    effective LER is the worse of source and target.
    """
    src = int(state.qubit_tile[qubit])
    if state.phase[src] != PHASE_ACTIVE:
        raise ValueError("remap source must be an active tile")
    if state.phase[target] != PHASE_AVAILABLE:
        raise ValueError("remap target must be an available tile")
    state.phase[src] = PHASE_RECALIBRATING
    state.timer[src] = plan.recalibration_cycles
    state.tile_qubit[src] = -1
    state.phase[target] = PHASE_ACTIVE
    state.tile_qubit[target] = qubit
    state.qubit_tile[qubit] = target
    state.transit_remaining[qubit] = plan.remap_latency_cycles
    state.transit_src[qubit] = src
    return RemapEvent(
        cycle=cycle,
        qubit_id=qubit,
        from_tile=src,
        to_tile=target,
        latency_cycles=plan.remap_latency_cycles,
    )


def handle_breaches(
    plan: SimPlan,
    state: SimState,
    records: SimRecords,
    cycle: int,
    events: list[RemapEvent],
    deferrals: list[DeferredRemap],
) -> None:
    """Resolve every active-tile breach of this cycle into a remap or deferral."""
    for t in range(plan.n_tiles):
        if state.phase[t] != PHASE_ACTIVE or not records.breach[cycle, t]:
            continue
        qubit = int(state.tile_qubit[t])
        if qubit < 0:
            continue
        if state.transit_remaining[qubit] > 0:
            deferrals.append(DeferredRemap(cycle, qubit, t, "in_transit"))
            continue
        target = select_target(plan, state, records, cycle, excluding=t)
        if target is None:
            deferrals.append(DeferredRemap(cycle, qubit, t, "no_target"))
        else:
            events.append(trigger_remap(plan, state, cycle, qubit, target))


def drive(plan: SimPlan, seed, backend=None) -> tuple[SimRecords, list[RemapEvent], list[DeferredRemap]]:
    """Run the full experiment loop on the selected kernel backend."""
    from . import _kernels

    if backend is None:
        backend = _kernels.active_backend()
    state = init_state(plan, seed)
    records = alloc_records(plan)
    events: list[RemapEvent] = []
    deferrals: list[DeferredRemap] = []
    cycle = 0
    while cycle < plan.total_cycles:
        cycle = backend.advance(plan, state, records, cycle, plan.total_cycles)
        if cycle >= plan.total_cycles:
            break
        handle_breaches(plan, state, records, cycle, events, deferrals)
        cycle += 1
    return records, events, deferrals


class MemoryExperiment:
    """Stepwise view of one experiment, for inspection and tests.

    Always runs on the pure-Python kernel so single cycles can be stepped;
    `run_memory_experiment` is the fast path.
    """

    def __init__(self, config: ExperimentConfig):
        from ._kernels import _pure

        self._backend = _pure
        self.config = config
        self.plan = build_plan(config)
        self.state = init_state(self.plan, config.seed)
        self.records = alloc_records(self.plan)
        self.events: list[RemapEvent] = []
        self.deferrals: list[DeferredRemap] = []
        self.cycle = 0

    def step(self) -> int:
        """Advance exactly one cycle; returns the cycle just executed."""
        if self.cycle >= self.plan.total_cycles:
            raise RuntimeError("experiment already complete")
        executed = self.cycle
        stop = executed + 1
        at = self._backend.advance(self.plan, self.state, self.records, executed, stop)
        if at < stop:
            handle_breaches(self.plan, self.state, self.records, at,
                            self.events, self.deferrals)
        self.cycle = stop
        return executed

    def run(self) -> "ExperimentReport":
        while self.cycle < self.plan.total_cycles:
            self.step()
        return finalize_report(self.config, self.plan, self.records,
                               self.events, self.deferrals)

    def tile_phase(self, tile: int) -> TilePhase:
        return TilePhase(int(self.state.phase[tile]))


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    records: SimRecords = field(repr=False)
    remap_events: tuple[RemapEvent, ...]
    deferrals: tuple[DeferredRemap, ...]
    metrics: dict


def _breach_gaps(
    plan: SimPlan, records: SimRecords, events: tuple[RemapEvent, ...]
) -> list[dict]:
    """Per-remap gap between the tile's true breach and its predicted breach.

    The predicted breach is the start of the contiguous breach-flag run
    that triggered the remap. The true breach is the first cycle, within
    the hosting episode extended through the recalibration window (before
    the trace resets), where the tile's true LER strictly exceeds the
    target. The episode starts when the qubit arrived on the tile.
    """
    gaps = []
    for i, event in enumerate(events):
        tile = event.from_tile
        predicted = event.cycle
        while predicted > 0 and records.breach[predicted - 1, tile]:
            predicted -= 1
        episode_start = 0
        for prior in events[:i]:
            if prior.to_tile == tile:
                episode_start = prior.cycle + prior.latency_cycles
        episode_end = min(event.cycle + plan.recalibration_cycles, plan.total_cycles)
        window = records.true_ler[episode_start:episode_end, tile]
        above = np.flatnonzero(window > plan.target_ler)
        true_cycle = episode_start + int(above[0]) if above.size else None
        gaps.append(
            {
                "tile": tile,
                "remap_cycle": event.cycle,
                "predicted_breach_cycle": predicted,
                "true_breach_cycle": true_cycle,
                "gap": None if true_cycle is None else true_cycle - predicted,
            }
        )
    return gaps


def finalize_report(
    config: ExperimentConfig,
    plan: SimPlan,
    records: SimRecords,
    events: list[RemapEvent],
    deferrals: list[DeferredRemap],
) -> ExperimentReport:
    cycles_above = int(records.qubit_above.sum())
    l1_terms = []
    for q in range(plan.n_qubits):
        tiles = records.qubit_tile[:, q]
        cyc = np.arange(plan.total_cycles)
        valid = records.valid[cyc, tiles].astype(bool)
        if valid.any():
            err = np.abs(records.used[cyc, tiles][valid] - records.qubit_true[:, q][valid])
            l1_terms.append(err.mean())
    metrics = {
        "cycles_above_target": cycles_above,
        "remap_count": len(events),
        "deferral_count": len(deferrals),
        "mean_l1": float(np.mean(l1_terms)) if l1_terms else None,
        "breach_gaps": _breach_gaps(plan, records, tuple(events)),
    }
    return ExperimentReport(
        config=config,
        records=records,
        remap_events=tuple(events),
        deferrals=tuple(deferrals),
        metrics=metrics,
    )


def run_memory_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Run the configured experiment to completion (fast kernel if built)."""
    plan = build_plan(config)
    records, events, deferrals = drive(plan, config.seed)
    return finalize_report(config, plan, records, events, deferrals)


# -- configuration and report serialization ---------------------------------

_PHASE_LABELS = {p.value: p.label for p in TilePhase}


def config_from_json(obj: dict, *, base_dir: str = ".") -> ExperimentConfig:
    """Parse the experiment config schema (see README for the layout)."""
    import os

    try:
        rows, cols = (int(v) for v in obj["grid"])
        fit_spec = obj["fit"]
        if isinstance(fit_spec, str):
            path = fit_spec if os.path.isabs(fit_spec) else os.path.join(base_dir, fit_spec)
            with open(path, encoding="utf-8") as fh:
                fit = PowerLawFit.from_json(fh.read())
        else:
            fit = PowerLawFit.from_json(json.dumps(fit_spec))
        pred = obj["predictor"]
        predictor = PredictorConfig(
            k=int(pred["buffer_k"]),
            alpha=float(pred["alpha"]),
            multiplier=float(pred["multiplier"]),
            target_ler=float(pred["target_ler"]),
        )
        config = ExperimentConfig(
            rows=rows,
            cols=cols,
            qubit_tiles=tuple(int(t) for t in obj["qubits"]),
            relocation_tiles=frozenset(int(t) for t in obj["relocation_tiles"]),
            predictor=predictor,
            fit=fit,
            trace=dict(obj["trace"]),
            total_cycles=int(obj["total_cycles"]),
            seed=int(obj["seed"]),
            recalibration_cycles=int(obj.get("recalibration_cycles", 250_000)),
            remap_latency_cycles=int(obj.get("remap_latency_cycles", 2)),
            distance=int(obj.get("distance", 3)),
            round_time_s=float(obj.get("round_time_s", 1.1e-6)),
            disabled_tiles=frozenset(int(t) for t in obj.get("disabled_tiles", ())),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"experiment config missing or malformed field: {exc}") from exc
    config.validate()
    return config


def report_summary_json(report: ExperimentReport) -> str:
    payload = {
        "total_cycles": report.config.total_cycles,
        "n_tiles": report.config.n_tiles,
        "seed": report.config.seed,
        "metrics": report.metrics,
        "remap_events": [
            {
                "cycle": e.cycle,
                "qubit": e.qubit_id,
                "from_tile": e.from_tile,
                "to_tile": e.to_tile,
                "latency_cycles": e.latency_cycles,
            }
            for e in report.remap_events
        ],
        "deferrals": [
            {"cycle": d.cycle, "qubit": d.qubit_id, "tile": d.tile, "reason": d.reason}
            for d in report.deferrals
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=2)


def write_report_csv(report: ExperimentReport, fh) -> None:
    """Stream the per-cycle records as cycle,tile,phase,true_ler,obs_dfr,used_pred,breach."""
    records = report.records
    n_tiles = report.config.n_tiles
    total = report.config.total_cycles
    fh.write("cycle,tile,phase,true_ler,obs_dfr,used_pred,breach\n")
    step = 16384
    for start in range(0, total, step):
        stop = min(start + step, total)
        true_l = records.true_ler[start:stop].tolist()
        obs_l = records.obs_dfr[start:stop].tolist()
        used_l = records.used[start:stop].tolist()
        breach_l = records.breach[start:stop].tolist()
        phase_l = records.phase[start:stop].tolist()
        rows = []
        for i in range(stop - start):
            cycle = start + i
            tl, ol, ul, bl, pl = true_l[i], obs_l[i], used_l[i], breach_l[i], phase_l[i]
            for t in range(n_tiles):
                rows.append(
                    f"{cycle},{t},{_PHASE_LABELS[pl[t]]},{tl[t]!r},{ol[t]!r},{ul[t]!r},{bl[t]}"
                )
        fh.write("\n".join(rows) + "\n")
