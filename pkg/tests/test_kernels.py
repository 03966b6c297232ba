"""Cross-backend checks: the compiled kernel must reproduce the pure
fallback bit for bit, events included."""

import numpy as np
import pytest

from driftqec import _kernels
from driftqec.power_law import PredictorConfig
from driftqec.runtime import ExperimentConfig, build_plan, drive

needs_compiled = pytest.mark.skipif(
    not _kernels.HAVE_COMPILED, reason="compiled kernel not built"
)

RECORD_FIELDS = ("true_ler", "obs_dfr", "used", "valid", "breach", "phase",
                 "qubit_true", "qubit_tile", "qubit_above")


def run_both(config):
    out = []
    for backend in (_kernels._pure, _kernels._core):
        plan = build_plan(config)
        out.append(drive(plan, config.seed, backend=backend))
    return out


def assert_identical(pure, compiled):
    rec_p, ev_p, def_p = pure
    rec_c, ev_c, def_c = compiled
    for field in RECORD_FIELDS:
        assert np.array_equal(getattr(rec_p, field), getattr(rec_c, field),
                              equal_nan=True), field
    assert ev_p == ev_c
    assert def_p == def_c


def make_config(shipped_fit, **kwargs):
    base = dict(
        rows=2,
        cols=2,
        qubit_tiles=(0,),
        relocation_tiles=frozenset({0, 1, 2, 3}),
        predictor=PredictorConfig(k=40, alpha=0.9, multiplier=1.0, target_ler=1e-3),
        fit=shipped_fit,
        trace={"kind": "drift_cycle", "log10_mid": -3.5, "amplitude_decades": 1.25,
               "period_cycles": 3000, "offsets": "staggered"},
        total_cycles=7000,
        seed=31,
        recalibration_cycles=600,
        remap_latency_cycles=2,
    )
    base.update(kwargs)
    return ExperimentConfig(**base)


@needs_compiled
def test_backends_identical_with_remaps(shipped_fit):
    pure, compiled = run_both(make_config(shipped_fit))
    assert pure[1], "scenario should produce remap events"
    assert_identical(pure, compiled)


@needs_compiled
def test_backends_identical_with_deferrals(shipped_fit):
    config = make_config(shipped_fit, relocation_tiles=frozenset(), total_cycles=3000)
    pure, compiled = run_both(config)
    assert pure[2], "scenario should produce deferrals"
    assert_identical(pure, compiled)


@needs_compiled
def test_backends_identical_two_qubits(shipped_fit):
    config = make_config(
        shipped_fit,
        rows=2,
        cols=3,
        qubit_tiles=(0, 3),
        relocation_tiles=frozenset(range(6)),
        total_cycles=6000,
        seed=77,
    )
    pure, compiled = run_both(config)
    assert_identical(pure, compiled)


@needs_compiled
def test_backends_identical_exponential_trace(shipped_fit):
    config = make_config(
        shipped_fit,
        trace={"kind": "exponential", "p0": 1e-4, "tau_cycles": 1500.0,
               "offsets": "staggered"},
        total_cycles=4000,
        recalibration_cycles=900,
    )
    pure, compiled = run_both(config)
    assert_identical(pure, compiled)


@needs_compiled
def test_scalar_binomial_stream_matches_kernel_consumption():
    """Generator.binomial and the kernel's C sampler share one stream."""
    from driftqec.power_law import PowerLawFit
    from driftqec.runtime import alloc_records, init_state

    fit = PowerLawFit(d=3, log_A=0.9, b=2.2, sigma_logA=0.1, sigma_b=0.05,
                      n_samples=5, residual_rms=0.05)
    config = ExperimentConfig(
        rows=1, cols=2, qubit_tiles=(), relocation_tiles=frozenset(),
        predictor=PredictorConfig(k=4, alpha=0.5, multiplier=0.0, target_ler=1e-3),
        fit=fit,
        trace={"kind": "drift_cycle", "log10_mid": -2.5, "amplitude_decades": 0.5,
               "period_cycles": 50, "offsets": "none"},
        total_cycles=25, seed=5, recalibration_cycles=10,
    )
    plan = build_plan(config)
    state = init_state(plan, config.seed)
    records = alloc_records(plan)
    assert _kernels._core.advance(plan, state, records, 0, 25) == 25

    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed)))
    expected = np.empty((25, 2))
    for cycle in range(25):
        for t in range(2):
            idx = plan.offsets[t] + cycle
            expected[cycle, t] = rng.binomial(plan.bits_per_cycle,
                                              plan.dfr_table[0, idx]) / plan.bits_per_cycle
    assert np.array_equal(records.obs_dfr, expected)
