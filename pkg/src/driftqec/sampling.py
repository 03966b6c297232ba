"""Code-capacity Monte Carlo oracle producing (DFR, LER) pairs.

Each shot draws independent X and Z errors on every data qubit, reads the
stabilizer syndrome against an all-zeros reference frame, decodes the two
sectors independently, and records whether the residual operator flips a
logical observable. The detector fire rate is the fired fraction over all
d^2-1 detectors.

At d=3 the per-sector logical flip probability can also be computed
exactly by enumerating all 2^9 error patterns, which is the independent
check for the sampled estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .surface import CodeLayout, build_rotated_code


@dataclass(frozen=True)
class ShotBatch:
    """Aggregate of one Monte Carlo batch."""

    shots: int
    dfr: float
    ler: float
    stderr_ler: float


@dataclass(frozen=True)
class DatasetPoint:
    p: float
    dfr: float
    ler: float
    stderr_ler: float
    shots: int


@dataclass(frozen=True)
class FitDataset:
    """Kept (dfr, ler) points plus the zero-LER points that were dropped."""

    d: int
    points: tuple[DatasetPoint, ...]
    dropped: tuple[DatasetPoint, ...]

    def samples(self) -> list[tuple[float, float]]:
        return [(pt.dfr, pt.ler) for pt in self.points]


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _sector_flips(
    layout: CodeLayout, errors: np.ndarray, error_kind: str
) -> tuple[np.ndarray, np.ndarray]:
    """Per-shot fired-detector counts and logical flips for one sector.

    `errors` is a (shots, n_data) boolean array of data-qubit errors of
    the given kind.
    """
    decoder = layout.z_decoder if error_kind == "x" else layout.x_decoder
    logical_mask = layout.logical_z_mask if error_kind == "x" else layout.logical_x_mask

    stab_rows = np.array(
        [[mask >> q & 1 for q in range(layout.n_data)] for mask in decoder.stab_masks],
        dtype=np.uint8,
    )
    syndrome = (errors.astype(np.uint8) @ stab_rows.T) & 1
    fired = syndrome.sum(axis=1, dtype=np.int64)

    stab_weights = np.left_shift(np.int64(1), np.arange(len(decoder.stab_masks), dtype=np.int64))
    syn_ints = syndrome.astype(np.int64) @ stab_weights

    if decoder.lookup is not None:
        corrections = np.asarray(decoder.lookup, dtype=np.int64)[syn_ints]
    else:
        unique, inverse = np.unique(syn_ints, return_inverse=True)
        decoded = np.array([decoder.decode(int(s)) for s in unique], dtype=np.int64)
        corrections = decoded[inverse]

    qubit_weights = np.left_shift(np.int64(1), np.arange(layout.n_data, dtype=np.int64))
    error_masks = errors.astype(np.int64) @ qubit_weights
    residual = np.bitwise_xor(error_masks, corrections)
    flips = (np.bitwise_count(np.bitwise_and(residual, np.int64(logical_mask))) & 1).astype(bool)
    return fired, flips


def sample_code_capacity(
    layout: CodeLayout, p_x: float, p_z: float, shots: int, seed
) -> ShotBatch:
    """Sample `shots` rounds of code-capacity noise and decode them.

    X and Z errors land independently on each data qubit with
    probabilities p_x and p_z; the two sectors are decoded independently
    and a shot counts as a logical error when either sector's residual
    anticommutes with its logical operator.
    """
    if not (0 <= p_x < 0.5 and 0 <= p_z < 0.5):
        raise ValueError(f"error probabilities must be in [0, 0.5), got {p_x}, {p_z}")
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    rng = _as_rng(seed)

    x_errors = rng.random((shots, layout.n_data)) < p_x
    z_errors = rng.random((shots, layout.n_data)) < p_z
    fired_z, flips_x = _sector_flips(layout, x_errors, "x")
    fired_x, flips_z = _sector_flips(layout, z_errors, "z")

    dfr = float((fired_z.sum() + fired_x.sum()) / (shots * layout.detector_count))
    ler = float(np.mean(flips_x | flips_z))
    return ShotBatch(
        shots=shots,
        dfr=dfr,
        ler=ler,
        stderr_ler=math.sqrt(ler * (1.0 - ler) / shots),
    )


def exact_sector_flip_probability(layout: CodeLayout, p: float, error_kind: str) -> float:
    """Exact logical flip probability of one sector by full enumeration (d=3).

    Sums p^w (1-p)^(n-w) over every error pattern whose decoded residual
    anticommutes with the sector's logical operator.
    """
    decoder = layout.z_decoder if error_kind == "x" else layout.x_decoder
    logical_mask = layout.logical_z_mask if error_kind == "x" else layout.logical_x_mask
    if decoder.lookup is None:
        raise ValueError("exact enumeration is only tractable for d=3 layouts")
    n = layout.n_data
    total = 0.0
    for pattern in range(1 << n):
        syn = decoder.syndrome_int(pattern)
        residual = pattern ^ decoder.lookup[syn]
        if bin(residual & logical_mask).count("1") & 1:
            w = bin(pattern).count("1")
            total += p**w * (1.0 - p) ** (n - w)
    return total


def exact_code_capacity_ler(layout: CodeLayout, p_x: float, p_z: float) -> float:
    """Exact combined LER at d=3: 1 - (1-q_x)(1-q_z) with independent sectors."""
    q_x = exact_sector_flip_probability(layout, p_x, "x")
    q_z = exact_sector_flip_probability(layout, p_z, "z")
    return 1.0 - (1.0 - q_x) * (1.0 - q_z)


def generate_fit_dataset(
    d: int, p_grid: list[float], shots_per_point: int, seed
) -> FitDataset:
    """One ShotBatch per grid point with p_x = p_z = p.

    Points that observe zero logical errors are moved to `dropped`: they
    carry no usable log-space information for fitting.
    """
    if not p_grid:
        raise ValueError("p_grid must not be empty")
    if any(not 0 < p <= 0.1 for p in p_grid):
        raise ValueError("all grid probabilities must be in (0, 0.1]")
    if shots_per_point < 10_000:
        raise ValueError(f"shots_per_point must be >= 10000, got {shots_per_point}")

    layout = build_rotated_code(d)
    children = np.random.SeedSequence(seed).spawn(len(p_grid))
    kept: list[DatasetPoint] = []
    dropped: list[DatasetPoint] = []
    for p, child in zip(p_grid, children):
        batch = sample_code_capacity(layout, p, p, shots_per_point, np.random.default_rng(child))
        point = DatasetPoint(p=p, dfr=batch.dfr, ler=batch.ler,
                             stderr_ler=batch.stderr_ler, shots=batch.shots)
        (dropped if batch.ler == 0 else kept).append(point)
    return FitDataset(d=d, points=tuple(kept), dropped=tuple(dropped))


def dataset_csv_lines(dataset: FitDataset) -> list[str]:
    lines = ["p,dfr,ler,stderr_ler,shots"]
    for pt in dataset.points:
        lines.append(f"{pt.p!r},{pt.dfr!r},{pt.ler!r},{pt.stderr_ler!r},{pt.shots}")
    return lines


def read_dataset_csv(text: str) -> list[tuple[float, float]]:
    """Parse a dataset CSV back into (dfr, ler) fit samples."""
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("p,"):
        raise ValueError("dataset CSV must start with header 'p,dfr,ler,stderr_ler,shots'")
    samples = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 5:
            raise ValueError(f"malformed dataset row: {ln!r}")
        samples.append((float(parts[1]), float(parts[2])))
    return samples
