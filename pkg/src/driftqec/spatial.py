"""Physical-qubit accounting for remap-based vs. deformation-based recalibration.

All counts are exact; ratios are carried as `fractions.Fraction` so the
break-even identity between the two layouts can be checked bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _check_distance(d: int) -> None:
    if d < 3 or d % 2 == 0:
        raise ValueError(f"code distance must be an odd integer >= 3, got {d}")


def tile_qubits(d: int) -> int:
    """Physical qubits in a single distance-d surface code tile: 2d^2 - 1."""
    _check_distance(d)
    return 2 * d * d - 1


def unit_tile_qubits(d: int) -> int:
    """Physical qubits in a 2x2 unit tile (one logical tile + three routing tiles)."""
    _check_distance(d)
    return 8 * d * d - 4


def deformation_unit_tile_qubits(d: int, delta: int) -> int:
    """Unit-tile qubits when routing tiles are kept at distance d + delta.

    Three routing tiles at distance d+delta plus one logical tile at d;
    expands to 8d^2 + 12*d*delta + 6*delta^2 - 4.
    """
    _check_distance(d)
    if delta < 0:
        raise ValueError(f"distance surplus delta must be >= 0, got {delta}")
    return 3 * (2 * (d + delta) ** 2 - 1) + (2 * d * d - 1)


def spare_tile_ratio(d: int, delta: int) -> Fraction:
    """Break-even ratio M/N of spare relocation tiles to logical qubits.

    At this ratio the total qubit budget of the relocation layout,
    (N+M) * unit_tile_qubits(d), equals the deformation layout's
    N * deformation_unit_tile_qubits(d, delta).
    """
    _check_distance(d)
    if delta < 0:
        raise ValueError(f"distance surplus delta must be >= 0, got {delta}")
    return Fraction(3 * delta * (2 * d + delta), 4 * d * d - 2)


@dataclass(frozen=True)
class CrossoverRow:
    d: int
    delta: int
    ratio: Fraction
    max_spares: int
    efficient: bool


def crossover_report(delta: int, d_range: list[int], n_qubits: int) -> list[CrossoverRow]:
    """Per-distance spare-tile budget for a fixed routing surplus delta.

    `max_spares` is floor(n_qubits * ratio); a row is `efficient` when the
    spare count does not exceed the logical qubit count (ratio <= 1).
    """
    if not d_range:
        raise ValueError("d_range must not be empty")
    if n_qubits < 1:
        raise ValueError(f"n_qubits must be >= 1, got {n_qubits}")
    rows = []
    for d in d_range:
        ratio = spare_tile_ratio(d, delta)
        rows.append(
            CrossoverRow(
                d=d,
                delta=delta,
                ratio=ratio,
                max_spares=int(n_qubits * ratio),
                efficient=ratio <= 1,
            )
        )
    return rows


def crossover_csv_lines(rows: list[CrossoverRow]) -> list[str]:
    lines = ["d,delta,ratio,max_M,efficient"]
    for r in rows:
        lines.append(f"{r.d},{r.delta},{float(r.ratio):.10g},{r.max_spares},{str(r.efficient).lower()}")
    return lines
