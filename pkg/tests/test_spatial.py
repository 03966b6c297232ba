from fractions import Fraction

import pytest

from driftqec.spatial import (
    crossover_csv_lines,
    crossover_report,
    deformation_unit_tile_qubits,
    spare_tile_ratio,
    tile_qubits,
    unit_tile_qubits,
)


@pytest.mark.parametrize("d,expected", [(3, 17), (5, 49), (7, 97)])
def test_tile_qubits(d, expected):
    assert tile_qubits(d) == expected


@pytest.mark.parametrize("d,expected", [(3, 68), (5, 196)])
def test_unit_tile_qubits(d, expected):
    assert unit_tile_qubits(d) == expected


@pytest.mark.parametrize("d", [3, 5, 7, 9, 11])
def test_unit_tile_is_four_tiles(d):
    assert unit_tile_qubits(d) == 4 * tile_qubits(d)


def test_deformation_unit_tile_values():
    assert deformation_unit_tile_qubits(3, 0) == unit_tile_qubits(3)
    assert deformation_unit_tile_qubits(3, 2) == 8 * 9 + 12 * 3 * 2 + 6 * 4 - 4 == 164


@pytest.mark.parametrize("d", [3, 5, 7, 9])
@pytest.mark.parametrize("delta", [0, 1, 2, 3, 5])
def test_deformation_algebraic_forms_agree(d, delta):
    assert deformation_unit_tile_qubits(d, delta) == 8 * d * d + 12 * d * delta + 6 * delta * delta - 4


def test_spare_tile_ratio_values():
    assert spare_tile_ratio(3, 2) == Fraction(24, 17)
    assert spare_tile_ratio(5, 2) == Fraction(36, 49)
    assert spare_tile_ratio(7, 2) == Fraction(48, 97)
    assert spare_tile_ratio(5, 0) == 0


@pytest.mark.parametrize("d", [3, 5, 7])
@pytest.mark.parametrize("delta", [0, 1, 2, 4])
def test_break_even_identity_exact(d, delta):
    # (N+M) * unit = N * deformation_unit holds exactly at M/N = ratio.
    ratio = spare_tile_ratio(d, delta)
    lhs = (1 + ratio) * unit_tile_qubits(d)
    rhs = deformation_unit_tile_qubits(d, delta)
    assert lhs == rhs


@pytest.mark.parametrize("delta", [1, 2, 3])
def test_ratio_strictly_decreasing_in_d(delta):
    ds = list(range(3, 17, 2))
    ratios = [spare_tile_ratio(d, delta) for d in ds]
    assert all(a > b for a, b in zip(ratios, ratios[1:]))


def test_crossover_report():
    rows = crossover_report(2, [3, 5, 7], 1000)
    by_d = {r.d: r for r in rows}
    assert by_d[5].max_spares == 734
    assert by_d[5].efficient
    assert not by_d[3].efficient
    assert [d for d in by_d if by_d[d].efficient] == [5, 7]


def test_crossover_errors():
    with pytest.raises(ValueError):
        crossover_report(2, [], 1000)
    with pytest.raises(ValueError):
        crossover_report(2, [4], 1000)
    with pytest.raises(ValueError):
        spare_tile_ratio(3, -1)


def test_crossover_csv_shape():
    lines = crossover_csv_lines(crossover_report(2, [3, 5], 1000))
    assert lines[0] == "d,delta,ratio,max_M,efficient"
    assert len(lines) == 3
    assert lines[1].startswith("3,2,1.411764706,")
