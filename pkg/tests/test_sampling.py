import math

import numpy as np
import pytest

from driftqec.sampling import (
    _sector_flips,
    dataset_csv_lines,
    exact_code_capacity_ler,
    exact_sector_flip_probability,
    generate_fit_dataset,
    read_dataset_csv,
    sample_code_capacity,
)


def test_no_errors_no_fires(layout_d3):
    batch = sample_code_capacity(layout_d3, 0.0, 0.0, 200, seed=1)
    assert batch.dfr == 0.0
    assert batch.ler == 0.0
    assert batch.stderr_ler == 0.0


def test_argument_validation(layout_d3):
    with pytest.raises(ValueError):
        sample_code_capacity(layout_d3, 0.6, 0.0, 10, seed=1)
    with pytest.raises(ValueError):
        sample_code_capacity(layout_d3, 0.1, 0.1, 0, seed=1)


def test_logical_operator_flips_without_syndrome(layout_d3):
    errors = np.zeros((1, layout_d3.n_data), dtype=bool)
    for q in layout_d3.logical_x:
        errors[0, q] = True
    fired, flips = _sector_flips(layout_d3, errors, "x")
    assert fired[0] == 0
    assert flips[0]


def test_single_center_error_decoded(layout_d3):
    errors = np.zeros((1, layout_d3.n_data), dtype=bool)
    errors[0, 4] = True
    fired, flips = _sector_flips(layout_d3, errors, "x")
    assert fired[0] == 2
    assert not flips[0]


def test_sampling_deterministic(layout_d3):
    a = sample_code_capacity(layout_d3, 5e-3, 5e-3, 20_000, seed=77)
    b = sample_code_capacity(layout_d3, 5e-3, 5e-3, 20_000, seed=77)
    assert a == b


def test_exact_enumeration_matches_monte_carlo(layout_d3):
    p = 1e-2
    exact = exact_code_capacity_ler(layout_d3, p, p)
    batch = sample_code_capacity(layout_d3, p, p, 100_000, seed=2026)
    stderr = max(batch.stderr_ler, math.sqrt(exact * (1 - exact) / batch.shots))
    assert abs(batch.ler - exact) < 3 * stderr


def test_exact_sector_symmetry(layout_d3):
    # The rotated code treats the two sectors symmetrically.
    qx = exact_sector_flip_probability(layout_d3, 2e-2, "x")
    qz = exact_sector_flip_probability(layout_d3, 2e-2, "z")
    assert qx == pytest.approx(qz, rel=1e-9)


def test_exact_enumeration_rejects_large_d(layout_d5):
    with pytest.raises(ValueError, match="d=3"):
        exact_sector_flip_probability(layout_d5, 1e-2, "x")


def test_subthreshold_scaling_d5_below_d3(layout_d3, layout_d5):
    p = 5e-3
    b3 = sample_code_capacity(layout_d3, p, p, 100_000, seed=5)
    b5 = sample_code_capacity(layout_d5, p, p, 100_000, seed=5)
    separation = 3 * math.sqrt(b3.stderr_ler**2 + b5.stderr_ler**2)
    assert b5.ler < b3.ler - separation


def test_dfr_linear_in_p_at_small_p(layout_d3):
    lo = sample_code_capacity(layout_d3, 1e-3, 1e-3, 1_000_000, seed=9)
    hi = sample_code_capacity(layout_d3, 2e-3, 2e-3, 1_000_000, seed=10)
    assert 1.8 <= hi.dfr / lo.dfr <= 2.2


def test_dataset_generation_and_monotonicity():
    grid = list(np.logspace(-3, math.log10(3e-2), 8))
    ds = generate_fit_dataset(3, grid, 10_000, seed=123)
    points = sorted(list(ds.points) + list(ds.dropped), key=lambda pt: pt.p)
    for a, b in zip(points, points[1:]):
        slack = 3 * math.sqrt(a.stderr_ler**2 + b.stderr_ler**2)
        assert b.ler >= a.ler - slack
    again = generate_fit_dataset(3, grid, 10_000, seed=123)
    assert dataset_csv_lines(again) == dataset_csv_lines(ds)


def test_dataset_validation():
    with pytest.raises(ValueError):
        generate_fit_dataset(3, [], 10_000, seed=1)
    with pytest.raises(ValueError):
        generate_fit_dataset(3, [0.2], 10_000, seed=1)
    with pytest.raises(ValueError):
        generate_fit_dataset(3, [1e-3], 5_000, seed=1)


def test_dataset_csv_round_trip():
    grid = [5e-3, 1e-2, 2e-2]
    ds = generate_fit_dataset(3, grid, 10_000, seed=3)
    text = "\n".join(dataset_csv_lines(ds)) + "\n"
    samples = read_dataset_csv(text)
    assert samples == [(pt.dfr, pt.ler) for pt in ds.points]
    with pytest.raises(ValueError, match="header"):
        read_dataset_csv("x,y\n1,2\n")
