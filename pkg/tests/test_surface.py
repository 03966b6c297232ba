import pytest

from driftqec.surface import (
    _build_sector_decoder,
    build_rotated_code,
    decode_min_weight,
    syndrome_bits,
)


@pytest.mark.parametrize("d,n_data,n_detectors", [(3, 9, 8), (5, 25, 24), (7, 49, 48)])
def test_layout_counts(d, n_data, n_detectors):
    layout = build_rotated_code(d)
    assert layout.n_data == n_data
    assert layout.detector_count == n_detectors
    assert len(layout.x_stabilizers) == n_detectors // 2
    assert len(layout.z_stabilizers) == n_detectors // 2
    assert len(layout.logical_x) == d
    assert len(layout.logical_z) == d


@pytest.mark.parametrize("d", [2, 4, 1, 9])
def test_layout_rejects_bad_distance(d):
    with pytest.raises(ValueError, match="odd"):
        build_rotated_code(d)


@pytest.mark.parametrize("d", [3, 5, 7])
def test_commutation_invariants(d):
    layout = build_rotated_code(d)
    for xs in layout.x_stabilizers:
        for zs in layout.z_stabilizers:
            assert len(xs & zs) % 2 == 0
        assert len(xs & layout.logical_z) % 2 == 0
    for zs in layout.z_stabilizers:
        assert len(zs & layout.logical_x) % 2 == 0
    assert len(layout.logical_x & layout.logical_z) % 2 == 1


def test_center_qubit_fires_two_detectors(layout_d3):
    center = 4  # (1, 1)
    z_hits = sum(1 for s in layout_d3.z_stabilizers if center in s)
    x_hits = sum(1 for s in layout_d3.x_stabilizers if center in s)
    assert (z_hits, x_hits) == (2, 2)
    syn = syndrome_bits(layout_d3, {center}, "x")
    assert sum(syn) == 2
    correction = decode_min_weight(layout_d3, syn, "x")
    assert correction == frozenset({center})


def test_zero_syndrome_empty_correction(layout_d3, layout_d5):
    for layout, n in ((layout_d3, 4), (layout_d5, 12)):
        assert decode_min_weight(layout, [0] * n, "x") == frozenset()
        assert decode_min_weight(layout, [0] * n, "z") == frozenset()


def test_malformed_syndrome_rejected(layout_d3):
    with pytest.raises(ValueError, match="length"):
        decode_min_weight(layout_d3, [0, 1], "x")
    with pytest.raises(ValueError, match="error_kind"):
        decode_min_weight(layout_d3, [0, 0, 0, 0], "y")


@pytest.mark.parametrize("kind", ["x", "z"])
def test_d3_decoder_exact_minimum_weight(layout_d3, kind):
    """Every one of the 2^9 error patterns decodes to a sound correction of
    weight no greater than the error itself."""
    decoder = layout_d3.z_decoder if kind == "x" else layout_d3.x_decoder
    for pattern in range(512):
        syn = decoder.syndrome_int(pattern)
        correction = decoder.decode(syn)
        assert decoder.syndrome_int(correction) == syn
        assert bin(correction).count("1") <= bin(pattern).count("1")


@pytest.mark.parametrize("kind", ["x", "z"])
def test_d3_matching_agrees_with_lookup(layout_d3, kind):
    stabs = list(layout_d3.z_stabilizers if kind == "x" else layout_d3.x_stabilizers)
    matcher = _build_sector_decoder(3, stabs, force_matching=True)
    table = layout_d3.z_decoder if kind == "x" else layout_d3.x_decoder
    for syn in range(16):
        via_match = matcher.decode(syn)
        assert matcher.syndrome_int(via_match) == syn
        assert bin(via_match).count("1") == bin(table.decode(syn)).count("1")


@pytest.mark.parametrize("d", [5, 7])
@pytest.mark.parametrize("kind", ["x", "z"])
def test_matching_decoder_sound_on_random_errors(d, kind):
    import numpy as np

    layout = build_rotated_code(d)
    decoder = layout.z_decoder if kind == "x" else layout.x_decoder
    rng = np.random.default_rng(7)
    for _ in range(300):
        weight = int(rng.integers(0, 8))
        qubits = rng.choice(layout.n_data, size=weight, replace=False)
        pattern = 0
        for q in qubits:
            pattern |= 1 << int(q)
        syn = decoder.syndrome_int(pattern)
        correction = decoder.decode(syn)
        assert decoder.syndrome_int(correction) == syn


def test_greedy_pairing_sound_on_many_defects():
    # more than 10 defects forces the greedy nearest-pair path
    import numpy as np

    layout = build_rotated_code(7)
    decoder = layout.z_decoder
    rng = np.random.default_rng(3)
    exercised = 0
    for _ in range(200):
        qubits = rng.choice(layout.n_data, size=14, replace=False)
        pattern = 0
        for q in qubits:
            pattern |= 1 << int(q)
        syn = decoder.syndrome_int(pattern)
        if bin(syn).count("1") <= 10:
            continue
        exercised += 1
        correction = decoder.decode(syn)
        assert decoder.syndrome_int(correction) == syn
    assert exercised > 20


def test_logical_support_has_zero_syndrome(layout_d3):
    syn = syndrome_bits(layout_d3, layout_d3.logical_x, "x")
    assert sum(syn) == 0
    syn = syndrome_bits(layout_d3, layout_d3.logical_z, "z")
    assert sum(syn) == 0
