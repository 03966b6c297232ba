"""Rotated surface code layouts and minimum-weight decoding at small distance.

Data qubits live on a d x d grid, indexed q = row*d + col. Stabilizers are
the checkerboard faces of the grid: X-type faces detect Z errors, Z-type
faces detect X errors. The logical Z operator is the top row of data
qubits; the logical X operator is the left column.

Decoding is exact at d=3 (precomputed minimum-weight table over all 2^9
error patterns per sector) and defect matching at d=5,7 (exhaustive
subset pairing for up to 10 defects, greedy nearest-pair beyond).
"""

from __future__ import annotations

from dataclasses import dataclass, field

_EXHAUSTIVE_DEFECT_LIMIT = 10


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _parity(x: int) -> int:
    return _popcount(x) & 1


@dataclass(frozen=True)
class _SectorDecoder:
    """Minimum-weight decoder for one error sector (X errors or Z errors).

    `stab_masks[s]` is the data-qubit mask of stabilizer s of this sector.
    Exactly one of `lookup` (d=3) or the matching tables is populated.
    """

    n_qubits: int
    stab_masks: tuple[int, ...]
    lookup: tuple[int, ...] | None
    pair_dist: tuple[tuple[int, ...], ...] = ()
    pair_path: tuple[tuple[int, ...], ...] = ()
    boundary_dist: tuple[int, ...] = ()
    boundary_path: tuple[int, ...] = ()

    def syndrome_int(self, error_mask: int) -> int:
        syn = 0
        for s, mask in enumerate(self.stab_masks):
            if _parity(error_mask & mask):
                syn |= 1 << s
        return syn

    def decode(self, syndrome: int) -> int:
        if self.lookup is not None:
            return self.lookup[syndrome]
        return self._decode_matching(syndrome)

    def _decode_matching(self, syndrome: int) -> int:
        defects = [s for s in range(len(self.stab_masks)) if syndrome >> s & 1]
        if not defects:
            return 0
        if len(defects) <= _EXHAUSTIVE_DEFECT_LIMIT:
            pairs = self._best_pairing(defects)
        else:
            pairs = self._greedy_pairing(defects)
        correction = 0
        for a, b in pairs:
            correction ^= self.pair_path[a][b] if b >= 0 else self.boundary_path[a]
        return correction

    def _best_pairing(self, defects: list[int]) -> list[tuple[int, int]]:
        """Exact minimum-weight pairing by DP over defect subsets.

        Each defect pairs with another defect or with the boundary; the
        boundary may absorb any number of defects.
        """
        m = len(defects)
        full = (1 << m) - 1
        cost: dict[int, float] = {0: 0.0}
        choice: dict[int, tuple[int, int]] = {}

        def solve(mask: int) -> float:
            if mask in cost:
                return cost[mask]
            i = (mask & -mask).bit_length() - 1
            rest = mask ^ (1 << i)
            best = self.boundary_dist[defects[i]] + solve(rest)
            best_choice = (i, -1)
            j_bits = rest
            while j_bits:
                j = (j_bits & -j_bits).bit_length() - 1
                j_bits &= j_bits - 1
                c = self.pair_dist[defects[i]][defects[j]] + solve(rest ^ (1 << j))
                if c < best:
                    best = c
                    best_choice = (i, j)
            cost[mask] = best
            choice[mask] = best_choice
            return best

        solve(full)
        pairs: list[tuple[int, int]] = []
        mask = full
        while mask:
            i, j = choice[mask]
            if j < 0:
                pairs.append((defects[i], -1))
                mask ^= 1 << i
            else:
                pairs.append((defects[i], defects[j]))
                mask ^= (1 << i) | (1 << j)
        return pairs

    def _greedy_pairing(self, defects: list[int]) -> list[tuple[int, int]]:
        remaining = list(defects)
        pairs: list[tuple[int, int]] = []
        while remaining:
            best_cost = None
            best_pair = None
            for ai, a in enumerate(remaining):
                if best_cost is None or self.boundary_dist[a] < best_cost:
                    best_cost = self.boundary_dist[a]
                    best_pair = (ai, -1)
                for bi in range(ai + 1, len(remaining)):
                    c = self.pair_dist[a][remaining[bi]]
                    if c < best_cost:
                        best_cost = c
                        best_pair = (ai, bi)
            ai, bi = best_pair
            if bi < 0:
                pairs.append((remaining[ai], -1))
                del remaining[ai]
            else:
                pairs.append((remaining[ai], remaining[bi]))
                del remaining[bi], remaining[ai]
        return pairs


@dataclass(frozen=True)
class CodeLayout:
    """Distance-d rotated surface code with per-sector decoders."""

    d: int
    data_coords: tuple[tuple[int, int], ...]
    x_stabilizers: tuple[frozenset[int], ...]
    z_stabilizers: tuple[frozenset[int], ...]
    logical_x: frozenset[int]
    logical_z: frozenset[int]
    x_decoder: _SectorDecoder = field(repr=False)
    z_decoder: _SectorDecoder = field(repr=False)

    @property
    def n_data(self) -> int:
        return self.d * self.d

    @property
    def detector_count(self) -> int:
        return self.d * self.d - 1

    @property
    def logical_x_mask(self) -> int:
        return _indices_to_mask(self.logical_x)

    @property
    def logical_z_mask(self) -> int:
        return _indices_to_mask(self.logical_z)


def _indices_to_mask(indices) -> int:
    mask = 0
    for q in indices:
        mask |= 1 << q
    return mask


def _build_faces(d: int) -> tuple[list[frozenset[int]], list[frozenset[int]]]:
    """Checkerboard faces: Z-type when (i+j) even, X-type otherwise.

    Bulk faces are always kept; two-qubit boundary faces survive only on
    the top/bottom rows (X) or left/right columns (Z).
    """
    x_stabs: list[frozenset[int]] = []
    z_stabs: list[frozenset[int]] = []
    for i in range(d + 1):
        for j in range(d + 1):
            qubits = frozenset(
                r * d + c
                for r in (i - 1, i)
                for c in (j - 1, j)
                if 0 <= r < d and 0 <= c < d
            )
            is_z = (i + j) % 2 == 0
            if len(qubits) == 4:
                (z_stabs if is_z else x_stabs).append(qubits)
            elif len(qubits) == 2:
                if is_z and j in (0, d):
                    z_stabs.append(qubits)
                elif not is_z and i in (0, d):
                    x_stabs.append(qubits)
    return x_stabs, z_stabs


def _build_lookup(n_qubits: int, stab_masks: tuple[int, ...]) -> tuple[int, ...]:
    """Minimum-weight correction per syndrome, by exhausting all error patterns.

    Ties break toward the numerically smallest mask so the table is
    deterministic.
    """
    syndrome_of = [0] * (1 << n_qubits)
    for s, mask in enumerate(stab_masks):
        for pattern in range(1 << n_qubits):
            if _parity(pattern & mask):
                syndrome_of[pattern] |= 1 << s
    table: list[int | None] = [None] * (1 << len(stab_masks))
    for pattern in range(1 << n_qubits):
        syn = syndrome_of[pattern]
        cur = table[syn]
        if cur is None or _popcount(pattern) < _popcount(cur):
            table[syn] = pattern
    if any(entry is None for entry in table):
        raise AssertionError("lookup table has unreachable syndromes")
    return tuple(table)  # type: ignore[arg-type]


def _build_matching_tables(
    n_stabs: int, adjacency: list[list[tuple[int, int]]], boundary_edges: list[list[int]]
):
    """All-pairs shortest paths on the defect graph, as qubit masks.

    `adjacency[s]` lists (neighbor stabilizer, connecting qubit);
    `boundary_edges[s]` lists qubits linking s straight to the boundary.
    Node -1 is the boundary. BFS expands in index order, so reconstructed
    paths are deterministic.
    """
    inf = 10**9
    pair_dist = [[inf] * n_stabs for _ in range(n_stabs)]
    pair_path = [[0] * n_stabs for _ in range(n_stabs)]
    boundary_dist = [inf] * n_stabs
    boundary_path = [0] * n_stabs

    for start in range(n_stabs):
        dist = {start: 0}
        via: dict[int, tuple[int, int]] = {}
        frontier = [start]
        while frontier:
            nxt: list[int] = []
            for node in frontier:
                if node == -1:
                    continue
                steps = [(-1, q) for q in boundary_edges[node]] + adjacency[node]
                for other, qubit in steps:
                    if other not in dist:
                        dist[other] = dist[node] + 1
                        via[other] = (node, qubit)
                        nxt.append(other)
            frontier = nxt

        def path_mask(node: int) -> int:
            mask = 0
            while node != start:
                node, qubit = via[node]
                mask ^= 1 << qubit
            return mask

        for target in range(n_stabs):
            if target in dist:
                pair_dist[start][target] = dist[target]
                pair_path[start][target] = path_mask(target)
        if -1 in dist:
            boundary_dist[start] = dist[-1]
            boundary_path[start] = path_mask(-1)

    return (
        tuple(tuple(row) for row in pair_dist),
        tuple(tuple(row) for row in pair_path),
        tuple(boundary_dist),
        tuple(boundary_path),
    )


def _build_sector_decoder(
    d: int, stabs: list[frozenset[int]], force_matching: bool = False
) -> _SectorDecoder:
    n_qubits = d * d
    stab_masks = tuple(_indices_to_mask(s) for s in stabs)
    if d == 3 and not force_matching:
        return _SectorDecoder(n_qubits=n_qubits, stab_masks=stab_masks,
                              lookup=_build_lookup(n_qubits, stab_masks))

    touching: list[list[int]] = [[] for _ in range(n_qubits)]
    for s, qubits in enumerate(stabs):
        for q in qubits:
            touching[q].append(s)
    adjacency: list[list[tuple[int, int]]] = [[] for _ in range(len(stabs))]
    boundary_edges: list[list[int]] = [[] for _ in range(len(stabs))]
    for q, owners in enumerate(touching):
        if len(owners) == 2:
            a, b = owners
            adjacency[a].append((b, q))
            adjacency[b].append((a, q))
        elif len(owners) == 1:
            boundary_edges[owners[0]].append(q)
    for lst in adjacency:
        lst.sort()

    pair_dist, pair_path, boundary_dist, boundary_path = _build_matching_tables(
        len(stabs), adjacency, boundary_edges
    )
    return _SectorDecoder(
        n_qubits=n_qubits,
        stab_masks=stab_masks,
        lookup=None,
        pair_dist=pair_dist,
        pair_path=pair_path,
        boundary_dist=boundary_dist,
        boundary_path=boundary_path,
    )


def build_rotated_code(d: int) -> CodeLayout:
    """Construct a distance-d rotated surface code layout (d odd, 3..7)."""
    if d % 2 == 0 or not 3 <= d <= 7:
        raise ValueError(f"distance must be odd and within [3, 7], got {d}")
    x_stabs, z_stabs = _build_faces(d)
    x_stabs.sort(key=sorted)
    z_stabs.sort(key=sorted)
    layout = CodeLayout(
        d=d,
        data_coords=tuple((q // d, q % d) for q in range(d * d)),
        x_stabilizers=tuple(x_stabs),
        z_stabilizers=tuple(z_stabs),
        logical_x=frozenset(r * d for r in range(d)),
        logical_z=frozenset(c for c in range(d)),
        x_decoder=_build_sector_decoder(d, x_stabs),
        z_decoder=_build_sector_decoder(d, z_stabs),
    )
    _validate_layout(layout)
    return layout


def _validate_layout(layout: CodeLayout) -> None:
    n = layout.detector_count
    if len(layout.x_stabilizers) != n // 2 or len(layout.z_stabilizers) != n // 2:
        raise AssertionError("stabilizer count mismatch")
    for xs in layout.x_stabilizers:
        for zs in layout.z_stabilizers:
            if len(xs & zs) % 2:
                raise AssertionError("X and Z stabilizers do not commute")
    for xs in layout.x_stabilizers:
        if len(xs & layout.logical_z) % 2:
            raise AssertionError("logical Z does not commute with X stabilizers")
    for zs in layout.z_stabilizers:
        if len(zs & layout.logical_x) % 2:
            raise AssertionError("logical X does not commute with Z stabilizers")
    if len(layout.logical_x & layout.logical_z) % 2 == 0:
        raise AssertionError("logical operators must anticommute")


def decode_min_weight(layout: CodeLayout, syndrome, error_kind: str) -> frozenset[int]:
    """Minimum-weight data-qubit correction for one sector's syndrome.

    `error_kind` selects the error sector being corrected: "x" decodes
    X data errors from the Z-stabilizer syndrome, "z" the converse.
    `syndrome` is a 0/1 sequence ordered like the sector's stabilizers.
    """
    if error_kind == "x":
        decoder, n_stabs = layout.z_decoder, len(layout.z_stabilizers)
    elif error_kind == "z":
        decoder, n_stabs = layout.x_decoder, len(layout.x_stabilizers)
    else:
        raise ValueError(f"error_kind must be 'x' or 'z', got {error_kind!r}")
    bits = list(syndrome)
    if len(bits) != n_stabs:
        raise ValueError(f"syndrome length {len(bits)} != stabilizer count {n_stabs}")
    syn = 0
    for s, bit in enumerate(bits):
        if bit not in (0, 1, False, True):
            raise ValueError(f"syndrome entries must be 0/1, got {bit!r}")
        if bit:
            syn |= 1 << s
    mask = decoder.decode(syn)
    return frozenset(q for q in range(layout.n_data) if mask >> q & 1)


def syndrome_bits(layout: CodeLayout, error_qubits, error_kind: str) -> list[int]:
    """Syndrome (0/1 list) produced by a set of data-qubit errors of one kind."""
    if error_kind not in ("x", "z"):
        raise ValueError(f"error_kind must be 'x' or 'z', got {error_kind!r}")
    decoder = layout.z_decoder if error_kind == "x" else layout.x_decoder
    mask = _indices_to_mask(error_qubits)
    syn = decoder.syndrome_int(mask)
    return [syn >> s & 1 for s in range(len(decoder.stab_masks))]
