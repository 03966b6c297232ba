"""Pure-Python cycle-loop kernel.

Reference implementation of the `advance` contract. The compiled kernel
mirrors this file operation for operation (including the order of random
draws and the exact floating-point expressions), so both backends produce
bit-identical runs from the same seed.

Per cycle, in order:
  1. in-transit qubits move one step closer to arrival;
  2. each tile (by id) records its phase and ground truth, forms a
     prediction from the buffer (before pushing), then - unless dark -
     draws one binomial DFR sample and pushes it;
  3. qubit truth rows are recorded (worst of source/target in transit);
  4. phase timers advance: recalibration completion clears the buffer,
     resets the trace cursor, and starts the k-cycle warm-up;
  5. if any active tile raised a breach this cycle, control returns to
     the driver for same-cycle remap scheduling.
"""

from __future__ import annotations

import math

PHASE_ACTIVE = 0
PHASE_AVAILABLE = 1
PHASE_RECALIBRATING = 2
PHASE_WARM_UP = 3
PHASE_DISABLED = 4


def advance(plan, state, records, start_cycle: int, stop_cycle: int) -> int:
    """Run cycles [start_cycle, stop_cycle); stop early on an active breach.

    Returns the cycle at which a breach awaits handling, or stop_cycle.
    """
    n_tiles = plan.n_tiles
    n_qubits = plan.n_qubits
    k = plan.k
    bits = plan.bits_per_cycle
    log_a = plan.log_A
    b = plan.b
    var_log_a = plan.sigma_logA * plan.sigma_logA
    var_b = plan.sigma_b * plan.sigma_b
    z = plan.z
    mult = plan.multiplier
    target = plan.target_ler
    floor_used = plan.floor_used
    table_len = plan.ler_table.shape[1]

    phase = state.phase
    timer = state.timer
    cursor = state.cursor
    buf = state.buffer
    buf_pos = state.buf_pos
    buf_count = state.buf_count
    buf_sum = state.buf_sum
    qubit_tile = state.qubit_tile
    transit_remaining = state.transit_remaining
    transit_src = state.transit_src
    trace_row = plan.trace_row
    ler_table = plan.ler_table
    dfr_table = plan.dfr_table
    binomial = state.rng.binomial

    rec_true = records.true_ler
    rec_obs = records.obs_dfr
    rec_used = records.used
    rec_valid = records.valid
    rec_breach = records.breach
    rec_phase = records.phase
    q_true = records.qubit_true
    q_tile = records.qubit_tile
    q_above = records.qubit_above

    for cycle in range(start_cycle, stop_cycle):
        for q in range(n_qubits):
            if transit_remaining[q] > 0:
                transit_remaining[q] -= 1
                if transit_remaining[q] == 0:
                    transit_src[q] = -1

        breach_seen = False
        for t in range(n_tiles):
            ph = int(phase[t])
            idx = int(cursor[t])
            if idx >= table_len:
                idx = table_len - 1
            row = trace_row[t]
            true_ler = float(ler_table[row, idx])
            rec_true[cycle, t] = true_ler
            rec_phase[cycle, t] = ph
            if ph == PHASE_DISABLED:
                continue

            count = int(buf_count[t])
            mean = (buf_sum[t] / count) if count else 0.0
            if mean > 0.0:
                lg = math.log10(mean)
                half = z * math.sqrt(var_log_a + lg * lg * var_b)
                used = 10.0 ** (log_a + b * lg + mult * half)
                if used > 1.0:
                    used = 1.0
                elif used < 1e-300:
                    used = 1e-300
                valid = count == k
            else:
                used = floor_used
                valid = False
            rec_used[cycle, t] = used
            if valid:
                rec_valid[cycle, t] = 1
                if used > target:
                    rec_breach[cycle, t] = 1
                    if ph == PHASE_ACTIVE:
                        breach_seen = True

            if ph != PHASE_RECALIBRATING:
                true_dfr = float(dfr_table[row, idx])
                obs = float(binomial(bits, true_dfr)) / bits
                rec_obs[cycle, t] = obs
                if count < k:
                    buf[t, count] = obs
                    buf_sum[t] = buf_sum[t] + obs
                    buf_count[t] = count + 1
                else:
                    pos = int(buf_pos[t])
                    old = buf[t, pos]
                    buf[t, pos] = obs
                    buf_sum[t] = buf_sum[t] + obs - old
                    buf_pos[t] = (pos + 1) % k
            cursor[t] = idx + 1

        for q in range(n_qubits):
            dst = int(qubit_tile[q])
            truth = rec_true[cycle, dst]
            if transit_remaining[q] > 0:
                src_truth = rec_true[cycle, int(transit_src[q])]
                if src_truth > truth:
                    truth = src_truth
            q_true[cycle, q] = truth
            q_tile[cycle, q] = dst
            if truth > target:
                q_above[cycle, q] = 1

        for t in range(n_tiles):
            ph = phase[t]
            if ph == PHASE_RECALIBRATING:
                timer[t] -= 1
                if timer[t] == 0:
                    phase[t] = PHASE_WARM_UP
                    timer[t] = k
                    buf_count[t] = 0
                    buf_pos[t] = 0
                    buf_sum[t] = 0.0
                    cursor[t] = 0
            elif ph == PHASE_WARM_UP:
                timer[t] -= 1
                if timer[t] == 0:
                    phase[t] = PHASE_AVAILABLE

        if breach_seen:
            return cycle
    return stop_cycle
