# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled cycle-loop kernel.

Mirrors driftqec._kernels._pure operation for operation: same order of
random draws (numpy's binomial sampler on the shared bit generator) and
the same floating-point expressions, so runs are bit-identical across the
two backends. Keep the two files in sync; the equivalence test enforces
it.
"""

from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport log10, pow, sqrt
from libc.stdint cimport int64_t, uint8_t

from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport binomial_t, random_binomial

import numpy as np

cdef int PHASE_ACTIVE = 0
cdef int PHASE_AVAILABLE = 1
cdef int PHASE_RECALIBRATING = 2
cdef int PHASE_WARM_UP = 3
cdef int PHASE_DISABLED = 4


def advance(plan, state, records, Py_ssize_t start_cycle, Py_ssize_t stop_cycle):
    """Run cycles [start_cycle, stop_cycle); stop early on an active breach."""
    cdef Py_ssize_t n_tiles = plan.n_tiles
    cdef Py_ssize_t n_qubits = plan.n_qubits
    cdef int64_t k = plan.k
    cdef int64_t bits = plan.bits_per_cycle
    cdef double log_a = plan.log_A
    cdef double b = plan.b
    cdef double sigma_log_a = plan.sigma_logA
    cdef double sigma_b = plan.sigma_b
    cdef double var_log_a = sigma_log_a * sigma_log_a
    cdef double var_b = sigma_b * sigma_b
    cdef double z = plan.z
    cdef double mult = plan.multiplier
    cdef double target = plan.target_ler
    cdef double floor_used = plan.floor_used

    cdef uint8_t[::1] phase = state.phase
    cdef int64_t[::1] timer = state.timer
    cdef int64_t[::1] cursor = state.cursor
    cdef double[:, ::1] buf = state.buffer
    cdef int64_t[::1] buf_pos = state.buf_pos
    cdef int64_t[::1] buf_count = state.buf_count
    cdef double[::1] buf_sum = state.buf_sum
    cdef int64_t[::1] qubit_tile = state.qubit_tile
    cdef int64_t[::1] transit_remaining = state.transit_remaining
    cdef int64_t[::1] transit_src = state.transit_src

    cdef int64_t[::1] trace_row = plan.trace_row
    cdef double[:, ::1] ler_table = plan.ler_table
    cdef double[:, ::1] dfr_table = plan.dfr_table
    cdef Py_ssize_t table_len = ler_table.shape[1]

    cdef double[:, ::1] rec_true = records.true_ler
    cdef double[:, ::1] rec_obs = records.obs_dfr
    cdef double[:, ::1] rec_used = records.used
    cdef uint8_t[:, ::1] rec_valid = records.valid
    cdef uint8_t[:, ::1] rec_breach = records.breach
    cdef uint8_t[:, ::1] rec_phase = records.phase
    cdef double[:, ::1] q_true = records.qubit_true
    cdef int64_t[:, ::1] q_tile = records.qubit_tile
    cdef uint8_t[:, ::1] q_above = records.qubit_above

    cdef bitgen_t *bitgen = <bitgen_t *> PyCapsule_GetPointer(
        state.rng.bit_generator.capsule, "BitGenerator"
    )
    cdef binomial_t binomial_info
    binomial_info.has_binomial = 0

    cdef Py_ssize_t cycle, t, q, idx, row, pos
    cdef int64_t count
    cdef int ph
    cdef bint breach_seen, valid
    cdef double true_ler, true_dfr, mean, lg, half, used, obs, old, truth, src_truth

    for cycle in range(start_cycle, stop_cycle):
        for q in range(n_qubits):
            if transit_remaining[q] > 0:
                transit_remaining[q] -= 1
                if transit_remaining[q] == 0:
                    transit_src[q] = -1

        breach_seen = False
        for t in range(n_tiles):
            ph = phase[t]
            idx = cursor[t]
            if idx >= table_len:
                idx = table_len - 1
            row = trace_row[t]
            true_ler = ler_table[row, idx]
            rec_true[cycle, t] = true_ler
            rec_phase[cycle, t] = ph
            if ph == PHASE_DISABLED:
                continue

            count = buf_count[t]
            mean = (buf_sum[t] / <double> count) if count else 0.0
            if mean > 0.0:
                lg = log10(mean)
                half = z * sqrt(var_log_a + lg * lg * var_b)
                used = pow(10.0, log_a + b * lg + mult * half)
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
                true_dfr = dfr_table[row, idx]
                obs = <double> random_binomial(bitgen, true_dfr, bits, &binomial_info) \
                    / <double> bits
                rec_obs[cycle, t] = obs
                if count < k:
                    buf[t, count] = obs
                    buf_sum[t] = buf_sum[t] + obs
                    buf_count[t] = count + 1
                else:
                    pos = buf_pos[t]
                    old = buf[t, pos]
                    buf[t, pos] = obs
                    buf_sum[t] = buf_sum[t] + obs - old
                    buf_pos[t] = (pos + 1) % k
            cursor[t] = idx + 1

        for q in range(n_qubits):
            truth = rec_true[cycle, qubit_tile[q]]
            if transit_remaining[q] > 0:
                src_truth = rec_true[cycle, transit_src[q]]
                if src_truth > truth:
                    truth = src_truth
            q_true[cycle, q] = truth
            q_tile[cycle, q] = qubit_tile[q]
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
