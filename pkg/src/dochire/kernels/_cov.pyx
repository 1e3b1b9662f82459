# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of the coverage-greedy kernel.

Must stay step-for-step identical to pyimpl.coverage_greedy_py; the caller
guarantees every product fits signed 64-bit (see the dispatch gate).
"""

from libc.stdlib cimport calloc, free

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline long long _union_popcount(const cnp.uint64_t[:, ::1] masks,
                                      Py_ssize_t row,
                                      unsigned long long* covered,
                                      Py_ssize_t words) nogil:
    cdef Py_ssize_t w
    cdef long long total = 0
    for w in range(words):
        total += __builtin_popcountll(masks[row, w] | covered[w])
    return total


def coverage_greedy_packed(cnp.uint64_t[:, ::1] masks, bids_list, pool_list,
                           int rule, long long budget_num, int observer):
    cdef cnp.int64_t[::1] bids = np.ascontiguousarray(bids_list, dtype=np.int64)
    cdef cnp.int64_t[::1] pool = np.ascontiguousarray(pool_list, dtype=np.int64)
    cdef Py_ssize_t words = masks.shape[1]
    cdef Py_ssize_t k = pool.shape[0]
    cdef Py_ssize_t pos, w, idx, best_pos
    cdef long long m, best_m, best_bid, informed, remaining, obs_m, obs_with
    cdef long long factor
    cdef bint ok
    cdef unsigned long long* covered = <unsigned long long*> calloc(max(words, 1), 8)
    cdef char* alive = <char*> calloc(max(k, 1), 1)
    if covered == NULL or alive == NULL:
        free(covered)
        free(alive)
        raise MemoryError()

    order = []
    steps = []
    loser = None
    informed = 0
    remaining = budget_num
    cdef Py_ssize_t alive_count = k
    for pos in range(k):
        alive[pos] = 1

    try:
        while alive_count > 0:
            best_pos = -1
            best_m = 0
            best_bid = 1
            for pos in range(k):
                if not alive[pos]:
                    continue
                idx = pool[pos]
                m = _union_popcount(masks, idx, covered, words) - informed
                if best_pos < 0 or m * best_bid > best_m * bids[idx]:
                    best_pos = pos
                    best_m = m
                    best_bid = bids[idx]
            idx = pool[best_pos]
            alive[best_pos] = 0
            alive_count -= 1
            m = best_m

            if rule == 0:
                ok = best_bid <= remaining
            else:
                factor = 2 if rule == 1 else 1
                ok = m > 0 and factor * best_bid * (m + informed) <= budget_num * m

            if observer >= 0:
                obs_with = _union_popcount(masks, observer, covered, words)
                obs_m = obs_with - informed
            else:
                obs_with = 0
                obs_m = 0
            step = (idx, m, informed, obs_m, obs_with)

            if ok:
                order.append(idx)
                steps.append(step)
                for w in range(words):
                    covered[w] |= masks[idx, w]
                informed = 0
                for w in range(words):
                    informed += __builtin_popcountll(covered[w])
                if rule == 0:
                    remaining -= best_bid
            elif rule == 0:
                continue
            else:
                loser = step
                break

        informed_indices = []
        for w in range(words):
            if covered[w] == 0:
                continue
            for pos in range(64):
                if covered[w] & ((<unsigned long long> 1) << pos):
                    informed_indices.append(w * 64 + pos)
        return order, steps, loser, informed, informed_indices
    finally:
        free(covered)
        free(alive)
