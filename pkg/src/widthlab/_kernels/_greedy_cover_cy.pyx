# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel for greedy weighted ball-cover selection.

Lockstep twin of ``greedy_cover_py.greedy_cover``; see that module for the
full contract. The selection sequence, including float tie handling, must be
bit-identical to the pure-Python version — tests compare the two directly.
"""

import numpy as np


cdef inline bint _less(double[::1] nr, long long[::1] center, double[::1] radius,
                       long long a, long long b):
    # Lexicographic on (-gain/cost, center, radius, candidate index).
    if nr[a] != nr[b]:
        return nr[a] < nr[b]
    if center[a] != center[b]:
        return center[a] < center[b]
    if radius[a] != radius[b]:
        return radius[a] < radius[b]
    return a < b


cdef inline void _sift_down(long long[::1] heap, Py_ssize_t hs, Py_ssize_t pos,
                            double[::1] nr, long long[::1] center, double[::1] radius):
    cdef long long moving = heap[pos]
    cdef Py_ssize_t child
    while True:
        child = 2 * pos + 1
        if child >= hs:
            break
        if child + 1 < hs and _less(nr, center, radius, heap[child + 1], heap[child]):
            child += 1
        if _less(nr, center, radius, heap[child], moving):
            heap[pos] = heap[child]
            pos = child
        else:
            break
    heap[pos] = moving


cdef inline void _sift_up(long long[::1] heap, Py_ssize_t pos,
                          double[::1] nr, long long[::1] center, double[::1] radius):
    cdef long long moving = heap[pos]
    cdef Py_ssize_t parent
    while pos > 0:
        parent = (pos - 1) // 2
        if _less(nr, center, radius, moving, heap[parent]):
            heap[pos] = heap[parent]
            pos = parent
        else:
            break
    heap[pos] = moving


def greedy_cover(items, start, length, cost, center, radius, m):
    items = np.ascontiguousarray(items, dtype=np.int64)
    start = np.ascontiguousarray(start, dtype=np.int64)
    length = np.ascontiguousarray(length, dtype=np.int64)
    cost = np.ascontiguousarray(cost, dtype=np.float64)
    center = np.ascontiguousarray(center, dtype=np.int64)
    radius = np.ascontiguousarray(radius, dtype=np.float64)

    cdef long long[::1] items_v = items
    cdef long long[::1] start_v = start
    cdef long long[::1] length_v = length
    cdef double[::1] cost_v = cost
    cdef long long[::1] center_v = center
    cdef double[::1] radius_v = radius

    cdef Py_ssize_t nc = cost_v.shape[0]
    cdef Py_ssize_t mm = m
    if mm == 0:
        return np.empty(0, dtype=np.int64)

    covered_arr = np.zeros(mm, dtype=np.uint8)
    nr_arr = np.empty(max(nc, 1), dtype=np.float64)
    heap_arr = np.empty(max(nc, 1), dtype=np.int64)
    chosen_arr = np.empty(mm, dtype=np.int64)
    cdef unsigned char[::1] covered = covered_arr
    cdef double[::1] nr = nr_arr
    cdef long long[::1] heap = heap_arr
    cdef long long[::1] chosen = chosen_arr

    cdef Py_ssize_t hs = 0, i, k, lo, hi, pos, nchosen = 0
    cdef Py_ssize_t remaining = mm, gain
    cdef long long cand

    for i in range(nc):
        if length_v[i] > 0:
            nr[i] = -(<double> length_v[i]) / cost_v[i]
            heap[hs] = i
            hs += 1
    for pos in range(hs // 2 - 1, -1, -1):
        _sift_down(heap, hs, pos, nr, center_v, radius_v)

    while remaining > 0:
        if hs == 0:
            raise RuntimeError("cover infeasible: candidates exhausted with targets uncovered")
        cand = heap[0]
        hs -= 1
        if hs > 0:
            heap[0] = heap[hs]
            _sift_down(heap, hs, 0, nr, center_v, radius_v)

        lo = start_v[cand]
        hi = lo + length_v[cand]
        gain = 0
        for k in range(lo, hi):
            if covered[items_v[k]] == 0:
                gain += 1
        if gain == 0:
            continue
        nr[cand] = -(<double> gain) / cost_v[cand]
        if hs > 0 and _less(nr, center_v, radius_v, heap[0], cand):
            heap[hs] = cand
            hs += 1
            _sift_up(heap, hs - 1, nr, center_v, radius_v)
            continue
        chosen[nchosen] = cand
        nchosen += 1
        for k in range(lo, hi):
            covered[items_v[k]] = 1
        remaining -= gain

    return chosen_arr[:nchosen].copy()
