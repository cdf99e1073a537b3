"""Pure-Python reference kernel for greedy weighted ball-cover selection.

The compiled twin in ``_greedy_cover_cy.pyx`` implements the identical
selection rule; both must produce byte-identical choices on the same input
(this is asserted by tests). Keep the two in lockstep when editing.
"""

import heapq

import numpy as np


def greedy_cover(items, start, length, cost, center, radius, m):
    """Select a cover of ``m`` target slots from candidate coverage lists.

    Candidates are balls; candidate ``i`` covers the target-local indices
    ``items[start[i] : start[i] + length[i]]`` at price ``cost[i]``. The rule
    is classic weighted set-cover greedy: repeatedly take the candidate
    maximizing (newly covered)/cost, ties broken by lower ``center`` id then
    smaller ``radius``. Gains only shrink as coverage grows, so stale heap
    keys are optimistic and lazy re-evaluation is exact.

    Returns the chosen candidate indices in selection order (int64 array).
    Raises RuntimeError if the candidates cannot cover all slots.
    """
    nc = len(cost)
    chosen = []
    if m == 0:
        return np.empty(0, dtype=np.int64)
    covered = np.zeros(m, dtype=bool)
    heap = []
    for i in range(nc):
        g = int(length[i])
        if g > 0:
            heap.append((-(g / cost[i]), int(center[i]), float(radius[i]), i))
    heapq.heapify(heap)
    remaining = m
    while remaining > 0:
        if not heap:
            raise RuntimeError("cover infeasible: candidates exhausted with targets uncovered")
        nr, c, r, i = heapq.heappop(heap)
        lo = int(start[i])
        hi = lo + int(length[i])
        gain = 0
        for k in range(lo, hi):
            if not covered[items[k]]:
                gain += 1
        if gain == 0:
            continue
        key = (-(gain / cost[i]), c, r, i)
        if heap and key > heap[0]:
            heapq.heappush(heap, key)
            continue
        chosen.append(i)
        for k in range(lo, hi):
            covered[items[k]] = True
        remaining -= gain
    return np.asarray(chosen, dtype=np.int64)
