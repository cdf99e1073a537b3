"""Hausdorff-content estimates on finite metric spaces.

The n-dimensional content of a target set, with radius cap ``zeta``, is the
cheapest way to cover the target by closed balls:

    min  sum_i radius_i ** n
    over covers by balls with centers in the space and radii in
    [mesh_h, zeta].

Candidate radii per center c form a canonical finite family: the distances
{d(c, p) : p in target, d(c, p) <= zeta} clamped up to the mesh floor, plus
the floor itself. Larger radii never help (they cover the same target
points at higher cost), so the minimum over this family equals the minimum
over all real radii in [mesh_h, zeta].

The mesh floor encodes that a finite h-net cannot certify content below its
resolution: every ball is billed at radius >= mesh_h, so any nonempty target
has content >= mesh_h ** n. A cap zeta < mesh_h is infeasible.

Two estimators share the candidate family:

- ``greedy_content``: weighted set-cover greedy (newly-covered / cost),
  deterministic tie-breaks, runs through the compiled kernel when available.
  Always an upper bound; within the classic 1 + ln(target size) factor of
  the optimum.
- ``exact_content``: branch-and-bound over the same family with exact
  rational arithmetic; minimal over the family, budgeted by target size.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import InfeasibleCoverError, SolverBudgetError
from .metric_core import as_point_set

UNRESTRICTED = math.inf


@dataclass(frozen=True)
class ContentEstimate:
    """A ball cover of a target set together with its billed value.

    ``value`` is ``sum(radius ** n)`` over the cover, summed in cover order.
    ``value_exact`` carries the same sum in exact rational arithmetic when
    the estimator computed one. ``is_upper_bound`` is always true: covers
    witness upper bounds; ``method == 'exact'`` additionally means minimal
    over the candidate family.
    """

    cover: tuple
    value: float
    n: int
    zeta: float
    mesh_floor: float
    method: str
    is_upper_bound: bool = True
    value_exact: Fraction | None = field(default=None, compare=False)

    def to_json_dict(self):
        return {
            "cover": [{"center": int(c), "radius": float(r)} for c, r in self.cover],
            "value": self.value,
            "n": self.n,
            "zeta": "unrestricted" if math.isinf(self.zeta) else self.zeta,
            "mesh_floor": self.mesh_floor,
            "method": self.method,
        }


def empty_estimate(n, zeta, mesh_floor, method="exact"):
    """Zero-value estimate for an empty target (used by separator search)."""
    return ContentEstimate(
        cover=(), value=0.0, n=n, zeta=zeta, mesh_floor=mesh_floor, method=method,
        value_exact=Fraction(0),
    )


def _validate_args(space, target, n, zeta):
    target = as_point_set(target)
    if target.size == 0:
        raise ValueError("target set is empty")
    if target[0] < 0 or target[-1] >= space.size:
        raise ValueError("target contains ids outside the space")
    if not (isinstance(n, int) and n >= 1):
        raise ValueError(f"dimension n must be a positive integer, got {n!r}")
    if zeta < space.mesh_h:
        raise InfeasibleCoverError(
            f"radius cap zeta={zeta:g} is below the mesh floor {space.mesh_h:g}; "
            "no admissible ball exists"
        )
    return target


def _group_candidates(rows, local_ids, d, h, n_centers, presorted=False):
    """Turn (center, target-local id, distance) triples into candidate arrays.

    Entries are sorted by (center, distance, id); one candidate per distinct
    clamped radius per center, covering the row prefix with d <= radius.
    Returns (items, start, length, center, radius).
    """
    if not presorted:
        order = np.lexsort((local_ids, d, rows))
        rows = rows[order]
        local_ids = local_ids[order]
        d = d[order]
    clamped = np.maximum(d, h)
    nnz = rows.shape[0]
    if nnz == 0:
        return (
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.float64),
        )
    is_last = np.empty(nnz, dtype=bool)
    is_last[:-1] = (clamped[1:] != clamped[:-1]) | (rows[1:] != rows[:-1])
    is_last[-1] = True
    pos = np.flatnonzero(is_last)
    row_ptr = np.searchsorted(rows, np.arange(n_centers + 1)).astype(np.int64)
    center = rows[pos].astype(np.int64)
    radius = clamped[pos]
    start = row_ptr[center]
    length = pos + 1 - start
    return local_ids.astype(np.int64), start, length.astype(np.int64), center, radius


def _candidate_arrays(space, target, zeta):
    """Canonical candidate family for covering ``target`` with cap ``zeta``."""
    n_pts = space.size
    m = target.size
    h = space.mesh_h
    local_of = np.full(n_pts, -1, dtype=np.int64)
    local_of[target] = np.arange(m, dtype=np.int64)
    if not math.isinf(zeta):
        try:
            indptr, ids, dvals = space._neighbors_within(zeta)
        except ValueError:
            pass
        else:
            tmask = local_of[ids] >= 0
            kept = np.flatnonzero(tmask)
            counts = np.diff(indptr)
            rows_all = np.repeat(np.arange(n_pts, dtype=np.int64), counts)
            rows = rows_all[kept]
            local_ids = local_of[ids[kept]]
            d = dvals[kept]
            return _group_candidates(rows, local_ids, d, h, n_pts, presorted=True)
    sub = space.dist[:, target]
    mask = sub <= zeta
    rows, cols = np.nonzero(mask)
    d = sub[rows, cols]
    return _group_candidates(rows.astype(np.int64), cols.astype(np.int64), d, h, n_pts)


def greedy_content(space, target, n, zeta=UNRESTRICTED):
    """Greedy upper bound on the n-content of ``target`` with cap ``zeta``.

    Repeatedly picks the (center, radius) candidate maximizing newly covered
    points per unit cost (radius ** n); ties go to the lowest center id,
    then the smallest radius.
    """
    target = _validate_args(space, target, n, zeta)
    items, start, length, center, radius = _candidate_arrays(space, target, zeta)
    cost = np.power(radius, n)
    chosen = _kernels.greedy_cover(items, start, length, cost, center, radius, target.size)
    cover = tuple((int(center[i]), float(radius[i])) for i in chosen)
    value = 0.0
    exact = Fraction(0)
    for i in chosen:
        value = value + float(cost[i])
        exact += Fraction(float(radius[i])) ** n
    return ContentEstimate(
        cover=cover, value=float(value), n=n, zeta=zeta, mesh_floor=space.mesh_h,
        method="greedy", value_exact=exact,
    )


def exact_content(space, target, n, zeta=UNRESTRICTED, budget=16):
    """Minimal content over the candidate family, by branch and bound.

    Costs are compared in exact rational arithmetic, so the result equals a
    full enumeration of covers. Refuses targets larger than ``budget``.
    """
    target = _validate_args(space, target, n, zeta)
    m = target.size
    if m > budget:
        raise SolverBudgetError(
            f"exact solver budget is {budget} target points, got {m}; use greedy_content"
        )
    items, start, length, center, radius = _candidate_arrays(space, target, zeta)
    nc = center.shape[0]
    cost_float = np.power(radius, n)

    masks = []
    for i in range(nc):
        mask = 0
        for k in range(int(start[i]), int(start[i] + length[i])):
            mask |= 1 << int(items[k])
        masks.append(mask)
    costs = [Fraction(float(r)) ** n for r in radius]

    # Dominance pruning: drop candidates covered-and-undercut by another.
    order = sorted(range(nc), key=lambda i: (costs[i], int(center[i]), float(radius[i])))
    kept = []
    for i in order:
        dominated = False
        for j in kept:
            if masks[j] | masks[i] == masks[j] and costs[j] <= costs[i]:
                dominated = True
                break
        if not dominated and masks[i]:
            kept.append(i)

    full = (1 << m) - 1
    coverers = [[] for _ in range(m)]
    for i in kept:
        for e in range(m):
            if masks[i] >> e & 1:
                coverers[e].append(i)
    if any(not c for c in coverers):
        raise InfeasibleCoverError("candidate family cannot cover the target")
    min_cost_of = [min(costs[i] for i in coverers[e]) for e in range(m)]
    max_cover = max(bin(masks[i]).count("1") for i in kept)
    floor_cost = Fraction(space.mesh_h) ** n

    greedy_chosen = _kernels.greedy_cover(
        items, start, length, cost_float, center, radius, m
    )
    best_cover = [int(i) for i in greedy_chosen]
    best_value = sum((costs[i] for i in best_cover), Fraction(0))

    def bound(uncovered, count):
        lb = Fraction(count) * floor_cost / max_cover
        e = 0
        rest = uncovered
        while rest:
            if rest & 1 and min_cost_of[e] > lb:
                lb = min_cost_of[e]
            rest >>= 1
            e += 1
        return lb

    def search(uncovered, count, cur, picked):
        nonlocal best_value, best_cover
        if not uncovered:
            if cur < best_value:
                best_value = cur
                best_cover = list(picked)
            return
        if cur + bound(uncovered, count) >= best_value:
            return
        pivot, fewest = -1, None
        e = 0
        rest = uncovered
        while rest:
            if rest & 1:
                k = sum(1 for i in coverers[e] if masks[i] & uncovered)
                if fewest is None or k < fewest:
                    fewest, pivot = k, e
            rest >>= 1
            e += 1
        for i in coverers[pivot]:
            gain_mask = masks[i] & uncovered
            if not gain_mask:
                continue
            picked.append(i)
            search(
                uncovered & ~masks[i],
                count - bin(gain_mask).count("1"),
                cur + costs[i],
                picked,
            )
            picked.pop()

    search(full, m, Fraction(0), [])

    cover = tuple((int(center[i]), float(radius[i])) for i in best_cover)
    value = 0.0
    for i in best_cover:
        value = value + float(cost_float[i])
    return ContentEstimate(
        cover=cover, value=float(value), n=n, zeta=zeta, mesh_floor=space.mesh_h,
        method="exact", value_exact=best_value,
    )


def verify_cover(space, target, estimate):
    """Check an estimate against its target: coverage, radius range, value."""
    target = as_point_set(target)
    h = estimate.mesh_floor
    for _, r in estimate.cover:
        if r < h or r > estimate.zeta:
            return False
    if target.size:
        covered = np.zeros(space.size, dtype=bool)
        for c, r in estimate.cover:
            covered[space.dist[c] <= r] = True
        if not covered[target].all():
            return False
    value = 0.0
    for _, r in estimate.cover:
        value = value + float(r) ** estimate.n
    return value == estimate.value


def single_ball_bound(space, x, r, n):
    """Upper bound for the n-content of any subset of ball(x, r): one ball."""
    if not (0 <= x < space.size):
        raise ValueError(f"center {x} outside the space")
    return float(max(r, space.mesh_h) ** n)
