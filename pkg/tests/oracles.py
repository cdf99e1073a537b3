"""Independent reference implementations used to check the package.

Everything here is deliberately written from scratch with the dumbest
correct algorithm available (bitmask dynamic programming, flood fill over
adjacency bitmasks, dict-based Dijkstra, float cross products), sharing no
code with the package beyond reading ``space.dist`` and ``space.mesh_h``.
"""

import heapq
import math
from fractions import Fraction


def _target_list(target):
    return sorted({int(t) for t in target})


def _frac_pow(r, n):
    return Fraction(float(r)) ** n


def _scaled_ints(fracs):
    """Represent dyadic fractions as integers over one power-of-two denominator."""
    exps = []
    for f in fracs:
        den = f.denominator
        e = den.bit_length() - 1
        assert den == 1 << e, "cost denominators must be powers of two"
        exps.append(e)
    top = max(exps, default=0)
    return [f.numerator << (top - e) for f, e in zip(fracs, exps)], top


def candidate_family(space, target, n, zeta=math.inf):
    """All (center, radius) balls worth considering for covering ``target``.

    Radii are distances from the center to target points, floored at the
    mesh width and capped at zeta. Returns the cheapest cost per coverage
    bitmask: {mask: exact cost as Fraction}.
    """
    target = _target_list(target)
    h = space.mesh_h
    idx = {t: k for k, t in enumerate(target)}
    best = {}
    for c in range(space.size):
        radii = set()
        for t in target:
            d = float(space.dist[c, t])
            if d <= zeta:
                radii.add(max(d, h))
        if h <= zeta:
            radii.add(h)
        for r in radii:
            if r > zeta:
                continue
            mask = 0
            for t in target:
                if float(space.dist[c, t]) <= r:
                    mask |= 1 << idx[t]
            if not mask:
                continue
            cost = _frac_pow(r, n)
            prev = best.get(mask)
            if prev is None or cost < prev:
                best[mask] = cost
    return best


def _min_cover_table(best, m):
    """dp[mask] = cheapest cost of a candidate subset whose union equals mask."""
    masks = list(best)
    ints, top = _scaled_ints([best[k] for k in masks])
    dp = [None] * (1 << m)
    dp[0] = 0
    for mask in range(1 << m):
        cur = dp[mask]
        if cur is None:
            continue
        for cov, ci in zip(masks, ints):
            nm = mask | cov
            if nm == mask:
                continue
            v = cur + ci
            if dp[nm] is None or v < dp[nm]:
                dp[nm] = v
    return dp, top


def exact_content_oracle(space, target, n, zeta=math.inf):
    """Minimal sum of radius**n over ball covers of target, as a Fraction.

    Returns None when no cover exists (zeta below the mesh width).
    """
    target = _target_list(target)
    m = len(target)
    if m == 0:
        return Fraction(0)
    best = candidate_family(space, target, n, zeta)
    dp, top = _min_cover_table(best, m)
    full = (1 << m) - 1
    if dp[full] is None:
        return None
    return Fraction(dp[full], 1 << top)


def content_table_oracle(space, n, zeta=math.inf):
    """content(S) for every subset S of a small space, via one DP sweep.

    Returns a list indexed by subset bitmask (over all space points).
    Minimizing over supersets is what turns "union equals mask" into
    "union contains mask".
    """
    m = space.size
    best = candidate_family(space, range(m), n, zeta)
    dp, top = _min_cover_table(best, m)
    val = list(dp)
    for b in range(m):
        bit = 1 << b
        for mask in range(1 << m):
            if mask & bit:
                continue
            sup = val[mask | bit]
            if sup is not None and (val[mask] is None or sup < val[mask]):
                val[mask] = sup
    return [None if v is None else Fraction(v, 1 << top) for v in val]


def components_oracle(space, subset, s):
    """Scale-s components of a subset by plain flood fill; sorted id lists."""
    ids = _target_list(subset)
    seen = set()
    comps = []
    for start in ids:
        if start in seen:
            continue
        comp = []
        stack = [start]
        seen.add(start)
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in ids:
                if v not in seen and float(space.dist[u, v]) <= s:
                    seen.add(v)
                    stack.append(v)
        comps.append(sorted(comp))
    return comps


def diameter_oracle(space, subset):
    ids = _target_list(subset)
    out = 0.0
    for i in ids:
        for j in ids:
            out = max(out, float(space.dist[i, j]))
    return out


def is_separating_oracle(space, Z, D, s):
    rest = sorted(set(range(space.size)) - {int(z) for z in Z})
    for comp in components_oracle(space, rest, s):
        if diameter_oracle(space, comp) > D:
            return False
    return True


def min_separator_oracle(space, D, n, zeta, s):
    """Exhaustive b(D): cheapest (n-1)-content over all separating subsets.

    Returns (value, Z) with the value as an exact Fraction and Z the first
    optimal subset in ascending bitmask order.
    """
    N = space.size
    table = content_table_oracle(space, n - 1, zeta)
    adj = [0] * N
    far = [0] * N
    for i in range(N):
        for j in range(N):
            if i != j and float(space.dist[i, j]) <= s:
                adj[i] |= 1 << j
            if float(space.dist[i, j]) > D:
                far[i] |= 1 << j

    def separating(zmask):
        rem = ((1 << N) - 1) & ~zmask
        while rem:
            comp = rem & -rem
            frontier = comp
            while frontier:
                nxt = 0
                f = frontier
                while f:
                    lb = f & -f
                    nxt |= adj[lb.bit_length() - 1]
                    f ^= lb
                nxt &= rem & ~comp
                comp |= nxt
                frontier = nxt
            f = comp
            while f:
                lb = f & -f
                if far[lb.bit_length() - 1] & comp:
                    return False
                f ^= lb
            rem &= ~comp
        return True

    best_val, best_mask = None, None
    for zmask in range(1 << N):
        if not separating(zmask):
            continue
        val = Fraction(0) if zmask == 0 else table[zmask]
        if val is None:
            continue
        if best_val is None or val < best_val:
            best_val, best_mask = val, zmask
    Z = [i for i in range(N) if best_mask >> i & 1] if best_mask is not None else None
    return best_val, Z


def dijkstra_oracle(edges, source):
    """Single-source shortest paths on a weighted undirected graph.

    ``edges`` is an iterable of (u, v, length) with hashable vertex labels.
    Returns {vertex: distance}.
    """
    adj = {}
    for u, v, ln in edges:
        adj.setdefault(u, []).append((v, float(ln)))
        adj.setdefault(v, []).append((u, float(ln)))
    dist = {source: 0.0}
    heap = [(0.0, repr(source), source)]
    done = set()
    while heap:
        d, _, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, ln in adj.get(u, []):
            nd = d + ln
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, repr(v), v))
    return dist


def segments_cross_oracle(a, b, c, d, eps=1e-12):
    """Float-arithmetic properly-crossing test for two segments.

    Returns the interior intersection point, or None when the segments do
    not cross in their interiors. Only meaningful away from degeneracies;
    callers feed it clearly non-degenerate inputs.
    """

    def cross(o, p, q):
        return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])

    d1 = cross(c, d, a)
    d2 = cross(c, d, b)
    d3 = cross(a, b, c)
    d4 = cross(a, b, d)
    if (d1 > eps and d2 < -eps or d1 < -eps and d2 > eps) and (
        d3 > eps and d4 < -eps or d3 < -eps and d4 > eps
    ):
        t = d1 / (d1 - d2)
        return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))
    return None


def k5_metric_distance_oracle(L, e1, f1, e2, f2):
    """Distance between two edge points of the metric complete graph on 5
    vertices with all edge lengths L, by explicit route enumeration."""
    (u1, v1), (u2, v2) = e1, e2
    if e1 == e2:
        # Any route leaving the edge costs at least 2L more than staying.
        return abs(f1 - f2) * L
    ends1 = {u1: f1 * L, v1: (1.0 - f1) * L}
    ends2 = {u2: f2 * L, v2: (1.0 - f2) * L}
    best = math.inf
    for a, da in ends1.items():
        for b, db in ends2.items():
            hop = 0.0 if a == b else L
            best = min(best, da + hop + db)
    return best
