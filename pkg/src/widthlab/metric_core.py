"""Finite metric spaces represented as validated distance matrices.

Conventions fixed here and relied on by every other module:

- Points are integer ids ``0..n-1``.
- Balls are closed: ``ball(x, r) = {p : d(x, p) <= r}``.
- Shells are half-open: ``shell(x, lo, hi) = {p : lo <= d(x, p) < hi}``.
- Connectivity is scale-s: points p, q are adjacent when ``d(p, q) <= s``;
  the default scale is ``2 * mesh_h``.
- ``diameter`` of the empty set and of singletons is 0.
- ``mesh_h`` is the resolution of the point sample: distinct points closer
  than ``0.5 * mesh_h`` trigger a warning (the sample is finer than its
  declared scale, which distorts content values).

All objects are immutable after construction; operations are pure functions,
so concurrent readers are safe.
"""

import hashlib
import json
import math
import warnings

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import DisconnectedSpaceError, MetricError

MESH_SLACK = 0.5

# Neighbor caches beyond this many entries would dominate memory; callers
# fall back to direct row scans instead.
_NEIGHBOR_CACHE_MAX_NNZ = 60_000_000


def as_point_set(ids):
    """Normalize an iterable of point ids to a sorted unique int64 array."""
    arr = np.asarray(list(ids) if not isinstance(ids, np.ndarray) else ids, dtype=np.int64)
    return np.unique(arr)


class FiniteMetricSpace:
    """A finite metric space backed by a dense distance matrix.

    Attributes
    ----------
    dist : (n, n) float64 ndarray, read-only
        Pairwise distances; symmetric, zero diagonal, triangle inequality.
    mesh_h : float
        Declared resolution of the point sample.
    """

    __slots__ = ("dist", "mesh_h", "_neigh_cache")

    def __init__(self, dist, mesh_h, validate=True):
        dist = np.ascontiguousarray(dist, dtype=np.float64)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise MetricError(f"distance matrix must be square, got shape {dist.shape}")
        if not (isinstance(mesh_h, (int, float)) and mesh_h > 0 and math.isfinite(mesh_h)):
            raise MetricError(f"mesh_h must be a positive finite number, got {mesh_h!r}")
        n = dist.shape[0]
        if n == 0:
            raise MetricError("a metric space needs at least one point")
        if not np.all(np.isfinite(dist)):
            raise MetricError("distances must be finite")
        if np.any(np.diagonal(dist) != 0.0):
            i = int(np.flatnonzero(np.diagonal(dist) != 0.0)[0])
            raise MetricError(f"nonzero self-distance at point {i}")
        if not np.array_equal(dist, dist.T):
            i, j = np.argwhere(dist != dist.T)[0]
            raise MetricError(f"asymmetric distances at pair ({i}, {j})")
        off = dist[~np.eye(n, dtype=bool)] if n > 1 else np.empty(0)
        if off.size and np.any(off <= 0.0):
            i, j = np.argwhere((dist <= 0.0) & ~np.eye(n, dtype=bool))[0]
            raise MetricError(f"non-positive distance between distinct points ({i}, {j})")
        if validate:
            _check_triangle(dist)
        if off.size and float(off.min()) < MESH_SLACK * mesh_h:
            i, j = np.argwhere((dist == off.min()) & ~np.eye(n, dtype=bool))[0]
            warnings.warn(
                f"points {i} and {j} are {off.min():g} apart, closer than "
                f"{MESH_SLACK} * mesh_h = {MESH_SLACK * mesh_h:g}; content values "
                "treat the sample as an h-net and may be distorted",
                stacklevel=3,
            )
        dist.setflags(write=False)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "mesh_h", float(mesh_h))
        object.__setattr__(self, "_neigh_cache", {})

    def __setattr__(self, name, value):
        raise AttributeError("FiniteMetricSpace is immutable")

    @property
    def size(self):
        return self.dist.shape[0]

    def __len__(self):
        return self.dist.shape[0]

    def __repr__(self):
        return f"FiniteMetricSpace(n={self.size}, mesh_h={self.mesh_h:g})"

    def digest(self):
        """SHA-256 over the distance bytes and mesh scale; stable across runs."""
        hasher = hashlib.sha256()
        hasher.update(self.dist.tobytes())
        hasher.update(repr(self.mesh_h).encode())
        return hasher.hexdigest()

    def _neighbors_within(self, r):
        """CSR-ish arrays (indptr, ids, dists) of closed r-neighborhoods.

        Rows are sorted by (distance, id) so coverage prefixes are canonical.
        Cached per radius; falls back to raising MemoryError-like ValueError
        when the structure would be unreasonably dense (callers then use
        direct row scans).
        """
        key = float(r)
        cached = self._neigh_cache.get(key)
        if cached is not None:
            return cached
        n = self.size
        mask = self.dist <= r
        nnz = int(mask.sum())
        if nnz > _NEIGHBOR_CACHE_MAX_NNZ:
            raise ValueError(f"neighbor structure too dense to cache ({nnz} entries)")
        rows, cols = np.nonzero(mask)
        dvals = self.dist[rows, cols]
        order = np.lexsort((cols, dvals, rows))
        rows = rows[order]
        cols = cols[order].astype(np.int64)
        dvals = dvals[order]
        indptr = np.searchsorted(rows, np.arange(n + 1)).astype(np.int64)
        result = (indptr, cols, dvals)
        self._neigh_cache[key] = result
        return result


def _check_triangle(dist, rel_tol=1e-12):
    """Raise MetricError naming a violating triple if the triangle inequality fails."""
    n = dist.shape[0]
    for k in range(n):
        via = dist[:, k : k + 1] + dist[k : k + 1, :]
        bad = dist > via * (1.0 + rel_tol)
        if bad.any():
            i, j = np.argwhere(bad)[0]
            raise MetricError(
                f"triangle inequality fails: d({i},{j})={dist[i, j]:g} > "
                f"d({i},{k})+d({k},{j})={dist[i, k]:g}+{dist[k, j]:g}"
            )


def from_distance_matrix(matrix, mesh_h, validate=True):
    """Build a space from a full pairwise distance matrix."""
    return FiniteMetricSpace(np.array(matrix, dtype=np.float64), mesh_h, validate=validate)


def from_weighted_graph(edges, mesh_h):
    """Build the geodesic net of a weighted graph.

    ``edges`` is an iterable of ``(u, v, length)`` triples or of dicts with
    keys ``u``, ``v``, ``len``. Vertex labels get ids ``0..V-1`` in sorted
    label order; each edge is subdivided into ``ceil(length / mesh_h)``
    segments, appending interior points in edge-input order (oriented from
    the ``u`` side). Distances are graph geodesics, so the result is a metric
    by construction and skips triangle validation. Returns the space and the
    label-to-id map for the original vertices.
    """
    triples = []
    for e in edges:
        if isinstance(e, dict):
            triples.append((e["u"], e["v"], float(e["len"])))
        else:
            u, v, ln = e
            triples.append((u, v, float(ln)))
    if not triples:
        raise MetricError("graph has no edges")
    labels = sorted({t[0] for t in triples} | {t[1] for t in triples}, key=lambda x: (str(type(x)), x))
    label_id = {lab: i for i, lab in enumerate(labels)}
    next_id = len(labels)
    rows, cols, weights = [], [], []
    for u, v, ln in triples:
        if ln <= 0:
            raise MetricError(f"edge ({u!r}, {v!r}) has non-positive length {ln:g}")
        if u == v:
            raise MetricError(f"self-loop at vertex {u!r}")
        segments = max(1, math.ceil(ln / mesh_h - 1e-9))
        step = ln / segments
        chain = [label_id[u]]
        for _ in range(segments - 1):
            chain.append(next_id)
            next_id += 1
        chain.append(label_id[v])
        for a, b in zip(chain[:-1], chain[1:]):
            rows.append(a)
            cols.append(b)
            weights.append(step)
    n = next_id
    graph = csr_matrix((weights, (rows, cols)), shape=(n, n))
    dist = dijkstra(graph, directed=False)
    if not np.all(np.isfinite(dist)):
        i, j = np.argwhere(~np.isfinite(dist))[0]
        raise DisconnectedSpaceError(f"graph is disconnected: no path between points {i} and {j}")
    dist = np.minimum(dist, dist.T)
    return FiniteMetricSpace(dist, mesh_h, validate=False), dict(label_id)


def read_distance_csv(path, mesh_h, validate=True):
    """Load a row-major, header-free CSV distance matrix."""
    matrix = np.loadtxt(path, delimiter=",", ndmin=2)
    return from_distance_matrix(matrix, mesh_h, validate=validate)


def write_distance_csv(path, space):
    """Write the distance matrix as row-major CSV (17 significant digits)."""
    with open(path, "w") as fh:
        for row in space.dist:
            fh.write(",".join(f"{v:.17g}" for v in row))
            fh.write("\n")


def read_graph_json(path_or_obj):
    """Load a weighted-graph JSON: {"edges": [{"u","v","len"}...], "mesh_h": h}."""
    if isinstance(path_or_obj, dict):
        obj = path_or_obj
    else:
        with open(path_or_obj) as fh:
            obj = json.load(fh)
    if "edges" not in obj or "mesh_h" not in obj:
        raise MetricError('graph JSON needs "edges" and "mesh_h" keys')
    return from_weighted_graph(obj["edges"], float(obj["mesh_h"]))


def ball(space, x, r):
    """Closed ball: sorted ids with d(x, p) <= r."""
    return np.flatnonzero(space.dist[x] <= r).astype(np.int64)


class Shell:
    """A half-open metric shell {p : r_lo <= d(center, p) < r_hi}."""

    __slots__ = ("center", "r_lo", "r_hi", "members")

    def __init__(self, center, r_lo, r_hi, members):
        self.center = int(center)
        self.r_lo = float(r_lo)
        self.r_hi = float(r_hi)
        self.members = np.asarray(members, dtype=np.int64)

    def __repr__(self):
        return f"Shell(center={self.center}, [{self.r_lo:g}, {self.r_hi:g}), {len(self.members)} pts)"


def shell(space, x, r_lo, r_hi):
    """Shell of points with r_lo <= d(x, p) < r_hi."""
    row = space.dist[x]
    members = np.flatnonzero((row >= r_lo) & (row < r_hi)).astype(np.int64)
    return Shell(x, r_lo, r_hi, members)


def annulus(space, x, r_lo, r_hi):
    """Closed annulus {p : r_lo <= d(x, p) <= r_hi} as a sorted id array."""
    row = space.dist[x]
    return np.flatnonzero((row >= r_lo) & (row <= r_hi)).astype(np.int64)


def diameter(space, subset=None):
    """Max pairwise distance over the subset (default: the whole space).

    Empty and singleton sets have diameter 0.
    """
    if subset is None:
        return float(space.dist.max())
    subset = np.asarray(subset, dtype=np.int64)
    if subset.size < 2:
        return 0.0
    return float(space.dist[np.ix_(subset, subset)].max())


def components_at_scale(space, subset, s):
    """Scale-s connected components of a subset.

    Points are adjacent when d(p, q) <= s. Returns a list of sorted id
    arrays, ordered by smallest member.
    """
    subset = as_point_set(subset)
    if subset.size == 0:
        return []
    indptr, ids, _ = space._neighbors_within(s)
    in_subset = np.zeros(space.size, dtype=bool)
    in_subset[subset] = True
    visited = np.zeros(space.size, dtype=bool)
    components = []
    for p in subset:
        if visited[p]:
            continue
        stack = [int(p)]
        visited[p] = True
        comp = []
        while stack:
            q = stack.pop()
            comp.append(q)
            for nb in ids[indptr[q] : indptr[q + 1]]:
                if in_subset[nb] and not visited[nb]:
                    visited[nb] = True
                    stack.append(int(nb))
        components.append(np.array(sorted(comp), dtype=np.int64))
    return components


def restrict(space, subset):
    """Sub-space induced on a subset.

    Returns ``(subspace, ids)`` where ``ids[i]`` is the global id of local
    point ``i``. The induced metric inherits ``mesh_h``.
    """
    subset = as_point_set(subset)
    if subset.size == 0:
        raise MetricError("cannot restrict to an empty subset")
    sub = np.ascontiguousarray(space.dist[np.ix_(subset, subset)])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return FiniteMetricSpace(sub, space.mesh_h, validate=False), subset
