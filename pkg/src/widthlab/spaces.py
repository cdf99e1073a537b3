"""Deterministic generators for benchmark metric spaces.

Every generator is specified by a ``GeneratorSpec`` (a kind plus flat
parameters, mirroring the JSON accepted by the command line) and produces a
finite metric space with a stated mesh width. No randomness is involved, so
a spec regenerates the identical space byte for byte.

Product kinds use the sup metric: d((p, i), (q, j)) = max(d(p, q), step *
|i - j|). Point ids in a product are level-major: level i holds ids
[i * base_size, (i + 1) * base_size).
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import WidthlabError
from .metric_core import FiniteMetricSpace, from_weighted_graph

MAX_POINTS = 6000

KINDS = (
    "grid", "strip", "torus_net", "sphere_net", "k5", "tripod_product",
    "tree_cross_interval", "clusters",
)


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    params: dict = field(default_factory=dict)

    @classmethod
    def from_json_dict(cls, data):
        data = dict(data)
        kind = data.pop("kind")
        return cls(kind=kind, params=data)

    def to_json_dict(self):
        return {"kind": self.kind, **self.params}


def _check_budget(n):
    if n > MAX_POINTS:
        raise WidthlabError(
            f"generator would produce {n} points, over the {MAX_POINTS} cap"
        )
    if n < 1:
        raise WidthlabError("generator would produce an empty space")


def _euclidean(coords, mesh_h):
    coords = np.asarray(coords, dtype=np.float64)
    diff = coords[:, None, :] - coords[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=-1))
    return FiniteMetricSpace(dist, mesh_h, validate=False)


def _grid(nx, ny, spacing):
    nx, ny, s = int(nx), int(ny), float(spacing)
    _check_budget(nx * ny)
    coords = [(i * s, j * s) for i in range(nx) for j in range(ny)]
    return _euclidean(coords, s)


def _torus_net(nx, ny, spacing):
    nx, ny, s = int(nx), int(ny), float(spacing)
    _check_budget(nx * ny)
    ii, jj = np.divmod(np.arange(nx * ny), ny)
    di = np.abs(ii[:, None] - ii[None, :])
    di = np.minimum(di, nx - di) * s
    dj = np.abs(jj[:, None] - jj[None, :])
    dj = np.minimum(dj, ny - dj) * s
    return FiniteMetricSpace(np.hypot(di, dj), s, validate=False)


def _sphere_net(count, radius):
    count, radius = int(count), float(radius)
    _check_budget(count)
    k = np.arange(count)
    z = 1.0 - 2.0 * (k + 0.5) / count
    phi = math.pi * (3.0 - math.sqrt(5.0)) * k
    rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    pts = np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)
    dots = np.clip(pts @ pts.T, -1.0, 1.0)
    dist = radius * np.arccos(dots)
    np.fill_diagonal(dist, 0.0)
    dist = np.minimum(dist, dist.T)
    if count > 1:
        mesh_h = float(np.where(dist > 0, dist, np.inf).min(axis=1).max())
    else:
        mesh_h = radius
    return FiniteMetricSpace(dist, mesh_h, validate=False)


def k5_edges():
    """The ten vertex pairs of the complete graph on five vertices."""
    return [(u, v) for u in range(5) for v in range(u + 1, 5)]


def _k5(edge_length, mesh_h):
    edges = [(u, v, float(edge_length)) for u, v in k5_edges()]
    space, labels = from_weighted_graph(edges, float(mesh_h))
    _check_budget(space.size)
    return space


def _tree_edges(depth, branching, edge_length):
    edges = []
    level = [0]
    nxt = 1
    for _ in range(int(depth)):
        new_level = []
        for parent in level:
            for _ in range(int(branching)):
                edges.append((parent, nxt, float(edge_length)))
                new_level.append(nxt)
                nxt += 1
        level = new_level
    return edges


def _interval_product(base, levels, step):
    levels, step = int(levels), float(step)
    _check_budget(base.size * levels)
    n = base.size
    ids = np.arange(n * levels)
    lvl = ids // n
    pt = ids % n
    d_lvl = np.abs(lvl[:, None] - lvl[None, :]) * step
    d_base = base.dist[np.ix_(pt, pt)]
    dist = np.maximum(d_lvl, d_base)
    mesh_h = max(base.mesh_h, step) if levels > 1 else base.mesh_h
    return FiniteMetricSpace(dist, mesh_h, validate=False)


def _clusters(count, size, diam, separation):
    count, size = int(count), int(size)
    diam, separation = float(diam), float(separation)
    if size < 2:
        raise WidthlabError("clusters need size >= 2 to carry a mesh width")
    if separation <= diam:
        raise WidthlabError("cluster separation must exceed cluster diameter")
    _check_budget(count * size)
    spacing = diam / (size - 1)
    xs = np.concatenate(
        [i * separation + np.arange(size) * spacing for i in range(count)]
    )
    dist = np.abs(xs[:, None] - xs[None, :])
    return FiniteMetricSpace(dist, spacing, validate=False)


def generate(spec):
    """Build the metric space described by a GeneratorSpec (or plain dict)."""
    if isinstance(spec, dict):
        spec = GeneratorSpec.from_json_dict(spec)
    p = spec.params
    try:
        if spec.kind == "grid":
            return _grid(p["nx"], p["ny"], p["spacing"])
        if spec.kind == "strip":
            return _grid(p["length"], p["width"], p["spacing"])
        if spec.kind == "torus_net":
            return _torus_net(p["nx"], p["ny"], p["spacing"])
        if spec.kind == "sphere_net":
            return _sphere_net(p["count"], p["radius"])
        if spec.kind == "k5":
            return _k5(p["edge_length"], p["mesh_h"])
        if spec.kind == "tripod_product":
            space, _ = from_weighted_graph(
                _tree_edges(1, 3, p["leg"]), float(p["mesh_h"])
            )
            return _interval_product(space, p["levels"], p["step"])
        if spec.kind == "tree_cross_interval":
            space, _ = from_weighted_graph(
                _tree_edges(p["depth"], p.get("branching", 2),
                            p["edge_length"]),
                float(p["mesh_h"]),
            )
            return _interval_product(space, p["levels"], p["step"])
        if spec.kind == "clusters":
            return _clusters(p["count"], p["size"], p["diam"], p["separation"])
    except KeyError as exc:
        raise WidthlabError(
            f"generator {spec.kind!r} is missing parameter {exc.args[0]!r}"
        ) from None
    raise WidthlabError(
        f"unknown generator kind {spec.kind!r}; known kinds: {', '.join(KINDS)}"
    )
