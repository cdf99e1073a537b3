"""Shared space builders for the test suite (package-independent geometry)."""

import numpy as np

from widthlab import FiniteMetricSpace, from_distance_matrix


def line_space(count, h=1.0, spacing=None):
    """Evenly spaced points on a line; mesh width defaults to the spacing."""
    spacing = h if spacing is None else spacing
    xs = np.arange(count, dtype=np.float64) * spacing
    return from_distance_matrix(np.abs(xs[:, None] - xs[None, :]), h)


def euclidean_space(points, h=None):
    """Planar point set with straight-line distances.

    When h is omitted, the smallest pairwise distance is used, so the
    mesh-slack warning can never fire.
    """
    pts = np.asarray(points, dtype=np.float64)
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=-1))
    if h is None:
        off = dist[~np.eye(len(pts), dtype=bool)]
        h = float(off.min()) if off.size else 1.0
    return from_distance_matrix(dist, h, validate=False)


def random_space(seed, n_pts, scale=10.0):
    """Seeded random planar point set (a metric by construction)."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.0, scale, size=(n_pts, 2))
    return euclidean_space(pts)


def sup_product(space, levels, step):
    """Cross a space with a uniform grid on an interval, sup metric.

    Level-major ids: level k holds ids [k * base, (k + 1) * base).
    """
    base = space.size
    ids = np.arange(base * levels)
    lvl, pt = ids // base, ids % base
    d_lvl = np.abs(lvl[:, None] - lvl[None, :]) * float(step)
    d_base = space.dist[np.ix_(pt, pt)]
    mesh = max(space.mesh_h, float(step)) if levels > 1 else space.mesh_h
    return FiniteMetricSpace(np.maximum(d_lvl, d_base), mesh, validate=False)
