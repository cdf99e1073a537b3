"""Quantitative non-planarity audit for plane drawings of K5.

A drawing maps the metric complete graph on five vertices (every edge a
segment of length 10R) into the plane, each edge as a polyline. Since K5 is
not planar, every drawing identifies two points of independent edges (a
crossing), and any two points on independent edges are at graph distance at
least 10R: reaching one edge from the other costs a full edge hop. The audit
finds all such coincidences exactly and returns the one with the largest
graph distance as the witness that the drawing collapses distance 10R to
zero (or to <= tol, for near-misses found by proximity sampling).

Geometry is exact: coordinates snap to a rational grid of pitch 1/2**20 and
all incidence tests use rational arithmetic, so degenerate drawings
(touching, collinear overlaps) are classified without floating-point
ambiguity.
"""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DrawingError

SNAP = 1 << 20

_F0, _F1 = Fraction(0), Fraction(1)


def snap(x):
    """Round a coordinate to the rational grid."""
    x = float(x)
    if not math.isfinite(x):
        raise DrawingError(f"non-finite coordinate {x!r}")
    return Fraction(round(x * SNAP), SNAP)


def snap_point(p):
    return (snap(p[0]), snap(p[1]))


def orient(a, b, c):
    """Sign of the cross product (b-a) x (c-a): 1 left, -1 right, 0 collinear."""
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _between(a, b, p):
    """p within the bounding box of collinear segment ab."""
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def _param(a, b, p):
    """Parameter of p on segment ab (collinear, a != b)."""
    if b[0] != a[0]:
        return (p[0] - a[0]) / (b[0] - a[0])
    return (p[1] - a[1]) / (b[1] - a[1])


def segment_hits(a, b, c, d):
    """All coincidences of segments ab and cd as (point, t_ab, u_cd, kind).

    kind is "proper" (interiors cross), "touch" (an endpoint lies on the
    other segment), or "overlap" (collinear segments sharing more than a
    point; reported at the midpoint of the shared interval). Exact rational
    arithmetic throughout.
    """
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        r = (b[0] - a[0], b[1] - a[1])
        s = (d[0] - c[0], d[1] - c[1])
        denom = r[0] * s[1] - r[1] * s[0]
        w = (c[0] - a[0], c[1] - a[1])
        t = (w[0] * s[1] - w[1] * s[0]) / denom
        u = (w[0] * r[1] - w[1] * r[0]) / denom
        x = (a[0] + t * r[0], a[1] + t * r[1])
        return [(x, t, u, "proper")]
    if o1 == 0 and o2 == 0 and o3 == 0 and o4 == 0:
        if a == b:
            if (c == d and a == c) or (c != d and _between(c, d, a)):
                return [(a, _F0, _param(c, d, a) if c != d else _F0,
                         "overlap")]
            return []
        tc, td = _param(a, b, c), _param(a, b, d)
        lo, hi = max(_F0, min(tc, td)), min(_F1, max(tc, td))
        if lo > hi:
            return []
        tm = (lo + hi) / 2
        x = (a[0] + tm * (b[0] - a[0]), a[1] + tm * (b[1] - a[1]))
        um = _param(c, d, x) if c != d else _F0
        return [(x, tm, um, "overlap")]
    out = []
    if o1 == 0 and _between(a, b, c):
        out.append((c, _param(a, b, c), _F0, "touch"))
    if o2 == 0 and _between(a, b, d):
        out.append((d, _param(a, b, d), _F1, "touch"))
    if o3 == 0 and _between(c, d, a):
        out.append((a, _F0, _param(c, d, a), "touch"))
    if o4 == 0 and _between(c, d, b):
        out.append((b, _F1, _param(c, d, b), "touch"))
    seen, dedup = set(), []
    for hit in out:
        if hit[0] not in seen:
            seen.add(hit[0])
            dedup.append(hit)
    return dedup


def k5_edges():
    return [(u, v) for u in range(5) for v in range(u + 1, 5)]


@dataclass(frozen=True)
class Drawing:
    """Plane drawing of K5: snapped vertex positions and edge polylines.

    Edges are stored in canonical pair order; each polyline runs from the
    position of the smaller vertex to the larger one.
    """

    vertices: tuple
    paths: tuple

    @property
    def edges(self):
        return k5_edges()

    def to_json_dict(self):
        return {
            "vertices": [[float(x), float(y)] for x, y in self.vertices],
            "edges": [
                {
                    "u": u, "v": v,
                    "path": [[float(x), float(y)] for x, y in path],
                }
                for (u, v), path in zip(k5_edges(), self.paths)
            ],
        }

    @classmethod
    def from_json_dict(cls, data):
        verts = data["vertices"]
        if len(verts) != 5:
            raise DrawingError(f"need exactly 5 vertices, got {len(verts)}")
        edge_map = {}
        for e in data.get("edges", []):
            u, v = int(e["u"]), int(e["v"])
            key = (min(u, v), max(u, v))
            if key in edge_map:
                raise DrawingError(f"edge {key} given twice")
            path = e.get("path")
            if path is not None and u > v:
                path = list(reversed(path))
            edge_map[key] = path
        if data.get("edges") and set(edge_map) != set(k5_edges()):
            missing = sorted(set(k5_edges()) - set(edge_map))
            raise DrawingError(f"drawing is missing edges {missing}")
        return make_drawing(verts, edge_map or None)


def make_drawing(vertices, edge_paths=None):
    """Validate and snap a drawing; straight edges where no path is given."""
    verts = tuple(snap_point(p) for p in vertices)
    if len(verts) != 5:
        raise DrawingError(f"need exactly 5 vertices, got {len(verts)}")
    if len(set(verts)) != 5:
        raise DrawingError("two vertices snap to the same position")
    paths = []
    for u, v in k5_edges():
        raw = None if edge_paths is None else edge_paths.get((u, v))
        if raw is None:
            path = (verts[u], verts[v])
        else:
            if len(raw) < 2:
                raise DrawingError(f"edge {(u, v)} path needs >= 2 points")
            path = tuple(snap_point(p) for p in raw)
            if path[0] != verts[u] or path[-1] != verts[v]:
                raise DrawingError(
                    f"edge {(u, v)} path does not run between its vertices"
                )
            if any(path[k] == path[k + 1] for k in range(len(path) - 1)):
                raise DrawingError(
                    f"edge {(u, v)} path has a zero-length segment"
                )
        paths.append(path)
    return Drawing(vertices=verts, paths=tuple(paths))


def load_drawing(path):
    with open(path) as fh:
        return Drawing.from_json_dict(json.load(fh))


def _seg_lengths(path):
    return [
        math.hypot(float(b[0] - a[0]), float(b[1] - a[1]))
        for a, b in zip(path, path[1:])
    ]


def _arc_fraction(path, seg_index, t):
    lens = _seg_lengths(path)
    total = sum(lens)
    partial = sum(lens[:seg_index]) + float(t) * lens[seg_index]
    return partial / total


def k5_point_distance(L, e1, f1, e2, f2):
    """Graph distance between fraction f1 along edge e1 and f2 along e2.

    Every edge of the metric K5 has length L and distinct vertices are
    exactly L apart, so routes go through endpoints; points on a shared
    edge may also connect directly.
    """
    u1, v1 = e1
    u2, v2 = e2
    if (u1, v1) == (u2, v2):
        direct = abs(f1 - f2) * L
        around = (min(f1 + f2, (1 - f1) + (1 - f2))) * L + L
        return min(direct, around)
    best = math.inf
    for e, off1 in ((u1, f1 * L), (v1, (1 - f1) * L)):
        for g, off2 in ((u2, f2 * L), (v2, (1 - f2) * L)):
            hop = 0.0 if e == g else L
            best = min(best, off1 + hop + off2)
    return best


@dataclass(frozen=True)
class Coincidence:
    """Two edge points identified (or tol-close) in the drawing."""

    edge_i: tuple
    edge_j: tuple
    point: tuple
    f_i: float
    f_j: float
    graph_dist: float
    kind: str
    plane_dist: float = 0.0

    def to_json_dict(self):
        return {
            "edge_i": list(self.edge_i),
            "edge_j": list(self.edge_j),
            "point": [float(self.point[0]), float(self.point[1])],
            "f_i": self.f_i,
            "f_j": self.f_j,
            "graph_dist": self.graph_dist,
            "kind": self.kind,
            "plane_dist": self.plane_dist,
        }


@dataclass(frozen=True)
class AuditReport:
    R: float
    L: float
    tol: float
    coincidences: tuple
    witness: Coincidence | None
    passed: bool

    def to_json_dict(self):
        return {
            "R": self.R,
            "L": self.L,
            "tol": self.tol,
            "num_coincidences": len(self.coincidences),
            "coincidences": [c.to_json_dict() for c in self.coincidences],
            "witness": None if self.witness is None
            else self.witness.to_json_dict(),
            "passed": bool(self.passed),
        }


def _independent_pairs():
    es = k5_edges()
    return [
        (i, j)
        for i in range(len(es))
        for j in range(i + 1, len(es))
        if not set(es[i]) & set(es[j])
    ]


def _sample_path(path, spacing):
    """Points along the polyline at arc-length steps, with their fractions."""
    lens = _seg_lengths(path)
    total = sum(lens)
    pts, fracs = [], []
    target = 0.0
    acc = 0.0
    k = 0
    while k < len(lens):
        while target <= acc + lens[k] + 1e-15:
            t = (target - acc) / lens[k]
            a, b = path[k], path[k + 1]
            pts.append((
                float(a[0]) + t * float(b[0] - a[0]),
                float(a[1]) + t * float(b[1] - a[1]),
            ))
            fracs.append(target / total)
            target += spacing
        acc += lens[k]
        k += 1
    pts.append((float(path[-1][0]), float(path[-1][1])))
    fracs.append(1.0)
    return pts, fracs


def audit_drawing(drawing, R, tol=0.0):
    """Find every identification between independent edges; pick a witness.

    Exact crossings always exist for a drawing of K5 and always sit at
    graph distance >= 10R, which is what the report certifies. With tol > 0
    the audit additionally samples the polylines and reports the worst
    near-collision per independent edge pair. The witness maximizes graph
    distance; ties resolve lexicographically by edge pair and fractions.
    """
    L = 10.0 * float(R)
    es = k5_edges()
    records = []
    for i, j in _independent_pairs():
        pi, pj = drawing.paths[i], drawing.paths[j]
        for ki in range(len(pi) - 1):
            for kj in range(len(pj) - 1):
                for x, t, u, kind in segment_hits(
                    pi[ki], pi[ki + 1], pj[kj], pj[kj + 1]
                ):
                    fi = _arc_fraction(pi, ki, t)
                    fj = _arc_fraction(pj, kj, u)
                    records.append(Coincidence(
                        edge_i=es[i], edge_j=es[j],
                        point=(float(x[0]), float(x[1])),
                        f_i=fi, f_j=fj,
                        graph_dist=k5_point_distance(L, es[i], fi, es[j], fj),
                        kind=kind,
                    ))
        if tol > 0.0:
            spacing = tol / 2.0
            pts_i, fr_i = _sample_path(pi, spacing)
            pts_j, fr_j = _sample_path(pj, spacing)
            grid = {}
            for idx, (x, y) in enumerate(pts_i):
                grid.setdefault(
                    (int(x // tol), int(y // tol)), []
                ).append(idx)
            best = None
            for jdx, (x, y) in enumerate(pts_j):
                cx, cy = int(x // tol), int(y // tol)
                for dx in (-1, 0, 1):
                    for dy in (-1, 0, 1):
                        for idx in grid.get((cx + dx, cy + dy), ()):
                            px, py = pts_i[idx]
                            d = math.hypot(px - x, py - y)
                            if d <= tol:
                                gd = k5_point_distance(
                                    L, es[i], fr_i[idx], es[j], fr_j[jdx]
                                )
                                cand = Coincidence(
                                    edge_i=es[i], edge_j=es[j],
                                    point=((px + x) / 2, (py + y) / 2),
                                    f_i=fr_i[idx], f_j=fr_j[jdx],
                                    graph_dist=gd, kind="tol",
                                    plane_dist=d,
                                )
                                if best is None or gd > best.graph_dist:
                                    best = cand
            if best is not None:
                records.append(best)
    records.sort(
        key=lambda c: (-c.graph_dist, c.edge_i, c.edge_j, c.f_i, c.f_j, c.kind)
    )
    witness = records[0] if records else None
    passed = witness is not None and witness.graph_dist >= L * (1 - 1e-12)
    return AuditReport(
        R=float(R), L=L, tol=float(tol), coincidences=tuple(records),
        witness=witness, passed=passed,
    )


def is_simple_arc(path):
    """True iff the polyline has no self-intersection beyond shared joints."""
    path = tuple(snap_point(p) for p in path)
    n = len(path) - 1
    for i in range(n):
        for j in range(i + 1, n):
            hits = segment_hits(path[i], path[i + 1], path[j], path[j + 1])
            if j == i + 1:
                if any(h[0] != path[i + 1] for h in hits) or \
                        any(h[3] == "overlap" for h in hits):
                    return False
            elif hits:
                return False
    return True


def simplify_to_simple_arc(path):
    """Cut the loops out of a polyline, keeping its endpoints.

    Repeatedly removes collinear backtracking spikes and, at the first
    self-intersection in parameter order, splices the two visits together:
    the subpath between them is dropped. Each pass strictly shortens the
    vertex list, so this terminates; the result is a simple arc whose image
    is contained in the input's image.
    """
    pts = [snap_point(p) for p in path]
    if len(pts) < 2:
        raise DrawingError("arc needs at least two points")
    if pts[0] == pts[-1]:
        raise DrawingError("arc endpoints coincide after snapping")

    def despike(ps):
        # Dropping the middle point of any collinear triple keeps the arc's
        # endpoints and shrinks its image, whatever the order on the line.
        out = [ps[0]]
        for p in ps[1:]:
            if p == out[-1]:
                continue
            while len(out) >= 2 and orient(out[-2], out[-1], p) == 0:
                out.pop()
            if p != out[-1]:
                out.append(p)
        return out

    pts = despike(pts)
    while True:
        n = len(pts) - 1
        cut = None
        for i in range(n):
            for j in range(n - 1, i + 1, -1):
                hits = segment_hits(pts[i], pts[i + 1], pts[j], pts[j + 1])
                if hits:
                    hits.sort(key=lambda h: h[1])
                    cut = (i, j, hits[0][0])
                    break
            if cut:
                break
        if cut is None:
            break
        i, j, x = cut
        pts = despike(pts[: i + 1] + [x] + pts[j + 1:])
    return tuple(pts)


def _cut_at_arc_length(path, target):
    """Prefix of the polyline up to the given arc length."""
    lens = _seg_lengths(path)
    if target >= sum(lens):
        return tuple(path)
    out = [path[0]]
    acc = 0.0
    for k, ln in enumerate(lens):
        if acc + ln >= target:
            t = (target - acc) / ln
            a, b = path[k], path[k + 1]
            tip = snap_point((
                float(a[0]) + t * float(b[0] - a[0]),
                float(a[1]) + t * float(b[1] - a[1]),
            ))
            if tip != out[-1]:
                out.append(tip)
            return tuple(out)
        out.append(path[k + 1])
        acc += ln
    return tuple(out)


@dataclass(frozen=True)
class TreesReport:
    """Per-vertex edge-start trees and how they collide in the drawing."""

    R: float
    L: float
    arcs: tuple
    intersecting_pairs: tuple
    disjoint: bool
    betas: tuple

    def to_json_dict(self):
        return {
            "R": self.R,
            "L": self.L,
            "arcs": [
                {
                    "vertex": v, "edge": list(e),
                    "points": [[float(x), float(y)] for x, y in arc],
                }
                for v, e, arc in self.arcs
            ],
            "intersecting_pairs": [list(p) for p in self.intersecting_pairs],
            "disjoint": bool(self.disjoint),
            "betas": [
                {
                    "vertex": v, "edge": list(e), "kept_fraction": kf,
                    "points": [[float(x), float(y)] for x, y in arc],
                }
                for v, e, kf, arc in self.betas
            ],
        }


def k5_trees_construction(drawing, R):
    """Initial-arc trees around each vertex, and trimmed disjoint tails.

    Each vertex grows one arc per incident edge, following the drawing up
    to graph length 2R (a fifth of each edge). The report lists which
    vertex trees intersect in the plane, and for each arc the tail beta
    after its last intersection with arcs of earlier vertices; the tails
    are pairwise disjoint apart from snapped endpoints. Diagnostic only:
    no quantity here feeds certificates.
    """
    L = 10.0 * float(R)
    es = k5_edges()
    arcs = []
    for v in range(5):
        for i, (a, b) in enumerate(es):
            if v not in (a, b):
                continue
            path = drawing.paths[i]
            if v == b:
                path = tuple(reversed(path))
            total = sum(_seg_lengths(path))
            arc = _cut_at_arc_length(path, total * (2.0 * R) / L)
            arcs.append((v, (a, b), arc))

    def arc_hits(arc1, arc2):
        out = []
        for i in range(len(arc1) - 1):
            for j in range(len(arc2) - 1):
                for x, t, u, kind in segment_hits(
                    arc1[i], arc1[i + 1], arc2[j], arc2[j + 1]
                ):
                    out.append((i, t, x))
        return out

    bad = set()
    for ai, (v1, e1, a1) in enumerate(arcs):
        for aj in range(ai + 1, len(arcs)):
            v2, e2, a2 = arcs[aj]
            if v1 == v2:
                continue
            hits = arc_hits(a1, a2)
            # two arcs of one edge meet at the shared vertex only if drawn so
            if hits:
                bad.add((v1, v2) if v1 < v2 else (v2, v1))

    betas = []
    done = []
    for v, e, arc in arcs:
        last = None
        for other in done:
            for i, t, x in arc_hits(arc, other):
                key = (i, t)
                if last is None or key > last[0]:
                    last = (key, x)
        if last is None:
            beta = arc
            kept = 1.0
        else:
            (i, t), x = last
            beta = (x,) + arc[i + 1:]
            if len(beta) == 1:
                beta = (x, arc[-1]) if x != arc[-1] else (arc[-2], arc[-1])
            lens = _seg_lengths(arc)
            total = sum(lens)
            kept = 1.0 - (
                (sum(lens[:i]) + float(t) * lens[i]) / total if total else 0.0
            )
        betas.append((v, e, kept, tuple(beta)))
        done.append(beta)
    return TreesReport(
        R=float(R), L=L, arcs=tuple(arcs),
        intersecting_pairs=tuple(sorted(bad)),
        disjoint=not bad, betas=tuple(betas),
    )


def make_pentagon_drawing(radius=1.0):
    """The regular straight-line drawing: five chords cross inside."""
    verts = [
        (radius * math.cos(math.pi / 2 + 2 * math.pi * k / 5),
         radius * math.sin(math.pi / 2 + 2 * math.pi * k / 5))
        for k in range(5)
    ]
    return make_drawing(verts)


def make_random_drawing(seed, radius=1.0, jitter=0.3):
    """Seeded straight-line drawing in general position (no 3 collinear)."""
    rng = np.random.default_rng(seed)
    base = make_pentagon_drawing(radius).vertices
    for _ in range(100):
        verts = [
            (float(x) + jitter * rng.standard_normal(),
             float(y) + jitter * rng.standard_normal())
            for x, y in base
        ]
        snapped = [snap_point(p) for p in verts]
        if len(set(snapped)) != 5:
            continue
        ok = all(
            orient(snapped[a], snapped[b], snapped[c]) != 0
            for a in range(5) for b in range(a + 1, 5)
            for c in range(b + 1, 5)
        )
        if ok:
            return make_drawing(verts)
    raise DrawingError("could not reach general position in 100 attempts")
