"""Finite simplicial complexes, cones, and width certificates.

A width certificate is the discrete witness that a space maps into a
low-dimensional complex with small point preimages: a simplicial complex of
dimension at most n-1, an assignment sending every point to one simplex, and
the guarantee that each simplex's assigned point set (its fiber) has diameter
at most the claimed radius. ``verify_certificate`` re-checks all of that from
scratch against the metric, so a certificate stands on its own regardless of
how it was produced.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import CertificateError
from .metric_core import as_point_set, diameter


def _as_simplex(vertices):
    simplex = tuple(sorted(int(v) for v in vertices))
    if len(set(simplex)) != len(simplex):
        raise ValueError(f"repeated vertex in simplex {vertices!r}")
    if not simplex:
        raise ValueError("empty simplex")
    return simplex


class SimplicialComplex:
    """Abstract simplicial complex stored as its full set of simplices.

    Vertices are arbitrary non-negative integers, unrelated to point ids of
    any metric space. Construction closes downward, so the face-closure
    invariant holds by construction; ``check_closure`` re-verifies it for
    complexes read back from files.
    """

    __slots__ = ("_simplices",)

    def __init__(self, simplices=()):
        closed = set()
        for s in simplices:
            s = _as_simplex(s)
            for k in range(1, len(s) + 1):
                closed.update(combinations(s, k))
        self._simplices = frozenset(closed)

    @property
    def simplices(self):
        return self._simplices

    @property
    def vertices(self):
        return sorted({v for s in self._simplices for v in s})

    @property
    def dimension(self):
        """Max simplex dimension; -1 for the empty complex."""
        if not self._simplices:
            return -1
        return max(len(s) for s in self._simplices) - 1

    def __contains__(self, simplex):
        return tuple(sorted(int(v) for v in simplex)) in self._simplices

    def __len__(self):
        return len(self._simplices)

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and \
            self._simplices == other._simplices

    def __hash__(self):
        return hash(self._simplices)

    def check_closure(self):
        """True iff every face of every simplex is present."""
        for s in self._simplices:
            for k in range(1, len(s)):
                for face in combinations(s, k):
                    if face not in self._simplices:
                        return False
        return True

    def maximal_simplices(self):
        """Simplices not properly contained in another, sorted."""
        out = []
        for s in self._simplices:
            if not any(
                s != t and set(s) <= set(t) for t in self._simplices
            ):
                out.append(s)
        return sorted(out, key=lambda s: (len(s), s))

    def union(self, *others):
        out = SimplicialComplex()
        merged = set(self._simplices)
        for o in others:
            merged |= o.simplices
        out._simplices = frozenset(merged)
        return out

    def subcomplex_containing(self, simplices):
        """Smallest subcomplex containing the given member simplices."""
        for s in simplices:
            if s not in self:
                raise ValueError(f"simplex {s!r} is not in the complex")
        return SimplicialComplex(simplices)

    def to_json_dict(self):
        return {
            "maximal_simplices": [list(s) for s in self.maximal_simplices()]
        }

    @classmethod
    def from_json_dict(cls, data):
        return cls(data["maximal_simplices"])

    def to_dot(self, name="complex"):
        """1-skeleton as Graphviz source; higher simplices as comments."""
        lines = [f"graph {name} {{", "  node [shape=circle];"]
        edges = sorted(s for s in self._simplices if len(s) == 2)
        for v in self.vertices:
            lines.append(f"  v{v};")
        for a, b in edges:
            lines.append(f"  v{a} -- v{b};")
        for s in sorted(s for s in self._simplices if len(s) > 2):
            lines.append(f"  // simplex {list(s)}")
        lines.append("}")
        return "\n".join(lines) + "\n"


def cone(base, apex):
    """Cone over a complex with a fresh apex vertex.

    The result contains the base, the apex point, and every base simplex
    joined with the apex. The apex must not already appear in the base.
    The cone over the empty complex is the single apex point.
    """
    apex = int(apex)
    if any(apex in s for s in base.simplices):
        raise ValueError(f"apex {apex} already occurs in the base complex")
    simplices = [(apex,)]
    simplices.extend(s + (apex,) for s in base.maximal_simplices())
    return base.union(SimplicialComplex(simplices))


def next_free_vertex(*complexes):
    top = -1
    for c in complexes:
        vs = c.vertices
        if vs:
            top = max(top, vs[-1])
    return top + 1


@dataclass(frozen=True)
class WidthCertificate:
    """Complex + point assignment claiming all fibers have diameter <= R."""

    complex: SimplicialComplex
    assignment: dict
    claimed_R: float
    n: int
    points: np.ndarray = field(default=None)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = self.points
        if pts is None:
            pts = sorted(self.assignment.keys())
        object.__setattr__(self, "points", as_point_set(pts))
        object.__setattr__(
            self,
            "assignment",
            {int(p): _as_simplex(s) for p, s in self.assignment.items()},
        )

    def fiber(self, simplex):
        simplex = _as_simplex(simplex)
        return as_point_set(
            [p for p, s in self.assignment.items() if s == simplex]
        )

    def fibers(self):
        out = {}
        for p, s in self.assignment.items():
            out.setdefault(s, []).append(p)
        return {s: as_point_set(ps) for s, ps in out.items()}

    def to_json_dict(self):
        return {
            "claimed_R": self.claimed_R,
            "n": self.n,
            "points": [int(p) for p in self.points],
            "complex": self.complex.to_json_dict(),
            "assignment": [
                [p, list(self.assignment[p])] for p in sorted(self.assignment)
            ],
            "meta": self.meta,
        }

    @classmethod
    def from_json_dict(cls, data):
        return cls(
            complex=SimplicialComplex.from_json_dict(data["complex"]),
            assignment={int(p): tuple(s) for p, s in data["assignment"]},
            claimed_R=float(data["claimed_R"]),
            n=int(data["n"]),
            points=data["points"],
            meta=data.get("meta", {}),
        )


@dataclass(frozen=True)
class CertificateReport:
    ok: bool
    checks: dict
    worst_simplex: tuple | None
    worst_diam: float
    message: str

    def to_json_dict(self):
        return {
            "ok": bool(self.ok),
            "checks": {k: bool(v) for k, v in self.checks.items()},
            "worst_simplex": (
                None if self.worst_simplex is None else list(self.worst_simplex)
            ),
            "worst_diam": self.worst_diam,
            "message": self.message,
        }


def verify_certificate(space, cert, strict=False):
    """Re-derive every certificate guarantee directly from the metric.

    Checks: the assignment covers exactly the claimed points (which must be
    valid ids), every assigned simplex belongs to the complex, the complex is
    closed under faces, its dimension is at most n-1, and every fiber has
    diameter at most claimed_R. With strict=True a failing certificate raises
    instead of returning a failing report.
    """
    checks = {}
    messages = []

    pts_ok = bool(
        cert.points.size == 0 or
        (cert.points[0] >= 0 and cert.points[-1] < space.size)
    )
    checks["points_valid"] = pts_ok
    if not pts_ok:
        messages.append("certificate names points outside the space")

    assigned = as_point_set(list(cert.assignment.keys()))
    cov_ok = bool(np.array_equal(assigned, cert.points))
    checks["assignment_covers_points"] = cov_ok
    if not cov_ok:
        messages.append("assignment does not cover the claimed points exactly")

    member_ok = all(s in cert.complex for s in cert.assignment.values())
    checks["assigned_simplices_in_complex"] = member_ok
    if not member_ok:
        messages.append("a point is assigned to a simplex outside the complex")

    closed_ok = cert.complex.check_closure()
    checks["complex_face_closed"] = closed_ok
    if not closed_ok:
        messages.append("complex is not closed under faces")

    dim_ok = cert.complex.dimension <= cert.n - 1
    checks["dimension_bound"] = dim_ok
    if not dim_ok:
        messages.append(
            f"complex dimension {cert.complex.dimension} exceeds {cert.n - 1}"
        )

    worst_simplex, worst_diam = None, 0.0
    fibers_ok = True
    if pts_ok:
        for s, fiber in sorted(cert.fibers().items()):
            d = diameter(space, fiber)
            if d > worst_diam:
                worst_simplex, worst_diam = s, d
            if d > cert.claimed_R:
                fibers_ok = False
    checks["fiber_diameters"] = fibers_ok
    if not fibers_ok:
        messages.append(
            f"fiber of {worst_simplex} has diameter {worst_diam:g} "
            f"> claimed {cert.claimed_R:g}"
        )

    ok = all(checks.values())
    report = CertificateReport(
        ok=ok, checks=checks, worst_simplex=worst_simplex,
        worst_diam=float(worst_diam),
        message="; ".join(messages) if messages else "certificate verified",
    )
    if strict and not ok:
        raise CertificateError(report.message, report=report)
    return report
