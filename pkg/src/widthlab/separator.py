"""Separating sets and content-driven local search.

A set Z is D-separating when every scale-s component of the complement has
diameter at most D. ``initial_separator`` always produces one (for D large
enough relative to the mesh) by covering the space with a D/4-net and cutting
a cheapest shell around every net center: a step of size at most s cannot
cross a shell of width w >= s, so each complement component stays inside the
open cut ball of some center and has diameter below D.

``improve_separator`` is the swap move: replace the part of Z inside a ball
by a cheap shell around the same center, keep the result only if it strictly
lowers the content estimate and still separates. ``minimal_separator`` sweeps
the move over all centers until delta-stability; on very small spaces it
certifies the gap to the true optimum by enumeration and falls back to the
enumerated best when the local search lands more than delta above it.
"""

from dataclasses import dataclass, replace as dc_replace
from fractions import Fraction

import numpy as np

from .coarea import find_cheap_sphere
from .content import empty_estimate, exact_content, greedy_content
from .errors import SeparatorError, WidthlabError
from .metric_core import as_point_set, components_at_scale, diameter, shell


@dataclass(frozen=True)
class SeparationCheck:
    """Pieces of the complement of Z, or the first oversized one."""

    ok: bool
    pieces: tuple
    oversized: np.ndarray | None
    oversized_diam: float | None


def is_separating(space, Z, D, scale_s=None):
    """Check that every scale-s component of X minus Z has diameter <= D."""
    s = 2.0 * space.mesh_h if scale_s is None else float(scale_s)
    Z = as_point_set(Z)
    rest = np.setdiff1d(np.arange(space.size, dtype=np.int64), Z)
    pieces = components_at_scale(space, rest, s)
    for piece in pieces:
        d = diameter(space, piece)
        if d > D:
            return SeparationCheck(False, tuple(pieces), piece, d)
    return SeparationCheck(True, tuple(pieces), None, None)


@dataclass(frozen=True)
class SeparatorResult:
    """A D-separating set with its content estimate and search provenance."""

    Z: np.ndarray
    pieces: tuple
    D: float
    n: int
    zeta: float
    scale_s: float
    content: object
    gap_bound: object
    flags: tuple
    moves: int
    sweeps: int

    def to_json_dict(self):
        return {
            "Z": [int(i) for i in self.Z],
            "pieces": [[int(i) for i in p] for p in self.pieces],
            "D": self.D,
            "n": self.n,
            "zeta": self.zeta,
            "scale_s": self.scale_s,
            "content": self.content.to_json_dict(),
            "gap_bound": self.gap_bound,
            "flags": list(self.flags),
            "moves": self.moves,
            "sweeps": self.sweeps,
        }


def _net_centers(space, radius):
    """Greedy maximal radius-separated subset, ascending id.

    Maximality makes it a net: every point lies within < radius of a center.
    """
    centers = []
    min_dist = np.full(space.size, np.inf)
    for x in range(space.size):
        if min_dist[x] >= radius:
            centers.append(x)
            np.minimum(min_dist, space.dist[x], out=min_dist)
    return centers


def _content_of(space, Z, n_dim, zeta):
    if len(Z) == 0:
        return empty_estimate(n_dim, zeta, space.mesh_h, "greedy")
    return greedy_content(space, Z, n_dim, zeta)


def initial_separator(space, D, n, zeta=None, scale_s=None):
    """Build a D-separating set by cutting cheap shells around a D/4-net.

    Shell width is w = max(scale_s, mesh_h) and base radii sweep
    [D/4, D/2 - w] in steps of w, so the cut around each center fits inside
    its net ball window and any complement component stays within diameter D.
    Requires D >= 4*w; coarser meshes leave no room for a shell.
    """
    s = 2.0 * space.mesh_h if scale_s is None else float(scale_s)
    if zeta is None:
        zeta = max(D / 250.0, space.mesh_h)
    w = max(s, space.mesh_h)
    if D / 4.0 + w > D / 2.0:
        raise SeparatorError(
            f"no room for a separating shell: need D >= {4.0 * w:g} "
            f"(shell width {w:g}), got D = {D:g}"
        )
    if diameter(space) <= D:
        check = is_separating(space, np.empty(0, dtype=np.int64), D, s)
        return SeparatorResult(
            Z=np.empty(0, dtype=np.int64), pieces=check.pieces, D=float(D),
            n=int(n), zeta=float(zeta), scale_s=s,
            content=empty_estimate(n - 1, zeta, space.mesh_h, "greedy"),
            gap_bound=0.0, flags=("already_small",), moves=0, sweeps=0,
        )

    radii = []
    r = D / 4.0
    while r + w <= D / 2.0:
        radii.append(r)
        r += w
    chosen = set()
    for c in _net_centers(space, D / 4.0):
        best = None
        for lo in radii:
            members = shell(space, c, lo, lo + w).members
            est = _content_of(space, members, n - 1, zeta)
            if best is None or est.value < best[0]:
                best = (est.value, members)
        chosen.update(int(i) for i in best[1])
    Z = as_point_set(sorted(chosen))
    check = is_separating(space, Z, D, s)
    if not check.ok:
        raise SeparatorError(
            f"shell construction failed to separate: component of size "
            f"{check.oversized.size} has diameter {check.oversized_diam:g} > {D:g}"
        )
    return SeparatorResult(
        Z=Z, pieces=check.pieces, D=float(D), n=int(n), zeta=float(zeta),
        scale_s=s, content=_content_of(space, Z, n - 1, zeta),
        gap_bound="heuristic", flags=(), moves=0, sweeps=0,
    )


def improve_separator(space, result, x, R, tol=0.0):
    """One swap move at center x, acting at scale R.

    Finds the cheapest shell with base radius in [R/100, R/50] around x,
    replaces the part of Z strictly inside that radius by the shell, and
    accepts only a strict content improvement beyond tol that keeps the set
    D-separating. Returns the input unchanged otherwise, with a flag saying
    why.
    """
    w = max(result.scale_s, space.mesh_h)
    try:
        cs = find_cheap_sphere(
            space, x, R, result.n, result.zeta, shell_width=w
        )
    except WidthlabError:
        return dc_replace(result, flags=("window_too_thin",))
    inside = space.dist[x][result.Z] < cs.r
    Z_new = as_point_set(
        np.union1d(result.Z[~inside], cs.shell.members)
    )
    if Z_new.size == result.Z.size and np.array_equal(Z_new, result.Z):
        return dc_replace(result, flags=("no_change",))
    est = _content_of(space, Z_new, result.n - 1, result.zeta)
    if not est.value < result.content.value - tol:
        return dc_replace(result, flags=("no_improvement",))
    check = is_separating(space, Z_new, result.D, result.scale_s)
    if not check.ok:
        return dc_replace(result, flags=("swap_breaks_separation",))
    return dc_replace(
        result, Z=Z_new, pieces=check.pieces, content=est,
        flags=("improved",), moves=result.moves + 1,
    )


def enumerate_separators(space, D, n, zeta, scale_s=None, limit=15):
    """Exact minimum-content D-separating set by subset enumeration.

    Returns (best value as Fraction, best Z). Ties resolve to the subset
    whose bitmask is smallest. Only for tiny spaces.
    """
    N = space.size
    if N > limit:
        raise SeparatorError(f"enumeration over {N} points exceeds limit {limit}")
    ids = np.arange(N, dtype=np.int64)
    best_val, best_Z = None, None
    for mask in range(1 << N):
        Z = ids[[bool(mask >> i & 1) for i in range(N)]]
        if not is_separating(space, Z, D, scale_s).ok:
            continue
        if Z.size == 0:
            val = Fraction(0)
        else:
            val = exact_content(space, Z, n - 1, zeta, budget=limit).value_exact
        if best_val is None or val < best_val:
            best_val, best_Z = val, Z
    return best_val, best_Z


def minimal_separator(space, D, n, zeta=None, delta=0.0, scale_s=None,
                      move_budget=None, exhaustive_limit=10, max_sweeps=16):
    """Delta-minimal D-separating set.

    Spaces with at most exhaustive_limit points are solved by enumeration
    (gap_bound 0). Larger spaces start from the shell construction and
    sweep the swap move over all centers in ascending id until a full sweep
    accepts nothing; each accepted move must improve by more than
    delta/|X|. The swap acts at scale max(4D, 100w) where w is the shell
    width, so its search window is never thinner than one shell. Heuristic
    results carry a descriptive gap_bound string instead of a number.
    """
    N = space.size
    s = 2.0 * space.mesh_h if scale_s is None else float(scale_s)
    if zeta is None:
        zeta = max(D / 250.0, space.mesh_h)

    if N <= exhaustive_limit:
        best_val, best_Z = enumerate_separators(
            space, D, n, zeta, s, limit=exhaustive_limit
        )
        check = is_separating(space, best_Z, D, s)
        est = (
            exact_content(space, best_Z, n - 1, zeta, budget=exhaustive_limit)
            if best_Z.size
            else empty_estimate(n - 1, zeta, space.mesh_h, "exact")
        )
        return SeparatorResult(
            Z=best_Z, pieces=check.pieces, D=float(D), n=int(n),
            zeta=float(zeta), scale_s=s, content=est, gap_bound=0.0,
            flags=("exhaustive",), moves=0, sweeps=0,
        )

    result = initial_separator(space, D, n, zeta, s)
    if "already_small" in result.flags:
        return result
    tol = delta / N
    budget = 10 * N if move_budget is None else int(move_budget)
    R_swap = max(4.0 * D, 100.0 * max(s, space.mesh_h))
    sweeps = 0
    exhausted = False
    while sweeps < max_sweeps:
        sweeps += 1
        moved = False
        for x in range(N):
            nxt = improve_separator(space, result, x, R_swap, tol)
            if "improved" in nxt.flags:
                result = nxt
                moved = True
                if result.moves >= budget:
                    exhausted = True
                    break
        if exhausted or not moved:
            break
    tag = "heuristic (budget exhausted)" if exhausted \
        else "heuristic, locally delta-stable"
    return dc_replace(
        result, sweeps=sweeps, gap_bound=tag,
        flags=("budget_exhausted",) if exhausted else (),
    )


@dataclass(frozen=True)
class LocalContentProfile:
    """Per-point localized content of a set against a uniform bound."""

    radius: float
    dim: int
    zeta: float
    bound: float
    values: np.ndarray
    violations: np.ndarray
    worst_x: int
    worst_value: float

    @property
    def ok(self):
        return self.violations.size == 0


def local_content_profile(space, Z, radius, dim, zeta, bound):
    """Measure content(Z ∩ ball(x, radius)) at every x against a bound.

    A minimal separating set should be locally small everywhere; violations
    flag points where a swap move would have been profitable.
    """
    Z = as_point_set(Z)
    values = np.zeros(space.size)
    for x in range(space.size):
        local = Z[space.dist[x][Z] <= radius] if Z.size else Z
        if local.size:
            values[x] = greedy_content(space, local, dim, zeta).value
    violations = np.flatnonzero(values > bound).astype(np.int64)
    worst = int(np.argmax(values))
    return LocalContentProfile(
        radius=float(radius), dim=int(dim), zeta=float(zeta),
        bound=float(bound), values=values, violations=violations,
        worst_x=worst, worst_value=float(values[worst]),
    )
