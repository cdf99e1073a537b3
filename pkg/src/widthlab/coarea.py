"""Shell slicing: discrete co-area bookkeeping and cheap-sphere search.

Slicing a set U around a center into half-open metric shells of width D
relates the (n-1)-content of the slices to the n-content of U:

    sum_k  D * content_{n-1}(shell_k ∩ U)
        <=  2 * content_n(U)  +  2 * D * sum_i radius_i ** (n-1)

where the last sum runs over the witness cover of U. The inequality comes
from a per-ball window fact: the shells meeting a cover ball of radius rho
span a radial extent of at most 2*rho + 2*D, and each slice inside that ball
has (n-1)-content at most rho**(n-1). The slack term is the price of the
discrete shell width.

``find_cheap_sphere`` applies the averaging consequence: minimizing slice
content over the window [R/100, R/50] finds a shell whose content is at most
the window average, which the co-area bound keeps small whenever the ball
contents are small.
"""

import math
from dataclasses import dataclass

import numpy as np

from .content import ContentEstimate, empty_estimate, exact_content, greedy_content
from .errors import WidthlabError
from .metric_core import Shell, annulus, as_point_set, shell


@dataclass(frozen=True)
class ShellSlice:
    r_lo: float
    r_hi: float
    size: int
    content: float


@dataclass(frozen=True)
class CoareaReport:
    """Outcome of one co-area comparison."""

    center: int
    r1: float
    r2: float
    n: int
    zeta: float
    shell_width: float
    method: str
    lhs: float
    rhs: float
    slack: float
    passed: bool
    slices: tuple
    window_fact_ok: bool

    def to_json_dict(self):
        return {
            "center": self.center,
            "r1": self.r1,
            "r2": self.r2,
            "n": self.n,
            "zeta": "unrestricted" if math.isinf(self.zeta) else self.zeta,
            "shell_width": self.shell_width,
            "method": self.method,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "passed": bool(self.passed),
            "window_fact_ok": bool(self.window_fact_ok),
            "slices": [
                {"r_lo": s.r_lo, "r_hi": s.r_hi, "size": s.size, "content": s.content}
                for s in self.slices
            ],
        }


def _shell_edges(r1, r2, width):
    """Half-open shells [r1 + k*w, r1 + (k+1)*w) whose union covers [r1, r2]."""
    count = int((r2 - r1) / width) + 1
    return [(r1 + k * width, r1 + (k + 1) * width) for k in range(count)]


def coarea_check(space, U, x, r1, r2, n, zeta, shell_width=None, method="greedy"):
    """Compare sliced (n-1)-content of U against twice its n-content.

    U must lie in the closed annulus r1 <= d(x, .) <= r2 around x (r1 = 0
    means a ball). Slices use half-open shells of the given width (default
    mesh_h). ``method`` selects the content estimator for both sides.
    """
    if not (isinstance(n, int) and n >= 2):
        raise ValueError(f"coarea_check needs n >= 2 (slices live at n-1), got {n!r}")
    if not (0 <= r1 < r2):
        raise ValueError(f"need 0 <= r1 < r2, got [{r1!r}, {r2!r}]")
    U = as_point_set(U)
    width = space.mesh_h if shell_width is None else float(shell_width)
    if width <= 0:
        raise ValueError("shell width must be positive")
    inside = annulus(space, x, r1, r2)
    if not np.isin(U, inside).all():
        out = U[~np.isin(U, inside)][0]
        raise ValueError(
            f"point {out} of U lies outside the annulus [{r1:g}, {r2:g}] around {x}"
        )

    estimator = exact_content if method == "exact" else greedy_content
    if method not in ("exact", "greedy"):
        raise ValueError(f"unknown content method {method!r}")

    row = space.dist[x]
    slices = []
    lhs = 0.0
    for lo, hi in _shell_edges(r1, r2, width):
        members = U[(row[U] >= lo) & (row[U] < hi)]
        if members.size == 0:
            slices.append(ShellSlice(lo, hi, 0, 0.0))
            continue
        est = estimator(space, members, n - 1, zeta)
        slices.append(ShellSlice(lo, hi, int(members.size), est.value))
        lhs += width * est.value

    if U.size:
        u_est = estimator(space, U, n, zeta)
    else:
        u_est = empty_estimate(n, zeta, space.mesh_h, method)
    rhs = 2.0 * u_est.value
    slack = 0.0
    window_ok = True
    for c, rho in u_est.cover:
        slack += 2.0 * width * float(rho) ** (n - 1)
        covered = U[space.dist[c][U] <= rho]
        if covered.size:
            idx = np.floor((row[covered] - r1) / width)
            span = (idx.max() - idx.min() + 1) * width
            if span > 2.0 * rho + 2.0 * width + 1e-12 * max(1.0, rho):
                window_ok = False

    return CoareaReport(
        center=int(x), r1=float(r1), r2=float(r2), n=n, zeta=float(zeta),
        shell_width=width, method=method, lhs=lhs, rhs=rhs, slack=slack,
        passed=bool(lhs <= rhs + slack), slices=tuple(slices), window_fact_ok=window_ok,
    )


@dataclass(frozen=True)
class CheapSphere:
    """Cheapest shell found in the search window around a center."""

    x: int
    r: float
    shell: Shell
    content: ContentEstimate
    found: bool
    budget: float | None
    averaging_ok: bool
    window: tuple

    @property
    def value(self):
        return self.content.value


def find_cheap_sphere(space, x, R, n, zeta=None, budget=None, shell_width=None):
    """Cheapest shell of the given width with base radius in [R/100, R/50].

    Minimizes the (n-1)-content of half-open shells around x; ties go to the
    smallest radius. ``found`` reports whether the minimum meets the budget
    (always true when no budget is given). Raises when the window is thinner
    than one shell, naming the radius that would be needed.
    """
    width = space.mesh_h if shell_width is None else float(shell_width)
    r1, r2 = R / 100.0, R / 50.0
    if r2 - r1 < width:
        raise WidthlabError(
            f"search window [{r1:g}, {r2:g}] is thinner than one shell of width "
            f"{width:g}; need R >= {100.0 * width:g}"
        )
    if zeta is None:
        zeta = max(R / 1000.0, space.mesh_h)
    best = None
    values = []
    for lo, hi in _shell_edges(r1, r2, width):
        sh = shell(space, x, lo, hi)
        if sh.members.size == 0:
            est = empty_estimate(n - 1, zeta, space.mesh_h, "greedy")
        else:
            est = greedy_content(space, sh.members, n - 1, zeta)
        values.append(est.value)
        if best is None or est.value < best[1].value:
            best = (sh, est)
    sh, est = best
    mean = sum(values) / len(values)
    averaging_ok = est.value <= mean * (1.0 + 1e-9) + 1e-300
    return CheapSphere(
        x=int(x), r=sh.r_lo, shell=sh, content=est,
        found=(budget is None) or (est.value <= budget),
        budget=budget, averaging_ok=bool(averaging_ok), window=(r1, r2),
    )
