"""Covering-content estimates and width certificates on finite metric spaces.

The package measures how efficiently subsets of a finite metric space can be
covered by balls (content), searches for cheap separating sets guided by a
shell-slicing inequality, assembles recursive width certificates (maps to
low-dimensional simplicial complexes with small fibers, re-verified from
scratch), and audits plane drawings of K5 for points that the drawing
identifies despite being far apart in the graph metric.
"""

from ._kernels import kernel_backend
from .coarea import CheapSphere, CoareaReport, coarea_check, find_cheap_sphere
from .complexes import (
    CertificateReport,
    SimplicialComplex,
    WidthCertificate,
    cone,
    next_free_vertex,
    verify_certificate,
)
from .content import (
    UNRESTRICTED,
    ContentEstimate,
    exact_content,
    greedy_content,
    single_ball_bound,
    verify_cover,
)
from .decomposer import (
    BoundaryReport,
    HypothesisReport,
    check_boundary_condition,
    check_hypothesis,
    decompose,
    decompose_chunked,
    decompose_uw0,
    epsilon,
    epsilon_float,
)
from .errors import (
    CertificateError,
    DisconnectedSpaceError,
    DrawingError,
    HypothesisError,
    InfeasibleCoverError,
    MetricError,
    SeparatorError,
    SolverBudgetError,
    WidthlabError,
)
from .metric_core import (
    FiniteMetricSpace,
    Shell,
    annulus,
    as_point_set,
    ball,
    components_at_scale,
    diameter,
    from_distance_matrix,
    from_weighted_graph,
    read_distance_csv,
    read_graph_json,
    restrict,
    shell,
    write_distance_csv,
)
from .planar_audit import (
    AuditReport,
    Coincidence,
    Drawing,
    TreesReport,
    audit_drawing,
    is_simple_arc,
    k5_point_distance,
    k5_trees_construction,
    load_drawing,
    make_drawing,
    make_pentagon_drawing,
    make_random_drawing,
    segment_hits,
    simplify_to_simple_arc,
)
from .separator import (
    LocalContentProfile,
    SeparationCheck,
    SeparatorResult,
    enumerate_separators,
    improve_separator,
    initial_separator,
    is_separating,
    local_content_profile,
    minimal_separator,
)
from .spaces import MAX_POINTS, GeneratorSpec, generate, k5_edges

__version__ = "0.1.0"

__all__ = [
    "AuditReport",
    "BoundaryReport",
    "CertificateError",
    "CertificateReport",
    "CheapSphere",
    "CoareaReport",
    "Coincidence",
    "ContentEstimate",
    "DisconnectedSpaceError",
    "Drawing",
    "DrawingError",
    "FiniteMetricSpace",
    "GeneratorSpec",
    "HypothesisError",
    "HypothesisReport",
    "InfeasibleCoverError",
    "LocalContentProfile",
    "MAX_POINTS",
    "MetricError",
    "SeparationCheck",
    "SeparatorError",
    "SeparatorResult",
    "Shell",
    "SimplicialComplex",
    "SolverBudgetError",
    "TreesReport",
    "UNRESTRICTED",
    "WidthCertificate",
    "WidthlabError",
    "annulus",
    "as_point_set",
    "audit_drawing",
    "ball",
    "check_boundary_condition",
    "check_hypothesis",
    "coarea_check",
    "components_at_scale",
    "cone",
    "decompose",
    "decompose_chunked",
    "decompose_uw0",
    "diameter",
    "enumerate_separators",
    "epsilon",
    "epsilon_float",
    "exact_content",
    "find_cheap_sphere",
    "from_distance_matrix",
    "from_weighted_graph",
    "generate",
    "greedy_content",
    "improve_separator",
    "initial_separator",
    "is_separating",
    "is_simple_arc",
    "k5_edges",
    "k5_point_distance",
    "k5_trees_construction",
    "kernel_backend",
    "load_drawing",
    "local_content_profile",
    "make_drawing",
    "make_pentagon_drawing",
    "make_random_drawing",
    "minimal_separator",
    "next_free_vertex",
    "read_distance_csv",
    "read_graph_json",
    "restrict",
    "segment_hits",
    "shell",
    "simplify_to_simple_arc",
    "single_ball_bound",
    "verify_certificate",
    "verify_cover",
    "write_distance_csv",
]
