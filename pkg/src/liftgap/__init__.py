"""liftgap: exact-arithmetic laboratory for TSP relaxation integrality gaps.

Generates the recursive directed family and the two-clique path family,
machine-verifies frame-based one-round lift-and-project certificates, and
computes exact integer and LP optima to anchor gap ratios at desk scale.
"""

from .graphs import (
    AmbiguousDetourError,
    DisconnectedGraphError,
    Edge,
    EdgeVector,
    GraphError,
    LabeledGraph,
    MetricInstance,
    NoDetourError,
    complete_edge_list,
    complete_graph,
    metric_closure,
    unique_bfs_path_excluding,
)
from .flows import ViolatedCut, global_min_cut_check, max_flow, max_flow_with_cut
from .frames import (
    Frame,
    FrameError,
    FrameFamily,
    FrameSymmetryError,
    build_frame,
    build_frame_family,
    validate_frame,
)
from .instances import (
    EdgeClass,
    build_cgk_graph,
    build_cgk_loop,
    build_sym_pair,
    classify_edge,
    extend_to_complete,
    metric_objective,
    sympath_fractional_vector,
    unit_extension,
)
from .lift import (
    CertificateReport,
    Matrix,
    ProjectionError,
    build_cgk_matrix,
    derive_row_vectors,
    moment_matrix,
    project_tour_to_path,
    psd_check,
    verify_one_round,
)
from .polytopes import ConstraintWitness, PolytopeKind, check_cone_vector, check_point
from .rational import decimal_string, format_rational, parse_rational
from .solvers import (
    DpResult,
    LpResult,
    ResourceLimitError,
    held_karp_path,
    held_karp_tour,
    lp_optimize,
)

__version__ = "0.1.0"
