"""Continuous selections of set-valued maps with paraconvex values.

The package estimates how far sampled sets are from convex (the
paraconvexity defect), builds selections of set-valued maps on finite
simplicial domains by successive approximation, certifies every inequality
that run relies on, glues partial selections along cover chains and runs the
radius-resolved variant driven by a damping function ``H``.
"""

__version__ = "0.1.0"

from .errors import (
    CertificationError,
    ConstructionError,
    ContractError,
    InputError,
    NonConvergenceError,
    NumericalError,
    ParaconvexityViolation,
    ParaselectError,
    PreconditionError,
    ResolutionError,
    ResourceError,
    SearchError,
)
from .geometry import (
    TOL_GEO,
    Ball,
    ConvexBody,
    PointCloud,
    ball_intersect,
    convex_hull,
    distance_to_cloud,
    distance_to_hull,
    hausdorff_semidistance,
    min_norm_point,
)
from .multimap import (
    WHOLE_SPACE,
    CoverChain,
    DomainComplex,
    SetValuedMap,
    VertexFunction,
    build_cover_chain,
    d_proximal_report,
    lsc_defect,
    preimage,
)
from .paraconvexity import (
    ParaconvexityProfile,
    ParaconvexityReport,
    defect,
    hull_distance,
    is_alpha_paraconvex,
    min_enclosing_ball,
    oracle_defect,
    profile,
)
from .selection import (
    CertificationReport,
    GlueReport,
    SelectionConfig,
    SelectionTrace,
    demo_glue_failure,
    demo_glue_repaired,
    glue,
    run,
    step,
    verify_trace,
)
from .semenov import HSeries, ScalarFunction, check_ps, h_iterates, run_functional

__all__ = [name for name in dir() if not name.startswith("_")]
