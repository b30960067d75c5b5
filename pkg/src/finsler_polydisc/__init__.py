"""Invariant Kähler-Berwald metrics F_{t,k} on unit polydiscs.

Closed-form evaluation of the metric family, the polydisc automorphism
group, holomorphic map families, and seeded verification campaigns for the
sharp Schwarz inequality, the distortion bounds of convex mappings and the
Kähler-Berwald / Finsler-Einstein structure.
"""

from ._kernels import BACKEND, available_backends
from .automorphisms import (
    AutElement,
    apply,
    compose,
    differential,
    invert,
    moebius_transport,
    sample_automorphism,
    sample_isotropy,
    transport_to,
)
from .core import (
    DEFAULT_TOL,
    DimensionMismatchError,
    DomainError,
    MetricParams,
    PolydiscPoint,
    Rng,
    TangentVector,
    Tolerance,
    ZeroVectorError,
    approx_eq,
    sample_polydisc_point,
)
from .distortion import (
    ConvexMapping,
    HalfPlaneMoebius,
    Identity,
    LogHalf,
    derivative_diag,
    eval_convex,
    loewner_bounds,
    verify_distortion,
    verify_distortion_radial,
)
from .geometry import (
    ConnectionReport,
    CurvatureReport,
    LeviReport,
    connection,
    curvature,
    einstein_check,
    levi_matrix,
    real_hessian,
)
from .maps import (
    Composed,
    ConvexProduct,
    CoordMoebius,
    Extremal,
    HolomorphicMap,
    HomogeneousPower,
    InadmissibleMapError,
    Linear,
    evaluate,
    jacobian,
    linear_part,
    map_from_dict,
    map_from_json,
    pullback_F2,
    pushforward,
    row_sum_admissible,
    sample_map,
)
from .metrics import (
    MetricValue,
    eval_bergman_F2,
    eval_F2,
    eval_phi2,
    indicatrix_contains,
    minkowski_p,
    norm_constant,
)
from .schwarz import (
    SchwarzReport,
    cartan_rigidity_diagnostic,
    check_equality_axis,
    sharp_constant,
    verify_norm_schwarz,
    verify_schwarz,
)

__version__ = "0.1.0"

__all__ = [
    "apply",
    "approx_eq",
    "AutElement",
    "available_backends",
    "BACKEND",
    "cartan_rigidity_diagnostic",
    "check_equality_axis",
    "compose",
    "Composed",
    "connection",
    "ConnectionReport",
    "ConvexMapping",
    "ConvexProduct",
    "CoordMoebius",
    "curvature",
    "CurvatureReport",
    "DEFAULT_TOL",
    "derivative_diag",
    "differential",
    "DimensionMismatchError",
    "DomainError",
    "einstein_check",
    "eval_bergman_F2",
    "eval_convex",
    "eval_F2",
    "eval_phi2",
    "evaluate",
    "Extremal",
    "HalfPlaneMoebius",
    "HolomorphicMap",
    "HomogeneousPower",
    "Identity",
    "InadmissibleMapError",
    "indicatrix_contains",
    "invert",
    "jacobian",
    "levi_matrix",
    "LeviReport",
    "Linear",
    "linear_part",
    "loewner_bounds",
    "LogHalf",
    "map_from_dict",
    "map_from_json",
    "MetricParams",
    "MetricValue",
    "minkowski_p",
    "moebius_transport",
    "norm_constant",
    "PolydiscPoint",
    "pullback_F2",
    "pushforward",
    "real_hessian",
    "Rng",
    "row_sum_admissible",
    "sample_automorphism",
    "sample_isotropy",
    "sample_map",
    "sample_polydisc_point",
    "SchwarzReport",
    "sharp_constant",
    "TangentVector",
    "Tolerance",
    "transport_to",
    "verify_distortion",
    "verify_distortion_radial",
    "verify_norm_schwarz",
    "verify_schwarz",
    "ZeroVectorError",
]
