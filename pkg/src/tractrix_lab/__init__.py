"""Bicycle/tractrix kinematics, Moebius monodromy, planimeter and wheelbase experiments."""

from .errors import (
    InvalidCurveError,
    ResidualError,
    ScanError,
    TractrixLabError,
    ValidationError,
)
from .geom import (
    CurveSpec,
    FrontTrack,
    Geometry,
    SupportFunction,
    area_centroid,
    enclosed_area,
    isoperimetric_defect,
    make_curve,
    mean_square_radius,
    support_function,
    support_length_area,
    wavefront,
)
from .dynamics import (
    BikeParams,
    ConfigLoop,
    LoopCheck,
    RearTrack,
    SteeringSolution,
    area_between_tracks,
    integrate_steering,
    loop_identity,
    random_config_loop,
    rear_track,
    signed_rear_length,
    steering_endpoints,
)
from .moebius import (
    FixedPoint,
    MapClass,
    MoebiusMap,
    MonodromyReport,
    from_three_pairs,
    monodromy,
)
from .dynamics import monodromy_matrix
from .planimeter import (
    PlanimeterReading,
    RodLeg,
    ScanTable,
    error_scan,
    measure,
    rod_flow,
)
from .menzin import (
    MenzinReport,
    ScanSample,
    StageCheck,
    critical_length,
    defect_bound,
    menzin_verify,
    min_osculating_radius,
)
from .noneuclid import (
    HCurve,
    HPZReport,
    UNIT_WHEELBASE,
    concentric_rear_radius,
    develop_hyperbolic,
    geodesic_area,
    geodesic_circle,
    hpz_verify,
    star_direction,
    stargazing_angle,
    stargazing_residual,
    unit_bicycle_monodromy,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
