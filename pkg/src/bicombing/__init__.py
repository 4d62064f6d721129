"""Geodesic bicombings on concrete metric spaces, with exact optimal
transport, recursive barycenters, orbit averaging, and a certified
fixed-point-free counterexample space."""

from .barycenter import (
    BaryConfig,
    BarycenterError,
    BetaResult,
    b_n,
    b_n_reference,
    banach_mean,
    beta,
    locality_certificate,
)
from .checks import (
    PropertyReport,
    check_busemann,
    check_conical,
    check_geodesic_speed,
    check_isometry_distance,
    check_isometry_equivariance,
    check_midpoint_property,
    convex_hull_sample,
    strict_convexity_check,
)
from .counterexample import (
    HullSample,
    displacement_decay,
    hull_point,
    random_hull_sample,
    verify_counterexample,
)
from .dynamics import (
    BoundCertificate,
    FixedPointReport,
    OrbitTrace,
    TargetSet,
    banach_density_estimate,
    empirical_measure,
    fixed_point_solve,
    invariance_residual,
    orbit,
    orbit_bound_certificate,
)
from .isometries import (
    Composition,
    Isometry,
    LegPermutation,
    Rotation,
    Shift,
    Translation,
    identity_for,
    isometry_from_descriptor,
)
from .spaces import (
    EuclideanSpace,
    Space,
    SpaceError,
    SparseSeq,
    StarSeqSpace,
    StarTreeSpace,
    l1_norm,
    space_from_descriptor,
    star_norm,
    star_norm_sq,
)
from .wasserstein import (
    AtomicMeasure,
    pushforward,
    quantize,
    w1_atomic,
    w1_uniform,
    w1_uniform_bruteforce,
)

__version__ = "0.1.0"
