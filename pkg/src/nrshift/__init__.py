"""Numerical ranges of matrices and of compressed shift operators."""

from .errors import ConvergenceError, InputError, NRError, NumericalError
from .geometry import ConvexPolygon, convex_hull, hausdorff_distance, polygon_intersection
from .linalg import hermitian_eigs, operator_norm, poly_roots
from .numrange import (
    Ellipse,
    NumericalRangeApprox,
    bounding_rectangle,
    crouzeix_ratio,
    elliptical_range,
    numerical_radius,
    numerical_range,
)
from .shift import (
    BlaschkeProduct,
    blaschke_eval,
    dilation_eigenvalues,
    numrange_via_dilations,
    poncelet_polygon,
    sb_matrix,
    unitary_dilation,
)
from .envelope import (
    CircleFamily,
    EnvelopePoint,
    SupportLineFamily,
    discriminant_envelope,
    ert_envelope,
    family_F,
    verify_on_ellipse,
)
from .bidisk import (
    RationalInnerFunction,
    bidisk_numrange,
    bidisk_numrange_via_mtheta,
    boundary_curve,
    exceptional_check,
    mtheta_fixture,
    reflect_poly,
    slice_blaschke,
)

__version__ = "0.1.0"
