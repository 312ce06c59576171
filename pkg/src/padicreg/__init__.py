"""Exact p-adic linear regression, polynomial approximation and hierarchy encoding."""

from .errors import (
    DegenerateDataError,
    InconsistentDataError,
    InsufficientDataError,
    PreconditionError,
)
from .kernels import BACKEND
from .padic_core import INF, Prime, abs_p, dist_p, format_rational, is_prime, parse_rational, vp
from .solver import (
    AffineModel,
    Dataset,
    DescentStep,
    FitReport,
    check_nondegenerate,
    descend,
    evaluate_loss,
    fit,
    fit_exact,
    fit_large_prime,
    hyperplane_through,
    ols_baseline,
    residuals,
)

__version__ = "0.1.0"
