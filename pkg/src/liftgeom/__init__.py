"""Numeric differential geometry of lifted metrics on tangent bundles.

The package builds three lifts of a base Riemannian metric to the
tangent bundle (the Sasaki lift, a fiber scaling by a positive function,
and a rank-one gradient deformation), computes connections, curvature,
tension and bitension fields generically through truncated Taylor-jet
differentiation, and verifies closed-form expressions for these objects
against the generic computation.
"""

from .bundle import (
    BundlePoint, LiftedVector, adapted_frame, horizontal_lift,
    mus_gradient_metric, mus_sasaki_metric, sasaki_metric, tangent_chart,
    vertical_lift,
)
from .errors import (
    DomainError, GeometryError, LiftGeomError, ParseError, ScenarioError,
)
from .expr import eval_expr, parse, to_str
from .findiff import fd_derivative
from .geometry import (
    Chart, Frame, MetricField, ScalarField, TangentVector, alpha, christoffel,
    curvature_apply, grad, inverse_metric_at, laplacian, metric_at,
    nabla_grad, orthonormal_frame, ricci_operator, riemann, trace_hessian_vec,
)
from .jets import Jet, jet_apply, jet_combine, jet_compose, jet_var
from .maps import (
    MapClassification, SmoothMap, bitension, classify, jacobi,
    pullback_cov_deriv, tension,
)
from .report import Report
from .scenarios import Scenario, example, from_file
from .verify import suite, verify

__version__ = "0.1.0"
