"""Spectral quantities of collapsing principal torus bundles at desk scale."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CollapseLabError,
    DegenerateMetric,
    InvalidParameter,
    NotApplicable,
    NotInjective,
)
from .lattice import (  # noqa: E402
    GramMatrix,
    collapse_gram,
    dual_gram,
    injectivity_radius,
    shortest_vector,
    shortest_vector_oracle,
    volume,
)
from .diophantine import (  # noqa: E402
    CollapseDirection,
    approx_constant,
    cubic_direction,
    direction_frame,
    golden_direction,
)
from .spectrum import flow_threshold, function_spectrum, invariance_threshold, pform_spectrum  # noqa: E402
from .euler import (  # noqa: E402
    BaseManifoldData,
    EulerMap,
    det_bound,
    gram_ee,
    kunneth,
    restricted_bound,
    rho,
)
from .jacobi import lambda_min_sym  # noqa: E402
from .smith import integer_kernel, smith_normal_form  # noqa: E402
from .bounds import dodziuk_factor, fmin_closed, oneill_bounds  # noqa: E402
from .collapse import CollapseFamily, CollapseReport, CollapseSample, ScalingFit, evaluate, sweep  # noqa: E402
