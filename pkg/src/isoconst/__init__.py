"""Isosceles-orthogonality constants of two-dimensional normed planes."""

from .errors import (
    BoundViolation,
    ConvergenceError,
    DomainError,
    InputError,
    ParseError,
    SpecificationError,
)
from .estimators import (
    BR,
    CNJ,
    DCONST,
    JAMES,
    OMEGA,
    OMEGA_PRIME,
    SCHAFFER,
    ConstantKind,
    Delta,
    Direction,
    Estimate,
    Gamma,
    GridConfig,
    Witness,
    estimate,
    estimate_br,
    estimate_cnj,
    estimate_d,
    estimate_delta,
    estimate_gamma,
    estimate_james,
    estimate_omega,
    estimate_omega_prime,
    estimate_schaffer,
    omega_ratio,
    reevaluate,
)
from .geometry import (
    HEX,
    L1,
    L2,
    LINF,
    AffineImage,
    AxiomReport,
    HexagonalMixed,
    Lp,
    NormSpec,
    Polyhedral,
    SpherePoint,
    Vec2,
    eval_norm,
    polyhedral_from_vertices,
    unit_point,
    verify_norm_axioms,
)
from .orthogonality import (
    OrthoKind,
    OrthoPair,
    birkhoff_lambda_min,
    birkhoff_partners,
    is_birkhoff,
    isosceles_partner,
    isosceles_residual,
)
from .relations import (
    RelationReport,
    check_cnj_bound,
    check_gamma_identity,
    check_james_bounds,
    check_js_product,
    check_nonsquare_equivalence,
    check_omega_range,
    default_battery,
    run_battery,
)
from .symmetric_plane import AxesPair, check_axes, f_func, g_func, omega_closed_form

__version__ = "0.1.0"
