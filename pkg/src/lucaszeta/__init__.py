"""Zeta, theta and Hurwitz-type zeta functions of Lucas sequences U_n(P, Q)."""
from .errors import (
    ConvergenceError,
    DomainError,
    HeuristicRatioWarning,
    LucasZetaError,
    NearPoleError,
    ParameterError,
    PoleError,
    QuadratureError,
    SequenceOverflowError,
)
from .hurwitz import (
    HurwitzEvalReport,
    geometric_q0_suite,
    hurwitz_continued,
    hurwitz_direct,
    hurwitz_pole_map,
    hurwitz_residue_lattice,
    hurwitz_residue_neg_int,
)
from .lucas_core import (
    DEFAULT_CONFIG,
    PRESETS,
    EvalConfig,
    LucasParams,
    RatioClass,
    classify_ratio,
    geomsum_params,
    u_n,
    v_n,
    validate_params,
)
from .lucas_zeta import (
    Origin,
    PoleSpec,
    Region,
    classify_neg_int_poles,
    constant_term_at_neg_pole,
    laurent_at_zero,
    zeta_continued,
    zeta_direct,
    zeta_poles,
)
from .theta import ThetaExpansion, build_expansion, eval_expansion, expansion_error_order, theta_direct

__version__ = "0.1.0"
