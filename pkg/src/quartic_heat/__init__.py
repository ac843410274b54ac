"""Heat kernels of fourth-order operators with symbol
A(xi) = alpha xi1^4 + 2 beta xi1^2 xi2^2 + gamma xi2^4.

Sharp Gaussian constants, the dual quasi-norm distance, a contour-shifted
quadrature oracle for G(x, t) and saddle-point models of its short-time
behaviour.
"""

__version__ = "0.1.0"

from .symbol import (
    Branch,
    CoefficientBatch,
    Coefficients,
    EllipticityError,
    Regime,
    check_sg_identity,
    classify,
    convexity_data,
    ellipticity_constant,
    eval_symbol_complex,
    eval_symbol_real,
    gamma_form,
    k_of_q,
    lemma1_decomposition,
    p_vector,
    real_part_expansion,
    sigma_of_k,
    sigma_of_q,
)
from .finsler import (
    ConvergenceError,
    DirectionAnalysis,
    check_aq_distance,
    closed_form_d0,
    direction_stationarity,
    distance_d0,
    dual_norm_p_star,
    quasi_norm_p,
    solve_q,
)
from .quadrature import (
    CancellationError,
    KernelValue,
    QuadratureSpec,
    ToleranceError,
    f_lambda,
    f_lambda_direct,
    f_lambda_shifted,
    green_function,
    kernel_1d,
    lambda_of_t,
    t_of_lambda,
)
from .saddle import (
    AsymptoticEstimate,
    SaddlePoint,
    UnsupportedConfiguration,
    contribution,
    ep_analysis,
    ep_estimate,
    equality_locus_check,
    estimate_for,
    optimal_shift,
    saddle_set,
    theorem2_estimate,
)
from .field import CoefficientField, FieldReport, analyze_field, gaussian_bound_check
from .sweep import SweepConfig, run_sweep

__all__ = [name for name in dir() if not name.startswith("_")]
