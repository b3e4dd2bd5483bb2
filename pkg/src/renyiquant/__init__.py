"""Scalar quantizer design and evaluation under generalized entropy constraints.

The package covers the full desk-scale loop: describe a source density,
predict the high-resolution scaled-distortion limit at any entropy order,
build the companding quantizer that attains it, measure the true entropy and
distortion at finite level counts, and cross-check everything against exact
small-instance optima.
"""

from .compander import Compander, bennett_functional, compressed_density, entropy_offset
from .core import (
    NEG_INF,
    POS_INF,
    SHANNON,
    ExponentPair,
    RenyiOrder,
    as_order,
    distortion_constant,
    exponents,
    parse_order,
)
from .densities import (
    Density,
    Interval,
    PiecewiseConstantDensity,
    SmoothDensity,
    density_from_spec,
    density_to_spec,
    truncated_gauss,
    truncated_laplace,
    uniform,
)
from .design import (
    PredictedLimit,
    compander_score,
    design_compander,
    optimal_point_density,
    pierce_upper_bound,
    predicted_limit,
    predicted_limit_high_alpha,
    uniform_optimal,
)
from .entropy import differential_entropy, relative_entropy, renyi_entropy
from .mixture import (
    MixtureComponent,
    MixtureSpec,
    allocate_rates,
    allocation_weights,
    check_rate_condition,
    compose,
    composed_entropy,
    f_functional,
    f_minimizer,
)
from .oracle import (
    GridInstance,
    MonotonicityError,
    OracleResult,
    alpha_profile,
    brute_force_optimal,
    empirical_limit_probe,
    instance_from_spec,
    instance_to_spec,
)
from .quantizer import (
    IntervalQuantizer,
    cell_distortion,
    cell_masses,
    distortion,
    improve_codepoints,
    optimal_codepoint,
    quantizer_entropy,
    transform_quantizer,
    uniform_quantizer,
)
from .verification import SuiteResult, run_all

__version__ = "0.1.0"
