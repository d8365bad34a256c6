"""Exact continued fractions, linear recurrences and convergent experiments."""

from .algebraic import (
    AlgebraicReal,
    CertifiedDistance,
    PowerThreshold,
    RationalInterval,
    Verdict,
    floor_of,
    make_algebraic,
    nearest_distance,
    real_root,
    refine,
    trace_power_sums,
)
from .cfrac import (
    ContinuedFractionExpansion,
    Membership,
    PeriodicCF,
    QuadraticSurd,
    expand,
    expand_quadratic,
    is_convergent_legendre,
    mu_lower_estimate,
    period_matrix_trace,
)
from .construct import EMConfig, EMWitness, alternating_build, em_build, em_verify
from .digits import digit_stats, lowdc_divisor_max, sparse_divisor_max, zeckendorf
from .poly import IntPolynomial
from .recurrence import LinearRecurrence, RecurrenceClassification, classify, decompose, minimize, unity_ratio_lcm
from .smooth import PrimeSet, gpf_bounded, s_part, smooth_next

__version__ = "0.1.0"
