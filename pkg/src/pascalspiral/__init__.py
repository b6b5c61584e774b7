"""Pascal distribution series and the uniformly spirallike classes TSP_p, UCT_p."""

from .class_criteria import (
    ClassKind,
    ClassParams,
    Criterion,
    CriterionKind,
    MembershipVerdict,
    Method,
    closed_form,
    corollary_beta0,
    geometric_sample,
    lemma1_sum,
    lemma2_sum,
    numeric_oracle,
    spiral_margin,
    thm1_closed,
    thm2_closed,
    thm5_closed,
    thm6_closed,
)
from .errors import (
    CertificationError,
    DomainError,
    EvaluationError,
    MonotonicityError,
    PreconditionError,
    UnboundedSumError,
)
from .explorer import OutputRow, ThresholdResult, q_star, sweep
from .inclusion import RTauParams, extremal_coefficients, lemma3_bound, rtau_margin, thm3_sufficient, thm4_sufficient
from .pascal_core import (
    MomentSums,
    PascalParams,
    apply_operator,
    closed_geometric_sums,
    coefficient,
    eval_G,
    eval_phi,
    eval_phi_deriv,
    eval_psi,
    integral_series,
    moment_sums,
    pascal_series,
    pmf,
)
from .series import CoefficientSeries, SignConvention, TailBound, certified_sum
from .verify import equivalence_report, necessity_witness

__version__ = "0.1.0"
