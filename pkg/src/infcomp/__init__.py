"""Certified evaluation of infinite compositions of normalized entire functions.

The building blocks are truncated power series (:mod:`infcomp.series`),
convergence certificates built from the per-factor constants
``C_n = max_r |c_{n,r}|**(1/(r-1))`` (:mod:`infcomp.convergence`), a pointwise
evaluator with rigorous truncation bounds (:mod:`infcomp.composer`) and the
quadratic Poincare functions ``F(sz) = s F(z) + s F(z)**2``
(:mod:`infcomp.poincare`).
"""

from infcomp.errors import (
    BudgetExceeded,
    CertificationError,
    EvaluationOverflow,
    InfCompError,
    OutsideCertifiedDisk,
)
from infcomp.series import (
    TruncatedSeries,
    compose,
    derivative,
    eval_majorant,
    evaluate,
    hat,
    make_series,
)
from infcomp.convergence import (
    ConvergenceCertificate,
    FactorFamily,
    cauchy_diff_bound,
    certify,
    cn_of,
    majorant_bound,
    plan_split,
    truncation_error,
)
from infcomp.composer import (
    EvalPlan,
    EvalResult,
    compose_pointwise,
    eval_certified,
    head_lipschitz,
    limit_series,
)
from infcomp.poincare import (
    PoincareSpec,
    functional_residual,
    lemma31_residual,
    oracle_h,
    poincare_eval,
    uniqueness_probe,
)

__version__ = "0.1.0"
