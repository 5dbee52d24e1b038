"""Chover-type law of the iterated logarithm toolkit.

Computes the log-moment index of heavy-tailed distributions, classifies
families by the value of limsup |S_n / n^(1/alpha)|^(1/log log n), and
verifies the classification empirically via seeded Monte Carlo partial-sum
simulation and a deterministic finite-prefix limsup calculus.
"""

from .numeric_core import (
    CANCELLATION_EPS,
    NEG_INF,
    POS_INF,
    ExtendedReal,
    L,
    LL,
    SignedLogValue,
    slv_add,
    slv_scale_pow,
)
from .distributions import (
    AsymptoticNotApplicableError,
    Degenerate,
    DistributionSpec,
    GaussianUnitVariance,
    LatticeExp2,
    LogWeibullTail,
    MeanStatus,
    Shifted,
    SymmetricStable,
    UnsupportedFamilyError,
    lattice_constant,
    lattice_sample,
    logweibull_sample,
    mean_status,
    sample_block,
    sample_values,
    stable_sample,
    tail_prob_log,
)
from .moment_index import (
    FinitenessCertificate,
    IndexNotResolvableError,
    MomentIndexResult,
    TailEvaluationError,
    einmahl_li_condition,
    moment_functional,
    moment_index_analytic,
    moment_index_numeric,
    truncated_second_moment,
)
from .sequence_calculus import (
    DichotomyReport,
    ScaledSequence,
    chover_exponent_lim,
    chover_exponent_liminf,
    chover_exponent_limsup,
    dichotomy_probe,
)
from .simulator import (
    AggregateSummary,
    Checkpoint,
    PathTrace,
    SimulationConfig,
    SimulationOverflowError,
    aggregate,
    derive_path_seed,
    run_path,
    run_paths,
)
from .classifier import (
    ClassificationVerdict,
    InconsistentInputError,
    classify,
    classify_spec,
)

__version__ = "0.1.0"
