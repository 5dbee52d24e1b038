"""Decision tree from (alpha, moment index, mean status, degeneracy) to the
Chover-type LIL verdict.

For 0 < alpha <= 2 and the index beta = inf{b : E(|X|^alpha/(L|X|)^(b*alpha))
< inf}, membership in the class with limsup |S_n/n^(1/alpha)|^(1/LL n) =
e^beta is characterised case by case:

alpha = 2      zero mean and index in (0, inf): member at beta = index.
               Zero mean and index 0 (the inf runs over b > 0 here, so 0 is
               the floor): member at beta = 0 for any non-degenerate X.
               X = 0 a.s.: the limit is 0.  Nonzero mean or infinite index:
               limsup is infinite.  No X at all satisfies a negative beta at
               alpha = 2 (|S_n/sqrt(n)| of a mean-shifted walk can only reach
               0 or infinity on the exponent scale).
1 < alpha < 2  zero mean and finite index: member at beta = index; zero mean
               and index -inf: limit 0; otherwise limsup infinite.
alpha = 1      positive finite index: member regardless of mean; finite
               nonzero mean: member at beta = 0 with limit exactly 1; zero
               mean with negative finite index: member; zero mean with index
               -inf: limit 0; infinite index: limsup infinite.
0 < alpha < 1  finite index: member, no mean condition; +-inf index: limsup
               infinite / limit 0.

Contradictory hypothesis combinations (an undefined-mean variable with a
negative index, say: a negative index forces E|X| < inf) raise instead of
guessing, since the characterisations are biconditional and a contradiction
means the caller's facts are wrong.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .distributions import DistributionSpec, MeanStatus, constant_value, mean_status
from .moment_index import moment_index_analytic
from .numeric_core import NEG_INF, POS_INF, ExtendedReal

__all__ = [
    "ClassificationVerdict",
    "InconsistentInputError",
    "classify",
    "classify_spec",
    "OUTCOME_MEMBER",
    "OUTCOME_LIMSUP_INFINITE",
    "OUTCOME_LIMIT_ZERO",
    "OUTCOME_IMPOSSIBLE_BETA",
]

OUTCOME_MEMBER = "member"
OUTCOME_LIMSUP_INFINITE = "limsup_infinite"
OUTCOME_LIMIT_ZERO = "limit_zero"
OUTCOME_IMPOSSIBLE_BETA = "impossible_beta"

# Rule identifiers carried on every verdict (exactly one each).
TAG_ALPHA2_POSITIVE_INDEX = "alpha2-positive-index"
TAG_ALPHA2_ZERO_INDEX = "alpha2-zero-index"
TAG_ALPHA2_NEGATIVE_BETA = "alpha2-negative-beta-impossible"
TAG_ALPHA_BETWEEN_1_AND_2 = "alpha-in-1-2"
TAG_ALPHA_EQ_1 = "alpha-eq-1"
TAG_ALPHA_BELOW_1 = "alpha-below-1"
TAG_LIMIT_ZERO = "limit-zero-rule"
TAG_LIMSUP_INFINITE = "limsup-infinite-rule"

_ALL_TAGS = frozenset(
    {
        TAG_ALPHA2_POSITIVE_INDEX,
        TAG_ALPHA2_ZERO_INDEX,
        TAG_ALPHA2_NEGATIVE_BETA,
        TAG_ALPHA_BETWEEN_1_AND_2,
        TAG_ALPHA_EQ_1,
        TAG_ALPHA_BELOW_1,
        TAG_LIMIT_ZERO,
        TAG_LIMSUP_INFINITE,
    }
)


class InconsistentInputError(ValueError):
    """The (alpha, index, mean) facts contradict each other."""


@dataclass(frozen=True)
class ClassificationVerdict:
    outcome: str
    beta: float | None
    theorem_tag: str
    hypotheses_used: tuple[str, ...]
    note: str = ""

    def __post_init__(self) -> None:
        if self.theorem_tag not in _ALL_TAGS:
            raise ValueError(f"unknown rule tag {self.theorem_tag!r}")
        if self.outcome == OUTCOME_MEMBER and self.beta is None:
            raise ValueError("member verdicts carry a beta")

    def to_json_dict(self) -> dict:
        out = {
            "outcome": self.outcome,
            "beta": self.beta,
            "theorem_tag": self.theorem_tag,
            "hypotheses_used": list(self.hypotheses_used),
        }
        if self.note:
            out["note"] = self.note
        return out

    def to_json(self) -> str:
        def _enc(v):
            if isinstance(v, float) and not math.isfinite(v):
                return str(v)
            return v

        return json.dumps({k: _enc(v) for k, v in self.to_json_dict().items()})


def _member(beta: float, tag: str, hyp: list[str], note: str = "") -> ClassificationVerdict:
    return ClassificationVerdict(OUTCOME_MEMBER, beta, tag, tuple(hyp), note)


def classify(
    alpha: float,
    index: ExtendedReal,
    mean: MeanStatus,
    degenerate_zero: bool,
    requested_beta: float | None = None,
) -> ClassificationVerdict:
    """Produce the verdict for the given hypotheses.

    ``index`` must follow the convention recorded by the index computation:
    at alpha = 2 the infimum runs over b > 0, so the value arrives clamped at
    zero.  ``requested_beta`` only matters at alpha = 2, where negative betas
    are impossible for every X and short-circuit to that verdict.
    """
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"alpha must be in (0, 2], got {alpha!r}")
    if math.isnan(index):
        raise ValueError("index must not be NaN")
    hyp = [f"moment index = {index}", f"mean: {mean.kind}"]
    if degenerate_zero:
        hyp.append("X = 0 a.s.")

    if alpha == 2.0:
        if requested_beta is not None and requested_beta < 0.0:
            return ClassificationVerdict(
                OUTCOME_IMPOSSIBLE_BETA,
                requested_beta,
                TAG_ALPHA2_NEGATIVE_BETA,
                tuple(hyp),
                "no real-valued X attains a negative exponent at alpha = 2",
            )
        if degenerate_zero:
            return ClassificationVerdict(
                OUTCOME_LIMIT_ZERO, None, TAG_LIMIT_ZERO, tuple(hyp)
            )
        if not mean.is_zero:
            return ClassificationVerdict(
                OUTCOME_LIMSUP_INFINITE, None, TAG_LIMSUP_INFINITE, tuple(hyp)
            )
        if index == POS_INF:
            return ClassificationVerdict(
                OUTCOME_LIMSUP_INFINITE, None, TAG_LIMSUP_INFINITE, tuple(hyp)
            )
        if index > 0.0:
            return _member(index, TAG_ALPHA2_POSITIVE_INDEX, hyp)
        return _member(0.0, TAG_ALPHA2_ZERO_INDEX, hyp)

    if 1.0 < alpha < 2.0:
        if not mean.is_zero or index == POS_INF:
            return ClassificationVerdict(
                OUTCOME_LIMSUP_INFINITE, None, TAG_LIMSUP_INFINITE, tuple(hyp)
            )
        if index == NEG_INF:
            return ClassificationVerdict(
                OUTCOME_LIMIT_ZERO, None, TAG_LIMIT_ZERO, tuple(hyp)
            )
        return _member(index, TAG_ALPHA_BETWEEN_1_AND_2, hyp)

    if alpha == 1.0:
        if index == POS_INF:
            return ClassificationVerdict(
                OUTCOME_LIMSUP_INFINITE, None, TAG_LIMSUP_INFINITE, tuple(hyp)
            )
        if index > 0.0:
            # positive index forces E|X| = inf, so no mean condition applies
            return _member(index, TAG_ALPHA_EQ_1, hyp, "positive-index branch")
        if mean.is_nonzero_finite:
            return _member(
                0.0,
                TAG_ALPHA_EQ_1,
                hyp,
                "finite nonzero mean: lim = 1 (beta = 0 by the nonzero-mean disjunct)",
            )
        if index == 0.0:
            return _member(0.0, TAG_ALPHA_EQ_1, hyp, "zero-index disjunct")
        # index < 0 (possibly -inf): that much integrability forces E|X| < inf,
        # so an undefined/infinite mean contradicts the index.
        if not mean.is_zero:
            raise InconsistentInputError(
                f"alpha = 1 with index {index} < 0 forces E|X| < inf, "
                f"but mean status is {mean.kind!r}"
            )
        if index == NEG_INF:
            return ClassificationVerdict(
                OUTCOME_LIMIT_ZERO, None, TAG_LIMIT_ZERO, tuple(hyp)
            )
        return _member(index, TAG_ALPHA_EQ_1, hyp, "negative-index branch")

    # 0 < alpha < 1: no mean condition in any branch
    if index == POS_INF:
        return ClassificationVerdict(
            OUTCOME_LIMSUP_INFINITE, None, TAG_LIMSUP_INFINITE, tuple(hyp)
        )
    if index == NEG_INF:
        return ClassificationVerdict(OUTCOME_LIMIT_ZERO, None, TAG_LIMIT_ZERO, tuple(hyp))
    return _member(index, TAG_ALPHA_BELOW_1, hyp)


def classify_spec(
    spec: DistributionSpec, alpha: float, requested_beta: float | None = None
) -> ClassificationVerdict:
    """Classify a built-in family: compose the analytic index, the mean rule
    table and degeneracy detection, then run the decision tree."""
    idx = moment_index_analytic(spec, alpha)
    mean = mean_status(spec)
    const = constant_value(spec)
    verdict = classify(
        alpha,
        idx.index,
        mean,
        degenerate_zero=(const == 0.0),
        requested_beta=requested_beta,
    )
    extra = (
        f"index convention: {idx.convention}",
        f"spec: {spec!r}",
    )
    return ClassificationVerdict(
        verdict.outcome,
        verdict.beta,
        verdict.theorem_tag,
        verdict.hypotheses_used + extra,
        verdict.note,
    )
