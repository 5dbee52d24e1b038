"""Signed log-domain arithmetic and truncated logarithms.

Partial sums of the heavy-tailed families in this package reach magnitudes
like exp(2**n), far beyond IEEE double range, so every magnitude-sensitive
quantity travels as a (sign, log of magnitude) pair.  The module also provides
the truncated logarithms

    L(x)  = log(max(e, x))      >= 1 for all x >= 0
    LL(x) = L(L(x))             >= 1 for all x >= 0

which serve as scaling sequences everywhere else: both are bounded away from
zero, so exponents of the form 1/LL(n) stay well conditioned.

All operations are pure; values are immutable and safe to share across
workers.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

__all__ = [
    "CANCELLATION_EPS",
    "NEG_INF",
    "POS_INF",
    "ExtendedReal",
    "SignedLogValue",
    "L",
    "LL",
    "slv_add",
    "slv_scale_pow",
]

# Reals extended with +-inf.  IEEE doubles already carry both infinities with
# the required total order (-inf < finite < +inf), so no wrapper type is
# needed; the alias documents intent at call sites.
ExtendedReal = float

POS_INF = float("inf")
NEG_INF = float("-inf")

#: Opposite-sign additions whose log-magnitudes differ by less than this are
#: declared exact cancellations: below it the log-difference formula is
#: numerically meaningless.
CANCELLATION_EPS = 1e-12

_LOG_MAX = math.log(sys.float_info.max)


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as sign in {-1, 0, +1} and log of magnitude.

    ``sign == 0`` encodes exactly zero; its ``log_mag`` is normalised to
    ``-inf`` so that all zeros compare (and hash) equal regardless of the
    magnitude they were built with.
    """

    sign: int
    log_mag: float

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if math.isnan(self.log_mag):
            raise ValueError("log_mag must not be NaN")
        if self.sign == 0 and self.log_mag != NEG_INF:
            object.__setattr__(self, "log_mag", NEG_INF)

    @classmethod
    def zero(cls) -> "SignedLogValue":
        return cls(0, NEG_INF)

    @classmethod
    def from_real(cls, r: float) -> "SignedLogValue":
        if math.isnan(r):
            raise ValueError("cannot represent NaN")
        if r == 0.0:
            return cls.zero()
        return cls(1 if r > 0 else -1, math.log(abs(r)))

    def to_real(self) -> float:
        """Convert back to a plain float; saturates to +-inf beyond range."""
        if self.sign == 0:
            return 0.0
        if self.log_mag > _LOG_MAX:
            return self.sign * POS_INF
        return self.sign * math.exp(self.log_mag)

    def is_zero(self) -> bool:
        return self.sign == 0

    def __neg__(self) -> "SignedLogValue":
        return SignedLogValue(-self.sign, self.log_mag)


def slv_add(x: SignedLogValue, y: SignedLogValue) -> SignedLogValue:
    """Add two signed log-domain values.

    Same-sign additions use log-sum-exp; opposite signs use a log-difference
    anchored at the larger magnitude.  Opposite-sign operands whose
    log-magnitudes agree within ``CANCELLATION_EPS`` cancel exactly to zero.
    Total: never raises.
    """
    if x.sign == 0:
        return y
    if y.sign == 0:
        return x
    if x.log_mag >= y.log_mag:
        big, small = x, y
    else:
        big, small = y, x
    d = small.log_mag - big.log_mag  # <= 0
    if x.sign == y.sign:
        return SignedLogValue(x.sign, big.log_mag + math.log1p(math.exp(d)))
    if d > -CANCELLATION_EPS:
        return SignedLogValue.zero()
    return SignedLogValue(big.sign, big.log_mag + math.log1p(-math.exp(d)))


def slv_scale_pow(x: SignedLogValue, base_log: float, exponent: float) -> SignedLogValue:
    """Divide ``x`` by ``base**exponent`` where ``base_log = log(base)``.

    Runs entirely in the log domain (subtracts ``exponent * base_log`` from
    the log-magnitude), so the scale factor itself may be far outside float
    range.  Zero absorbs.
    """
    if x.sign == 0:
        return x
    return SignedLogValue(x.sign, x.log_mag - exponent * base_log)


def L(x: float) -> float:
    """Truncated natural logarithm log(max(e, x)); requires x >= 0."""
    if math.isnan(x) or x < 0:
        raise ValueError(f"L(x) requires x >= 0, got {x!r}")
    return math.log(x) if x > math.e else 1.0


def LL(x: float) -> float:
    """Doubly truncated logarithm L(L(x)); requires x >= 0."""
    return L(L(x))
