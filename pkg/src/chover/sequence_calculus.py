"""Finite-prefix limsup calculus for scaled sequences.

Given a real sequence a_n and positive scales c_n growing without bound, the
quantity |a_n|^(1/c_n) has a limsup of the form e^beta, and beta is
equivalently characterised by the ratio dichotomy

    |a_n| / e^(b*c_n)  ->  0          for every b > beta,
    |a_n| / e^(b*c_n)  unbounded      for every b < beta.

This module extracts beta from a finite prefix (max / min of log|a_n| / c_n
over a trailing window) and probes the dichotomy at beta +- delta.  Both are
inherently heuristic on finite data, so the window parameters are surfaced
rather than hidden: ``tail_fraction`` picks the trailing window and
``spread_tol`` decides when the limit is declared convergent.

Sequences can be built from plain values or directly from log-magnitudes;
the latter survives entries like exp(2^40) that overflow floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .numeric_core import NEG_INF, ExtendedReal

__all__ = [
    "ScaledSequence",
    "LimResult",
    "DichotomyProbeResult",
    "DichotomyReport",
    "chover_exponent_limsup",
    "chover_exponent_liminf",
    "chover_exponent_lim",
    "dichotomy_probe",
    "DEFAULT_SPREAD_TOL",
]

DEFAULT_SPREAD_TOL = 0.1


@dataclass(frozen=True)
class ScaledSequence:
    """A finite prefix of (a_n, c_n) with a trailing evaluation window.

    ``log_abs_a`` stores log|a_n| (-inf encodes a_n = 0).  ``c`` must be
    positive, nondecreasing over the tail window, and overall increasing
    (c[last] > c[first]) as the finite surrogate of c_n -> inf.
    """

    log_abs_a: np.ndarray
    c: np.ndarray
    tail_fraction: float = 0.5

    def __post_init__(self) -> None:
        log_abs_a = np.asarray(self.log_abs_a, dtype=np.float64)
        c = np.asarray(self.c, dtype=np.float64)
        object.__setattr__(self, "log_abs_a", log_abs_a)
        object.__setattr__(self, "c", c)
        if log_abs_a.ndim != 1 or c.ndim != 1 or log_abs_a.size != c.size:
            raise ValueError("a and c must be 1-d arrays of equal length")
        if log_abs_a.size == 0:
            raise ValueError("sequence must be non-empty")
        if np.isnan(log_abs_a).any() or (log_abs_a == np.inf).any():
            raise ValueError("log|a| entries must be finite or -inf")
        if not np.isfinite(c).all() or (c <= 0).any():
            raise ValueError("scales c must be finite and positive")
        if not 0.0 < self.tail_fraction <= 1.0:
            raise ValueError(f"tail_fraction must lie in (0, 1], got {self.tail_fraction!r}")
        if c.size > 1 and not c[-1] > c[0]:
            raise ValueError("scales must grow: c[last] > c[first]")
        tail = self.tail_slice
        c_tail = c[tail]
        if c_tail.size == 0:
            raise ValueError("tail window is empty")
        if (np.diff(c_tail) < 0).any():
            raise ValueError("scales must be nondecreasing over the tail window")

    @classmethod
    def from_values(cls, a, c, tail_fraction: float = 0.5) -> "ScaledSequence":
        a = np.asarray(a, dtype=np.float64)
        if not np.isfinite(a).all():
            raise ValueError("a entries must be finite reals")
        with np.errstate(divide="ignore"):
            log_abs = np.log(np.abs(a))
        return cls(log_abs, np.asarray(c, dtype=np.float64), tail_fraction)

    @classmethod
    def from_log_magnitudes(cls, log_abs_a, c, tail_fraction: float = 0.5) -> "ScaledSequence":
        return cls(np.asarray(log_abs_a, dtype=np.float64), np.asarray(c, dtype=np.float64), tail_fraction)

    @property
    def tail_slice(self) -> slice:
        window = math.ceil(self.tail_fraction * self.log_abs_a.size)
        return slice(self.log_abs_a.size - window, self.log_abs_a.size)

    def exponent_track(self) -> np.ndarray:
        """log|a_n| / c_n pointwise; -inf where a_n = 0."""
        with np.errstate(invalid="ignore"):
            return self.log_abs_a / self.c


class LimResult(NamedTuple):
    value: ExtendedReal
    converged: bool


def chover_exponent_limsup(s: ScaledSequence) -> ExtendedReal:
    """Max of log|a_n|/c_n over the tail window (the finite-prefix limsup exponent)."""
    return float(np.max(s.exponent_track()[s.tail_slice]))


def chover_exponent_liminf(s: ScaledSequence) -> ExtendedReal:
    """Min of log|a_n|/c_n over the tail window."""
    return float(np.min(s.exponent_track()[s.tail_slice]))


def chover_exponent_lim(s: ScaledSequence, spread_tol: float = DEFAULT_SPREAD_TOL) -> LimResult:
    """Converged iff the tail-window spread of log|a_n|/c_n is within spread_tol."""
    hi = chover_exponent_limsup(s)
    lo = chover_exponent_liminf(s)
    if hi == lo:
        return LimResult(hi, True)
    return LimResult(0.5 * (hi + lo), bool(hi - lo <= spread_tol))


@dataclass(frozen=True)
class DichotomyProbeResult:
    """One side of the dichotomy probe.

    ``log_ratio_b`` / ``log_ratio_h`` are the trajectories of
    log(|a_n| / e^(b*c_n)) at the probe exponent b and at the halfway point h
    between beta and b (the halfway trajectory is diagnostic only: the
    pass/fail decision reads the b trajectory).
    """

    b: float
    h: float
    log_ratio_b: np.ndarray = field(repr=False)
    log_ratio_h: np.ndarray = field(repr=False)
    passed: bool
    detail: str


@dataclass(frozen=True)
class DichotomyReport:
    beta: float
    delta: float
    upper: DichotomyProbeResult
    lower: DichotomyProbeResult

    @property
    def passed(self) -> bool:
        return self.upper.passed and self.lower.passed


def _log_ratio(s: ScaledSequence, b: float) -> np.ndarray:
    return s.log_abs_a - b * s.c


def dichotomy_probe(s: ScaledSequence, beta: float, delta: float) -> DichotomyReport:
    """Probe the ratio dichotomy at beta +- delta.

    Upper probe (b = beta + delta): the ratio |a_n|/e^(b*c_n) must be heading
    to zero, operationalised on the finite window as: the ratio at the last
    index is below the ratio at the window start, and below 1.  A sequence
    ending at exact zero passes outright.

    Lower probe (b = beta - delta): mirror image, the ratio must be growing
    across the window and exceed 1 at the last index.

    Each probe also carries the trajectory at the halfway exponent
    h = beta +- delta/2, the probe placement that separates the two regimes.
    A report is always produced; nothing raises.
    """
    if not delta > 0.0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    if not math.isfinite(beta):
        raise ValueError(f"beta must be finite, got {beta!r}")
    w_start = s.tail_slice.start

    b_up = beta + delta
    lr_up = _log_ratio(s, b_up)
    if lr_up[-1] == NEG_INF:
        up_pass, up_detail = True, "ratio is exactly zero at the last index"
    else:
        decreasing = lr_up[-1] < lr_up[w_start]
        below_one = lr_up[-1] < 0.0
        up_pass = bool(decreasing and below_one)
        up_detail = (
            f"last log-ratio {lr_up[-1]:.6g} vs window start {lr_up[w_start]:.6g}; "
            f"{'decays and ends below 1' if up_pass else 'fails to decay below 1'}"
        )
    upper = DichotomyProbeResult(
        b=b_up,
        h=beta + delta / 2.0,
        log_ratio_b=lr_up,
        log_ratio_h=_log_ratio(s, beta + delta / 2.0),
        passed=up_pass,
        detail=up_detail,
    )

    b_dn = beta - delta
    lr_dn = _log_ratio(s, b_dn)
    if lr_dn[-1] == NEG_INF:
        dn_pass, dn_detail = False, "ratio is exactly zero at the last index"
    else:
        growing = lr_dn[-1] > lr_dn[w_start]
        above_one = lr_dn[-1] > 0.0
        dn_pass = bool(growing and above_one)
        dn_detail = (
            f"last log-ratio {lr_dn[-1]:.6g} vs window start {lr_dn[w_start]:.6g}; "
            f"{'grows and ends above 1' if dn_pass else 'fails to grow above 1'}"
        )
    lower = DichotomyProbeResult(
        b=b_dn,
        h=beta - delta / 2.0,
        log_ratio_b=lr_dn,
        log_ratio_h=_log_ratio(s, beta - delta / 2.0),
        passed=dn_pass,
        detail=dn_detail,
    )
    return DichotomyReport(beta=beta, delta=delta, upper=upper, lower=lower)
