"""The moment functional M(b) = E(|X|^alpha / (L|X|)^(b*alpha)), its index
inf{b : M(b) < inf}, and the truncated-second-moment decay condition.

The index is the quantity that decides membership in the Chover-type LIL
classes: for each built-in family it has a closed form
(``moment_index_analytic``), and for an arbitrary nonincreasing tail callable
it is located numerically (``moment_index_numeric``).

Numeric finiteness probe
------------------------
M(b) is compared, via integration by parts, against

    integral of alpha * x^(alpha-1) * (Lx)^(-b*alpha) * P(|X| > x) dx.

The probe evaluates that integral over doubling blocks of the *log* axis,
x in [exp(2^j), exp(2^(j+1))] for j = 1..8, and inspects the slope of
log2(increment) versus j.  For a tail C*x^(-alpha) the increments are exactly
geometric with log2-ratio 1 - b*alpha; for the lattice family they are
geometric with log2-ratio lam - b*alpha.  So:

    slope < -margin  ->  convergent (finite)
    slope > +margin  ->  divergent (infinite)
    |slope| <= margin -> indeterminate (the honest failure mode: the probe
                         widens the returned interval instead of guessing)

Plain octaves of x carry the b-signal only as O(b*alpha/k) per octave, below
any usable margin, which is why the blocks double in log-space.  The last two
block ratios are Richardson-combined (2*r_last - r_prev) to cancel the
leading 2^-j curvature of the lattice increments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np
from scipy import integrate
from scipy.special import logsumexp

from .numeric_core import NEG_INF, POS_INF, L, LL, ExtendedReal
from .distributions import (
    Degenerate,
    DistributionSpec,
    GaussianUnitVariance,
    LatticeExp2,
    LogWeibullTail,
    Shifted,
    SymmetricStable,
    UnsupportedFamilyError,
    _lattice_atoms,
    _log_exp_integral,
    _logweibull_info,
    lattice_constant,
    sample_values,
    stable_tail_constant,
    stable_tail_threshold,
)

__all__ = [
    "FinitenessCertificate",
    "MomentIndexResult",
    "IndexNotResolvableError",
    "TailEvaluationError",
    "moment_functional",
    "moment_index_analytic",
    "moment_index_numeric",
    "truncated_second_moment",
    "einmahl_li_condition",
    "DEFAULT_SLOPE_MARGIN",
]

LN2 = math.log(2.0)

#: Verdict margin on the log2 slope of block increments, per doubling.
DEFAULT_SLOPE_MARGIN = 0.01

#: Number of log-axis doubling blocks probed: x in [exp(2^j), exp(2^(j+1))],
#: j = 1.._N_BLOCKS; exp(2^9) is the last magnitude representable as a float.
_N_BLOCKS = 8

ProbeVerdict = Literal["finite", "infinite", "indeterminate"]


class IndexNotResolvableError(RuntimeError):
    """Every probe fell inside the indeterminate band."""


class TailEvaluationError(RuntimeError):
    """The tail callable failed on every block."""


@dataclass(frozen=True)
class FinitenessCertificate:
    """Whether M(b) is finite at one b, with the value and the reasoning."""

    b: float
    value_or_divergence: ExtendedReal  # +inf when divergent
    evidence: str

    def __post_init__(self) -> None:
        if not self.evidence:
            raise ValueError("evidence must be non-empty")

    @property
    def finite(self) -> bool:
        return self.value_or_divergence != POS_INF


@dataclass(frozen=True)
class ProbeRecord:
    b: float
    verdict: ProbeVerdict
    detail: str = ""


@dataclass(frozen=True)
class MomentIndexResult:
    """The located index, how it was obtained, and the probes that back it."""

    index: ExtendedReal
    method: str  # "analytic" | "numeric"
    probes: tuple[ProbeRecord, ...]
    alpha: float
    interval: tuple[float, float] = field(default=(math.nan, math.nan))
    convention: str = "inf over all real b"

    def __post_init__(self) -> None:
        finite_bs = [p.b for p in self.probes if p.verdict == "finite"]
        infinite_bs = [p.b for p in self.probes if p.verdict == "infinite"]
        if finite_bs and infinite_bs and max(infinite_bs) >= min(finite_bs):
            raise ValueError(
                "probe verdicts are not monotone in b: "
                f"infinite at {max(infinite_bs)} but finite at {min(finite_bs)}"
            )


# ---------------------------------------------------------------------------
# moment_functional: family-by-family finiteness and value
# ---------------------------------------------------------------------------


def moment_functional(spec: DistributionSpec, alpha: float, b: float) -> FinitenessCertificate:
    """Evaluate M(b) = E(|X|^alpha / (L|X|)^(b*alpha)) for one family.

    ``alpha`` may differ from the spec's natural exponent (the functional is
    defined for any pairing); mismatches are decided by comparing exponents
    and flagged in the evidence.
    """
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"moment_functional requires 0 < alpha <= 2, got {alpha!r}")
    q = b * alpha

    if isinstance(spec, Degenerate):
        v = abs(spec.value)
        val = 0.0 if v == 0.0 else v**alpha / L(v) ** q
        return FinitenessCertificate(b, val, "closed form: point mass")

    if isinstance(spec, GaussianUnitVariance):
        val = _gaussian_moment(alpha, q)
        return FinitenessCertificate(b, val, "quadrature against the normal density")

    if isinstance(spec, SymmetricStable):
        flag = "" if alpha == spec.alpha else f" (alpha mismatch: tail exponent {spec.alpha})"
        if alpha < spec.alpha:
            val = _stable_moment_estimate(spec, alpha, q)
            return FinitenessCertificate(
                b, val, "tail-slope: moment order below tail exponent; "
                "Monte Carlo body + asymptotic tail (approximate)" + flag
            )
        if alpha > spec.alpha:
            return FinitenessCertificate(
                b, POS_INF, "tail-slope: moment order above tail exponent" + flag
            )
        if q > 1.0:
            val = _stable_moment_estimate(spec, alpha, q)
            return FinitenessCertificate(
                b, val, "tail x^-alpha: converges iff b*alpha > 1; "
                "Monte Carlo body + asymptotic tail (approximate)" + flag
            )
        return FinitenessCertificate(
            b, POS_INF, "tail x^-alpha: diverges for b*alpha <= 1" + flag
        )

    if isinstance(spec, LatticeExp2):
        flag = "" if alpha == spec.alpha else f" (alpha mismatch: tail exponent {spec.alpha})"
        if alpha < spec.alpha:
            val = _lattice_moment_series(spec, alpha, q)
            return FinitenessCertificate(b, val, "series with doubly-exponential decay" + flag)
        if alpha > spec.alpha:
            return FinitenessCertificate(
                b, POS_INF, "series with doubly-exponential growth" + flag
            )
        ratio = 2.0 ** (spec.lam - q)
        if ratio < 1.0:
            c = lattice_constant(spec.alpha, spec.lam)
            return FinitenessCertificate(
                b, c * ratio / (1.0 - ratio), f"geometric series, ratio 2^(lam - b*alpha) = {ratio:.6g}" + flag
            )
        return FinitenessCertificate(
            b, POS_INF, f"geometric series, ratio 2^(lam - b*alpha) = {ratio:.6g} >= 1" + flag
        )

    if isinstance(spec, LogWeibullTail):
        flag = "" if alpha == spec.alpha else f" (alpha mismatch: tail exponent {spec.alpha})"
        if alpha < spec.alpha or (alpha == spec.alpha and spec.p < 0.0):
            val = _logweibull_moment(spec, alpha, q)
            return FinitenessCertificate(
                b, val, "quadrature: stretched-exponential factor dominates" + flag
            )
        return FinitenessCertificate(
            b, POS_INF, "tail-slope: stretched-exponential growth factor" + flag
        )

    if isinstance(spec, Shifted):
        base = moment_functional(spec.base, alpha, b)
        if not base.finite:
            return FinitenessCertificate(
                b, POS_INF, f"inherits tail class of base: {base.evidence}"
            )
        val = _monte_carlo_moment(spec, alpha, q)
        return FinitenessCertificate(
            b, val, "finite by base tail class; Monte Carlo estimate (approximate)"
        )

    raise UnsupportedFamilyError(f"unknown spec {spec!r}")


def _integrand_factor(x: float, alpha: float, q: float) -> float:
    return x**alpha / L(x) ** q


def _gaussian_moment(alpha: float, q: float) -> float:
    def f(x: float) -> float:
        return _integrand_factor(x, alpha, q) * math.sqrt(2.0 / math.pi) * math.exp(-x * x / 2.0)

    val, _ = integrate.quad(f, 0.0, 40.0, limit=200)
    return val


def _stable_moment_estimate(spec: SymmetricStable, alpha: float, q: float) -> float:
    # Body by seeded Monte Carlo below the asymptote's validity threshold,
    # tail by the closed form of the asymptote integral.
    threshold = stable_tail_threshold(spec.alpha)
    rng = np.random.default_rng(20250811)
    x = np.abs(sample_values(spec, rng, 200_000))
    lx = np.where(x > math.e, np.log(np.maximum(x, 1e-300)), 1.0)
    g = x**alpha / lx**q
    body = float(np.mean(np.where(x <= threshold, g, 0.0)))
    c = stable_tail_constant(spec.alpha)
    lt = math.log(threshold)
    if alpha == spec.alpha:
        # integral of alpha*C*x^-1*(ln x)^-q over [threshold, inf), q > 1
        tail = alpha * c * lt ** (1.0 - q) / (q - 1.0)
    else:
        # density ~ spec.alpha*C*x^(-spec.alpha-1); integrand in v = ln x
        def f(v: float) -> float:
            return spec.alpha * c * math.exp((alpha - spec.alpha) * v) * v**-q

        tail, _ = integrate.quad(f, lt, lt + 200.0 / (spec.alpha - alpha), limit=200)
    return body + tail


def _lattice_moment_series(spec: LatticeExp2, alpha: float, q: float) -> float:
    atoms = _lattice_atoms(spec.alpha, spec.lam)
    ns = np.arange(1, atoms.n_trunc + 1, dtype=np.float64)
    # p_n * d_n^alpha * (2^n)^-q, all in logs
    log_terms = atoms.log_probs + alpha * 2.0**ns - q * ns * LN2
    return float(np.exp(logsumexp(log_terms)))


def _logweibull_moment(spec: LogWeibullTail, alpha: float, q: float) -> float:
    info = _logweibull_info(spec.alpha, spec.p, spec.gamma)

    # E = 2c * integral over [1, inf) of exp((alpha - a0)u + p u^gamma) u^-q du
    def exponent(u: float) -> float:
        return (alpha - spec.alpha) * u + spec.p * u**spec.gamma - q * math.log(u)

    u_hi = info.u_max
    while exponent(u_hi) > exponent(1.0) - 60.0 and u_hi < 1e12:
        u_hi *= 2.0
    grid = np.linspace(1.0, u_hi, 128)
    peak = max(exponent(float(u)) for u in grid)

    def f(u: float) -> float:
        return math.exp(min(exponent(u) - peak, 50.0))

    val, _ = integrate.quad(f, 1.0, u_hi, limit=400)
    return math.exp(peak + math.log(val) - info.log_norm)


def _monte_carlo_moment(spec: DistributionSpec, alpha: float, q: float) -> float:
    rng = np.random.default_rng(20250811)
    x = np.abs(sample_values(spec, rng, 200_000))
    lx = np.where(x > math.e, np.log(np.maximum(x, 1e-300)), 1.0)
    return float(np.mean(x**alpha / lx**q))


# ---------------------------------------------------------------------------
# Analytic index
# ---------------------------------------------------------------------------


def moment_index_analytic(spec: DistributionSpec, alpha: float) -> MomentIndexResult:
    """Closed-form index inf{b : M(b) < inf} for the built-in families.

    At alpha = 2 the infimum runs over b > 0 (so the raw value is clamped at
    zero); for alpha < 2 it runs over all real b.  The convention used is
    recorded on the result.
    """
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"moment_index_analytic requires 0 < alpha <= 2, got {alpha!r}")
    raw = _raw_analytic_index(spec, alpha)
    if alpha == 2.0:
        index = max(raw, 0.0)
        convention = "inf over b > 0 (alpha = 2), clamped at 0"
    else:
        index = raw
        convention = "inf over all real b"
    probes = _analytic_probes(spec, alpha, index)
    return MomentIndexResult(
        index=index,
        method="analytic",
        probes=probes,
        alpha=alpha,
        interval=(index, index),
        convention=convention,
    )


def _raw_analytic_index(spec: DistributionSpec, alpha: float) -> float:
    if isinstance(spec, Shifted):
        # Shifts do not change the tail class, hence not the index.
        return _raw_analytic_index(spec.base, alpha)
    if isinstance(spec, Degenerate):
        return NEG_INF  # all moments finite
    if isinstance(spec, GaussianUnitVariance):
        return NEG_INF  # superpolynomial tail: every b finite
    if isinstance(spec, SymmetricStable):
        if alpha < spec.alpha:
            return NEG_INF
        if alpha > spec.alpha:
            return POS_INF
        return 1.0 / spec.alpha
    if isinstance(spec, LatticeExp2):
        if alpha < spec.alpha:
            return NEG_INF
        if alpha > spec.alpha:
            return POS_INF
        return spec.lam / spec.alpha
    if isinstance(spec, LogWeibullTail):
        if alpha < spec.alpha:
            return NEG_INF
        if alpha > spec.alpha:
            return POS_INF
        return NEG_INF if spec.p < 0.0 else POS_INF
    raise UnsupportedFamilyError(f"unknown spec {spec!r}")


def _analytic_probes(spec: DistributionSpec, alpha: float, index: float) -> tuple[ProbeRecord, ...]:
    if not math.isfinite(index):
        return ()
    probes = []
    for b in (index - 0.5, index + 0.5):
        if alpha == 2.0 and b <= 0.0:
            continue
        try:
            cert = moment_functional(spec, alpha, b)
        except UnsupportedFamilyError:
            continue
        probes.append(ProbeRecord(b, "finite" if cert.finite else "infinite", cert.evidence))
    return tuple(probes)


# ---------------------------------------------------------------------------
# Numeric index from a tail callable
# ---------------------------------------------------------------------------


def _log_block_increments(
    tail: Callable[[float], float], alpha: float, q: float
) -> list[float | None]:
    """log of the by-parts integral over each log-axis doubling block.

    Entries are None where the block is unusable: the tail raised (expected
    for asymptotics below their validity threshold) or underflowed to zero
    partway through the block (the quadrature would silently lose the
    missing part).  Blocks with no mass at all are -inf.
    """
    out: list[float | None] = []
    for j in range(1, _N_BLOCKS + 1):
        v_lo, v_hi = 2.0**j, 2.0 ** (j + 1)

        def phi(v: float) -> float:
            t = tail(math.exp(v))
            if t < 0.0 or math.isnan(t):
                raise ValueError(f"tail returned {t!r}")
            if t == 0.0:
                return NEG_INF
            return math.log(alpha) + alpha * v - q * math.log(v) + math.log(t)

        try:
            out.append(_log_quad_exp(phi, v_lo, v_hi))
        except Exception:
            out.append(None)
    return out


def _log_quad_exp(phi: Callable[[float], float], lo: float, hi: float) -> float | None:
    """log of the integral of exp(phi) over [lo, hi] with peak extraction.

    Steep edge ramps (dynamic range beyond e^30 within the block) are
    integrated in an exponentially rectified variable anchored at the heavy
    edge.  Returns None when phi is -inf on part of the block only: that is
    an underflow or support boundary and the block cannot be trusted.
    """
    grid = np.linspace(lo, hi, 33)
    vals = np.asarray([phi(float(v)) for v in grid])
    neg = np.isneginf(vals)
    if neg.all():
        return NEG_INF
    if neg.any():
        return None
    k = int(np.argmax(vals))
    peak = float(vals[k])
    step = grid[1] - grid[0]
    if k == vals.size - 1:
        slope = (vals[-1] - vals[-2]) / step
        if slope * (hi - lo) > 30.0:
            return _edge_quad(phi, lo, hi, peak, float(slope), at_hi=True)
    elif k == 0:
        slope = (vals[0] - vals[1]) / step
        if slope * (hi - lo) > 30.0:
            return _edge_quad(phi, lo, hi, peak, float(slope), at_hi=False)

    def f(v: float) -> float:
        return math.exp(min(phi(v) - peak, 50.0))

    val, _ = integrate.quad(f, lo, hi, limit=200)
    if val <= 0.0:
        return NEG_INF
    return peak + math.log(val)


def _edge_quad(
    phi: Callable[[float], float], lo: float, hi: float, peak: float, slope: float, at_hi: bool
) -> float:
    """Integrate an edge-ramped exp(phi) in the variable u = slope * distance
    from the heavy edge, where the integrand decays like exp(-u)."""
    anchor = hi if at_hi else lo

    def f(u: float) -> float:
        v = anchor - u / slope if at_hi else anchor + u / slope
        return math.exp(min(phi(v) - peak, 50.0))

    span = min(slope * (hi - lo), 80.0)
    val, _ = integrate.quad(f, 0.0, span, limit=200)
    if val <= 0.0:
        return NEG_INF
    return peak + math.log(val) - math.log(slope)


def _probe_finiteness(
    tail: Callable[[float], float], alpha: float, b: float, margin: float
) -> ProbeRecord:
    log_incs = _log_block_increments(tail, alpha, b * alpha)
    finite_idx = [j for j, v in enumerate(log_incs) if v is not None and v != NEG_INF]
    if not finite_idx:
        if any(v == NEG_INF for v in log_incs):
            return ProbeRecord(b, "finite", "no measurable mass on the probe blocks")
        raise TailEvaluationError("tail evaluation failed on every block")

    # Longest contiguous run ending at the last finite block.
    end = finite_idx[-1]
    start = end
    while start - 1 in finite_idx:
        start -= 1
    run = [log_incs[j] for j in range(start, end + 1)]

    if len(run) == 1:
        trailing_zero = any(v == NEG_INF for v in log_incs[end + 1 :])
        if trailing_zero:
            return ProbeRecord(b, "finite", "single block then collapse to zero")
        return ProbeRecord(b, "indeterminate", "single usable block")

    ratios = [(run[i + 1] - run[i]) / LN2 for i in range(len(run) - 1)]
    if len(ratios) >= 2:
        r_last, r_prev = ratios[-1], ratios[-2]
        slope = 2.0 * r_last - r_prev  # cancels the leading 2^-j curvature
        if (
            math.copysign(1.0, r_last) != math.copysign(1.0, r_prev)
            and min(abs(r_last), abs(r_prev)) > 10.0 * margin
        ):
            return ProbeRecord(
                b, "indeterminate", f"oscillating increments: {r_prev:.4g}, {r_last:.4g}"
            )
    else:
        slope = ratios[-1]
    detail = f"log2 increment slope {slope:.6g} per doubling"
    if slope < -margin:
        return ProbeRecord(b, "finite", detail)
    if slope > margin:
        return ProbeRecord(b, "infinite", detail)
    return ProbeRecord(b, "indeterminate", detail)


def moment_index_numeric(
    tail: Callable[[float], float],
    alpha: float,
    b_lo: float,
    b_hi: float,
    tol: float,
    *,
    margin: float = DEFAULT_SLOPE_MARGIN,
) -> MomentIndexResult:
    """Bisect for inf{b : M(b) < inf} given a nonincreasing tail callable.

    Every probe decides finiteness by the block-increment slope test (module
    docstring).  Indeterminate probes cannot narrow the bracket; the returned
    interval then stays wider than ``tol``, honestly.  If the boundary probes
    already decide everything, the corresponding boundary is returned with
    "all probes finite" / "all probes infinite" evidence.
    """
    if not b_lo < b_hi:
        raise ValueError(f"need b_lo < b_hi, got {b_lo!r} >= {b_hi!r}")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"alpha must be in (0, 2], got {alpha!r}")
    _check_tail_nonincreasing(tail)

    probes: list[ProbeRecord] = []

    def probe(b: float) -> ProbeRecord:
        rec = _probe_finiteness(tail, alpha, b, margin)
        probes.append(rec)
        return rec

    lo_rec = probe(b_lo)
    if lo_rec.verdict == "finite":
        return MomentIndexResult(
            index=b_lo,
            method="numeric",
            probes=tuple(probes),
            alpha=alpha,
            interval=(b_lo, b_lo),
            convention="all probes finite: index at or below the requested bracket",
        )
    hi_rec = probe(b_hi)
    if hi_rec.verdict == "infinite":
        return MomentIndexResult(
            index=b_hi,
            method="numeric",
            probes=tuple(probes),
            alpha=alpha,
            interval=(b_hi, b_hi),
            convention="all probes infinite: index at or above the requested bracket",
        )

    lo, hi = b_lo, b_hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        offset = 0.25 * (hi - lo)
        narrowed = False
        for candidate in (mid, mid + offset, mid - offset):
            rec = probe(candidate)
            if rec.verdict == "finite":
                hi = candidate
                narrowed = True
                break
            if rec.verdict == "infinite":
                lo = candidate
                narrowed = True
                break
        if not narrowed:
            break  # indeterminate band reached: return the widened interval

    if all(p.verdict == "indeterminate" for p in probes):
        raise IndexNotResolvableError("index not resolvable at this resolution")
    return MomentIndexResult(
        index=0.5 * (lo + hi),
        method="numeric",
        probes=tuple(probes),
        alpha=alpha,
        interval=(lo, hi),
        convention="inf over all real b",
    )


def _check_tail_nonincreasing(tail: Callable[[float], float]) -> None:
    previous = None
    for x in (1.0, 10.0, 1e4, 1e8, 1e12):
        try:
            t = tail(x)
        except Exception:
            continue  # asymptotics may refuse small x; later blocks decide
        if previous is not None and t > previous + 1e-12:
            raise ValueError(f"tail is not nonincreasing near x = {x!r}")
        previous = t


# ---------------------------------------------------------------------------
# Truncated second moment and its decay condition
# ---------------------------------------------------------------------------


def truncated_second_moment(spec: DistributionSpec, x: float) -> float:
    """H(x) = E(X^2 * 1{|X| <= x}); may overflow to +inf for heavy families."""
    if x < 0 or math.isnan(x):
        raise ValueError(f"truncated_second_moment requires x >= 0, got {x!r}")
    log_h = _log_truncated_second_moment(spec, x)
    if log_h == NEG_INF:
        return 0.0
    return math.exp(log_h) if log_h <= 709.0 else POS_INF


def _log_truncated_second_moment(spec: DistributionSpec, x: float) -> float:
    if isinstance(spec, Degenerate):
        v = abs(spec.value)
        if v == 0.0 or v > x:
            return NEG_INF
        return 2.0 * math.log(v)
    if isinstance(spec, GaussianUnitVariance):
        if x == 0.0:
            return NEG_INF
        # integral over [-x, x] of z^2 phi(z) dz = erf(x/sqrt(2)) - 2*x*phi(x)
        val = math.erf(x / math.sqrt(2.0)) - x * math.sqrt(2.0 / math.pi) * math.exp(
            -min(x * x / 2.0, 745.0)
        )
        return math.log(val) if val > 0.0 else NEG_INF
    if isinstance(spec, LatticeExp2):
        if x < math.exp(2.0):
            return NEG_INF
        # Untruncated series: the sampler's atom cap must NOT apply here,
        # since the x^2 weight exactly cancels the atom's exp(-alpha*2^n)
        # decay at alpha = 2 (each term is c * 2^(n*lam) * e^((2-alpha) 2^n)).
        n_max = int(math.floor(math.log2(math.log(x)) + 1e-9))
        if n_max < 1:
            return NEG_INF
        log_c = math.log(lattice_constant(spec.alpha, spec.lam))
        ns = np.arange(1, n_max + 1, dtype=np.float64)
        log_terms = log_c + ns * spec.lam * LN2 + (2.0 - spec.alpha) * 2.0**ns
        return float(logsumexp(log_terms))
    if isinstance(spec, LogWeibullTail):
        if x < math.e:
            return NEG_INF
        info = _logweibull_info(spec.alpha, spec.p, spec.gamma)
        hi = min(math.log(x), info.u_max)
        # 2c * integral over [1, log x] of exp((2 - a0)u + p u^gamma) du
        log_int = _log_exp_integral(spec.alpha - 2.0, spec.p, spec.gamma, 1.0, hi)
        return log_int - info.log_norm
    raise UnsupportedFamilyError(
        f"truncated_second_moment has no closed or numeric form for {spec!r}"
    )


def einmahl_li_condition(spec: DistributionSpec, b: float) -> str:
    """Decide whether LL(x) / (L x)^(2b) * H(x) tends to zero.

    Evaluated on the grid x = exp(2^j), j = 1..9 (log domain throughout).
    ``holds``: the product has dropped at least tenfold from its peak and its
    last value is below 1% of the peak.  ``fails``: it grows monotonically
    over the last four grid points.  Anything else: ``indeterminate``.
    """
    if not b > 0.0:
        raise ValueError(f"einmahl_li_condition requires b > 0, got {b!r}")
    log_g = []
    for j in range(1, 10):
        x = math.exp(2.0**j)
        log_h = _log_truncated_second_moment(spec, x)
        log_g.append(math.log(LL(x)) - 2.0 * b * math.log(L(x)) + log_h)
    peak = max(log_g)
    last = log_g[-1]
    if peak == NEG_INF:
        return "holds"  # H identically zero on the grid
    if peak - last > math.log(100.0):
        return "holds"
    tail4 = log_g[-4:]
    if all(tail4[i] < tail4[i + 1] for i in range(3)):
        return "fails"
    return "indeterminate"
