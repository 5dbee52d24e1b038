"""Distribution families: descriptors, exact constants, samplers, tail and
mean facts.

Families
--------
``SymmetricStable(alpha)``
    Symmetric stable law with characteristic function exp(-|t|^alpha),
    0 < alpha < 2.  Pareto-like tails of exponent alpha.
``GaussianUnitVariance()``
    Standard normal, the alpha = 2 member of the family (EX^2 = 1).
``LatticeExp2(alpha, lam)``
    Symmetric atoms at +-d_n, d_n = exp(2^n), with
    P(X = -d_n) = P(X = d_n) = (c/2) * 2^(n*lam) / d_n^alpha
    and c = c(alpha, lam) the normalising constant.  Atom magnitudes exceed
    float range from n = 10 on, so samples are returned in signed-log form
    with log-magnitude exactly 2^n.
``LogWeibullTail(alpha, p, gamma)``
    Symmetric density c/|x|^(alpha+1) * exp(p * (log|x|)^gamma) on |x| >= e,
    p != 0, 0 < gamma < 1.  U = log|X| then has density proportional to
    exp(-alpha*u + p*u^gamma) on [1, inf).
``Degenerate(value)``
    Point mass.
``Shifted(base, shift)``
    base + shift.

Samplers are deterministic functions of the supplied random stream: feeding
the same ``numpy.random.Generator`` state reproduces the same outputs.  Specs
are immutable values; a stream is owned by one executor at a time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.special import log_ndtr, logsumexp

from .numeric_core import NEG_INF, L, SignedLogValue

__all__ = [
    "AsymptoticNotApplicableError",
    "UnsupportedFamilyError",
    "DistributionSpec",
    "SymmetricStable",
    "GaussianUnitVariance",
    "LatticeExp2",
    "LogWeibullTail",
    "Degenerate",
    "Shifted",
    "MeanStatus",
    "stable_sample",
    "lattice_constant",
    "lattice_trunc_index",
    "lattice_sample",
    "logweibull_sample",
    "logweibull_acceptance_rate",
    "tail_prob_log",
    "mean_status",
    "sample_block",
    "sample_values",
    "constant_value",
]

LN2 = math.log(2.0)

#: Atoms with alpha * 2^n beyond this are dropped (mass below exp(-800),
#: unreachable in any feasible simulation); the removed mass is folded into
#: the deepest kept atom.
LATTICE_EXPONENT_CAP = 800.0

#: Relative cutoff for the normalising-constant series.
_SERIES_RTOL = 1e-18

#: Stationary-point guard for the log-Weibull envelope search.
_ENVELOPE_U_CAP = 1e6


class AsymptoticNotApplicableError(ValueError):
    """Tail asymptotics requested below their validity threshold."""


class UnsupportedFamilyError(TypeError):
    """Operation has no closed or numeric form for this family."""


class DistributionSpec:
    """Base marker for distribution descriptors."""

    __slots__ = ()


@dataclass(frozen=True)
class SymmetricStable(DistributionSpec):
    alpha: float

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 2.0:
            raise ValueError(
                f"SymmetricStable requires 0 < alpha < 2, got {self.alpha!r}; "
                "use GaussianUnitVariance for alpha = 2"
            )


@dataclass(frozen=True)
class GaussianUnitVariance(DistributionSpec):
    pass


@dataclass(frozen=True)
class LatticeExp2(DistributionSpec):
    alpha: float
    lam: float

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 2.0:
            raise ValueError(f"LatticeExp2 requires 0 < alpha <= 2, got {self.alpha!r}")
        if not math.isfinite(self.lam):
            raise ValueError(f"LatticeExp2 requires finite lambda, got {self.lam!r}")
        # Force atom table construction so invalid parameter combinations
        # (normaliser under/overflow) fail here, not at first sample.
        _lattice_atoms(self.alpha, self.lam)


@dataclass(frozen=True)
class LogWeibullTail(DistributionSpec):
    alpha: float
    p: float
    gamma: float

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 2.0:
            raise ValueError(f"LogWeibullTail requires 0 < alpha <= 2, got {self.alpha!r}")
        if not math.isfinite(self.p) or self.p == 0.0:
            raise ValueError(f"LogWeibullTail requires nonzero finite p, got {self.p!r}")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"LogWeibullTail requires 0 < gamma < 1, got {self.gamma!r}")
        info = _logweibull_info(self.alpha, self.p, self.gamma)
        if not (math.isfinite(info.h_max) and math.isfinite(info.log_norm)):
            raise ValueError(
                f"envelope constant computation failed for {self!r}: nonfinite"
            )


@dataclass(frozen=True)
class Degenerate(DistributionSpec):
    value: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError(f"Degenerate requires a finite value, got {self.value!r}")


@dataclass(frozen=True)
class Shifted(DistributionSpec):
    base: DistributionSpec
    shift: float

    def __post_init__(self) -> None:
        if not isinstance(self.base, DistributionSpec):
            raise ValueError(f"Shifted.base must be a DistributionSpec, got {self.base!r}")
        if not math.isfinite(self.shift):
            raise ValueError(f"Shifted requires a finite shift, got {self.shift!r}")


@dataclass(frozen=True)
class MeanStatus:
    """Mean of a family: exactly zero, finite nonzero, or undefined/infinite."""

    kind: str  # "zero" | "nonzero_finite" | "undefined_or_infinite"
    mu: float = 0.0

    @classmethod
    def zero(cls) -> "MeanStatus":
        return cls("zero", 0.0)

    @classmethod
    def nonzero(cls, mu: float) -> "MeanStatus":
        if mu == 0.0 or not math.isfinite(mu):
            raise ValueError(f"nonzero mean must be finite and != 0, got {mu!r}")
        return cls("nonzero_finite", mu)

    @classmethod
    def undefined(cls) -> "MeanStatus":
        return cls("undefined_or_infinite", math.nan)

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    @property
    def is_nonzero_finite(self) -> bool:
        return self.kind == "nonzero_finite"


# ---------------------------------------------------------------------------
# Symmetric stable sampling
# ---------------------------------------------------------------------------


def stable_sample(alpha: float, u: float, e: float) -> float:
    """One symmetric-stable variate from a uniform angle and an exponential.

    ``u`` is uniform on (-pi/2, pi/2) and ``e`` standard exponential; the
    transform

        sin(alpha*u) / cos(u)^(1/alpha) * (cos((1-alpha)*u) / e)^((1-alpha)/alpha)

    has characteristic function exp(-|t|^alpha).  alpha = 1 is handled as the
    exact Cauchy branch tan(u) to avoid the removable singularity.
    """
    if not 0.0 < alpha < 2.0:
        raise ValueError(
            f"stable_sample requires 0 < alpha < 2, got {alpha!r}; "
            "alpha = 2 is GaussianUnitVariance"
        )
    if not -math.pi / 2 < u < math.pi / 2:
        raise ValueError(f"u must lie in (-pi/2, pi/2), got {u!r}")
    if e <= 0:
        raise ValueError(f"e must be positive, got {e!r}")
    if alpha == 1.0:
        return math.tan(u)
    return (
        math.sin(alpha * u)
        / math.cos(u) ** (1.0 / alpha)
        * (math.cos((1.0 - alpha) * u) / e) ** ((1.0 - alpha) / alpha)
    )


def _stable_block(alpha: float, rng: np.random.Generator, size: int):
    u = rng.uniform(-math.pi / 2, math.pi / 2, size)
    if alpha == 1.0:
        values = np.tan(u)
        signs = np.sign(values)
        with np.errstate(divide="ignore"):
            logmags = np.log(np.abs(values))
        return values, signs, logmags
    e = rng.standard_exponential(size)
    signs = np.sign(u)
    with np.errstate(divide="ignore"):
        logmags = (
            np.log(np.abs(np.sin(alpha * u)))
            - np.log(np.cos(u)) / alpha
            + ((1.0 - alpha) / alpha) * (np.log(np.cos((1.0 - alpha) * u)) - np.log(e))
        )
    with np.errstate(over="ignore"):
        values = signs * np.exp(logmags)
    return values, signs, logmags


# ---------------------------------------------------------------------------
# Lattice family: atoms at +-exp(2^n)
# ---------------------------------------------------------------------------


def lattice_trunc_index(alpha: float) -> int:
    """Largest n with alpha * 2^n <= LATTICE_EXPONENT_CAP (at least 1)."""
    n = 1
    while alpha * 2.0 ** (n + 1) <= LATTICE_EXPONENT_CAP:
        n += 1
    return n


def lattice_constant(alpha: float, lam: float) -> float:
    """Normalising constant c(alpha, lambda) = 1 / sum_n 2^(n*lam) exp(-alpha*2^n).

    The series is summed in the log domain and truncated once the next term
    drops below 1e-18 of the partial sum; the terms decay doubly
    exponentially, so this always terminates.
    """
    if not 0.0 < alpha <= 2.0:
        raise ValueError(f"lattice_constant requires 0 < alpha <= 2, got {alpha!r}")
    if not math.isfinite(lam):
        raise ValueError(f"lattice_constant requires finite lambda, got {lam!r}")
    log_sum = NEG_INF
    n = 1
    while True:
        log_term = n * lam * LN2 - alpha * 2.0**n
        log_sum = np.logaddexp(log_sum, log_term)
        next_term = (n + 1) * lam * LN2 - alpha * 2.0 ** (n + 1)
        if next_term < math.log(_SERIES_RTOL) + log_sum or n > 200:
            break
        n += 1
    return math.exp(-log_sum)


@dataclass(frozen=True)
class _LatticeAtoms:
    """Interleaved atom table (-d_1, +d_1, -d_2, +d_2, ...)."""

    n_trunc: int
    log_probs: np.ndarray  # per magnitude, both signs combined
    cum: np.ndarray  # cumulative over the interleaved +- list, last == 1
    signs: np.ndarray
    logmags: np.ndarray  # exactly 2.0**n


@lru_cache(maxsize=None)
def _lattice_atoms(alpha: float, lam: float) -> _LatticeAtoms:
    c = lattice_constant(alpha, lam)
    log_c = math.log(c)
    n_trunc = lattice_trunc_index(alpha)
    ns = np.arange(1, n_trunc + 1, dtype=np.float64)
    log_probs = log_c + ns * lam * LN2 - alpha * 2.0**ns
    probs = np.exp(log_probs)
    half = np.repeat(probs / 2.0, 2)
    cum = np.cumsum(half)
    # Fold the (numerically zero, < exp(-LATTICE_EXPONENT_CAP)) tail beyond
    # n_trunc into the deepest kept atom so the CDF tops out at exactly 1.
    cum[-1] = 1.0
    signs = np.tile(np.array([-1.0, 1.0]), n_trunc)
    logmags = np.repeat(2.0**ns, 2)
    return _LatticeAtoms(n_trunc, log_probs, cum, signs, logmags)


def lattice_sample(alpha: float, lam: float, u: float) -> SignedLogValue:
    """Inverse-CDF draw over the atom list; u is uniform in (0, 1).

    Returns the atom in signed-log form: log-magnitude is exactly 2^n.
    """
    if not 0.0 < u < 1.0:
        raise ValueError(f"u must lie in (0, 1), got {u!r}")
    atoms = _lattice_atoms(alpha, lam)
    i = int(np.searchsorted(atoms.cum, u, side="left"))
    return SignedLogValue(int(atoms.signs[i]), float(atoms.logmags[i]))


def _lattice_block(alpha: float, lam: float, rng: np.random.Generator, size: int):
    atoms = _lattice_atoms(alpha, lam)
    u = rng.random(size)
    idx = np.searchsorted(atoms.cum, u, side="left")
    signs = atoms.signs[idx]
    logmags = atoms.logmags[idx]
    with np.errstate(over="ignore"):
        values = signs * np.exp(logmags)
    return values, signs, logmags


# ---------------------------------------------------------------------------
# Log-Weibull-tail family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _LogWeibullInfo:
    """Envelope and normaliser data for U = log|X| with density
    proportional to exp(-alpha*u + p*u^gamma) on [1, inf)."""

    alpha: float
    p: float
    gamma: float
    rate: float  # envelope exponential rate
    h_max: float  # sup of log(target/envelope-shape) over u >= 1
    log_norm: float  # log integral of exp(-alpha*u + p*u^gamma) over [1, inf)
    u_max: float  # quadrature cutoff (truncated tail < 1e-15 of the integral)


def _logweibull_exponent(alpha: float, p: float, gamma: float, u):
    return -alpha * u + p * u**gamma


@lru_cache(maxsize=None)
def _logweibull_info(alpha: float, p: float, gamma: float) -> _LogWeibullInfo:
    # Envelope rate: alpha/2 when p > 0 (exp(p*u^gamma) is sub-exponential for
    # gamma < 1, so the halved rate absorbs it), alpha when p < 0.
    rate = alpha / 2.0 if p > 0 else alpha

    def h(u: float) -> float:
        return _logweibull_exponent(alpha, p, gamma, u) + rate * (u - 1.0)

    candidates = [1.0]
    if p > 0:
        # Guarded analytic stationary point of h: h'(u) = (rate-alpha) + p*gamma*u^(gamma-1),
        # clamped into [1, _ENVELOPE_U_CAP].
        u_star = ((alpha - rate) / (p * gamma)) ** (1.0 / (gamma - 1.0))
        if math.isfinite(u_star):
            candidates.append(min(max(u_star, 1.0), _ENVELOPE_U_CAP))
    h_max = max(h(u) for u in candidates)

    # Peak of the density exponent itself (at u = 1 when p < 0).
    u_peak = 1.0
    if p > 0:
        u_peak = min(max((p * gamma / alpha) ** (1.0 / (1.0 - gamma)), 1.0), _ENVELOPE_U_CAP)
    phi_peak = _logweibull_exponent(alpha, p, gamma, u_peak)

    # Quadrature cutoff: once the exponent's derivative is <= -alpha/2, the
    # remaining tail is bounded by exp(phi(U)) * 2/alpha (closed-form
    # exponential bound); push U until that is < 1e-15 of the peak mass.
    u_hi = u_peak + 1.0
    while u_hi < 1e12:
        slope = -alpha + p * gamma * u_hi ** (gamma - 1.0)
        drop = phi_peak - _logweibull_exponent(alpha, p, gamma, u_hi)
        if slope <= -alpha / 2.0 and drop > 60.0:
            break
        u_hi *= 2.0

    def integrand(u: float) -> float:
        return math.exp(_logweibull_exponent(alpha, p, gamma, u) - phi_peak)

    val, _ = integrate.quad(integrand, 1.0, u_hi, points=[u_peak], limit=200)
    log_norm = phi_peak + math.log(val)
    return _LogWeibullInfo(alpha, p, gamma, rate, h_max, log_norm, u_hi)


def logweibull_acceptance_rate(alpha: float, p: float, gamma: float) -> float:
    """Expected acceptance probability of the rejection sampler."""
    info = _logweibull_info(alpha, p, gamma)
    # integral of target / (sup ratio) with envelope mass 1:
    # rate = exp(log_norm) / (exp(h_max) / envelope_rate)
    return math.exp(info.log_norm - info.h_max + math.log(info.rate))


def logweibull_sample(alpha: float, p: float, gamma: float, rng: np.random.Generator) -> SignedLogValue:
    """One draw, returned as (sign, u) with u = log|X| >= 1.

    U is sampled by rejection against a shifted exponential envelope on
    [1, inf); the sign is an independent fair coin drawn after acceptance.
    """
    info = _logweibull_info(alpha, p, gamma)
    while True:
        u = 1.0 + rng.standard_exponential() / info.rate
        log_accept = (
            _logweibull_exponent(alpha, p, gamma, u)
            + info.rate * (u - 1.0)
            - info.h_max
        )
        if math.log(rng.random()) < log_accept:
            break
    sign = -1 if rng.random() < 0.5 else 1
    return SignedLogValue(sign, u)


def _logweibull_block(alpha: float, p: float, gamma: float, rng: np.random.Generator, size: int):
    info = _logweibull_info(alpha, p, gamma)
    target_rate = max(logweibull_acceptance_rate(alpha, p, gamma), 1e-3)
    out = np.empty(size)
    filled = 0
    while filled < size:
        m = int((size - filled) / target_rate * 1.2) + 16
        u = 1.0 + rng.standard_exponential(m) / info.rate
        log_accept = (
            _logweibull_exponent(alpha, p, gamma, u) + info.rate * (u - 1.0) - info.h_max
        )
        accepted = u[np.log(rng.random(m)) < log_accept]
        take = min(accepted.size, size - filled)
        out[filled : filled + take] = accepted[:take]
        filled += take
    signs = np.where(rng.random(size) < 0.5, -1.0, 1.0)
    with np.errstate(over="ignore"):
        values = signs * np.exp(out)
    return values, signs, out


# ---------------------------------------------------------------------------
# Tail probabilities and means
# ---------------------------------------------------------------------------


def stable_tail_constant(alpha: float) -> float:
    """Constant in P(|X| > x) ~ C * x^-alpha: C = sin(pi*alpha/2)*Gamma(alpha)/pi."""
    return math.sin(math.pi * alpha / 2.0) * math.gamma(alpha) / math.pi


def stable_tail_threshold(alpha: float) -> float:
    """99th percentile of |X|, from the tail asymptote itself."""
    return (100.0 * stable_tail_constant(alpha)) ** (1.0 / alpha)


def tail_prob_log(spec: DistributionSpec, x: float) -> float:
    """log P(|X| > x) for x >= 1.

    Lattice: exact log-sum of the atom masses strictly above x.  Log-Weibull:
    quadrature of the density.  Stable: the asymptote C*x^-alpha, valid only
    above the 99th percentile (error below).  Gaussian and point masses:
    closed form.  No closed or numeric form exists for shifted families.
    """
    if not x >= 1.0:
        raise ValueError(f"tail_prob_log requires x >= 1, got {x!r}")
    if isinstance(spec, Degenerate):
        return 0.0 if abs(spec.value) > x else NEG_INF
    if isinstance(spec, GaussianUnitVariance):
        return LN2 + float(log_ndtr(-x))
    if isinstance(spec, SymmetricStable):
        threshold = stable_tail_threshold(spec.alpha)
        if x < threshold:
            raise AsymptoticNotApplicableError(
                f"stable tail asymptotic not applicable below x = {threshold:.6g}, got {x!r}"
            )
        return math.log(stable_tail_constant(spec.alpha)) - spec.alpha * math.log(x)
    if isinstance(spec, LatticeExp2):
        atoms = _lattice_atoms(spec.alpha, spec.lam)
        lx = math.log(x)
        mask = 2.0 ** np.arange(1, atoms.n_trunc + 1) > lx
        if not mask.any():
            return NEG_INF
        return float(logsumexp(atoms.log_probs[mask]))
    if isinstance(spec, LogWeibullTail):
        info = _logweibull_info(spec.alpha, spec.p, spec.gamma)
        w = math.log(x)
        if w <= 1.0:
            return 0.0
        if w >= info.u_max:
            return NEG_INF
        log_upper = _log_exp_integral(spec.alpha, spec.p, spec.gamma, w, info.u_max)
        return log_upper - info.log_norm
    if isinstance(spec, Shifted):
        raise UnsupportedFamilyError("tail_prob_log is not defined for Shifted specs")
    raise UnsupportedFamilyError(f"unknown spec {spec!r}")


def _log_exp_integral(alpha: float, p: float, gamma: float, lo: float, hi: float) -> float:
    """log of integral over [lo, hi] of exp(-alpha*u + p*u^gamma)."""
    grid = np.linspace(lo, hi, 64)
    peak = float(np.max(_logweibull_exponent(alpha, p, gamma, grid)))
    if peak == NEG_INF:
        return NEG_INF

    def integrand(u: float) -> float:
        return math.exp(min(_logweibull_exponent(alpha, p, gamma, u) - peak, 50.0))

    val, _ = integrate.quad(integrand, lo, hi, limit=200)
    if val <= 0.0:
        return NEG_INF
    return peak + math.log(val)


def mean_status(spec: DistributionSpec) -> MeanStatus:
    """Mean classification used by the classifier's hypotheses.

    Symmetric families have mean zero exactly when E|X| is finite:
    stable needs alpha > 1; the lattice family needs alpha > 1, or alpha = 1
    with lambda < 0; the log-Weibull family needs alpha > 1, or alpha = 1
    with p < 0.  Point masses and shifts are bookkeeping.
    """
    if isinstance(spec, GaussianUnitVariance):
        return MeanStatus.zero()
    if isinstance(spec, SymmetricStable):
        return MeanStatus.zero() if spec.alpha > 1.0 else MeanStatus.undefined()
    if isinstance(spec, LatticeExp2):
        if spec.alpha > 1.0 or (spec.alpha == 1.0 and spec.lam < 0.0):
            return MeanStatus.zero()
        return MeanStatus.undefined()
    if isinstance(spec, LogWeibullTail):
        if spec.alpha > 1.0 or (spec.alpha == 1.0 and spec.p < 0.0):
            return MeanStatus.zero()
        return MeanStatus.undefined()
    if isinstance(spec, Degenerate):
        return MeanStatus.zero() if spec.value == 0.0 else MeanStatus.nonzero(spec.value)
    if isinstance(spec, Shifted):
        base = mean_status(spec.base)
        if base.kind == "undefined_or_infinite":
            return base
        mu = base.mu + spec.shift
        return MeanStatus.zero() if mu == 0.0 else MeanStatus.nonzero(mu)
    raise UnsupportedFamilyError(f"unknown spec {spec!r}")


def constant_value(spec: DistributionSpec) -> float | None:
    """The almost-sure constant value of the spec, or None if non-degenerate."""
    if isinstance(spec, Degenerate):
        return spec.value
    if isinstance(spec, Shifted):
        base = constant_value(spec.base)
        return None if base is None else base + spec.shift
    return None


# ---------------------------------------------------------------------------
# Unified block sampling (the simulator's engine)
# ---------------------------------------------------------------------------


def sample_block(spec: DistributionSpec, rng: np.random.Generator, size: int):
    """Draw ``size`` variates; returns (values, signs, logmags) float64 arrays.

    ``values`` is the native representation (may contain +-inf when a
    magnitude exceeds float range); ``signs``/``logmags`` carry the exact
    signed-log form used by overflow-safe accumulation.
    """
    if isinstance(spec, SymmetricStable):
        return _stable_block(spec.alpha, rng, size)
    if isinstance(spec, GaussianUnitVariance):
        z = rng.standard_normal(size)
        with np.errstate(divide="ignore"):
            return z, np.sign(z), np.log(np.abs(z))
    if isinstance(spec, LatticeExp2):
        return _lattice_block(spec.alpha, spec.lam, rng, size)
    if isinstance(spec, LogWeibullTail):
        return _logweibull_block(spec.alpha, spec.p, spec.gamma, rng, size)
    if isinstance(spec, Degenerate):
        values = np.full(size, spec.value)
        signs = np.sign(values)
        with np.errstate(divide="ignore"):
            logmags = np.full(size, math.log(abs(spec.value)) if spec.value != 0.0 else NEG_INF)
        return values, signs, logmags
    if isinstance(spec, Shifted):
        base_values, _, _ = sample_block(spec.base, rng, size)
        values = base_values + spec.shift
        signs = np.sign(values)
        with np.errstate(divide="ignore", invalid="ignore"):
            logmags = np.log(np.abs(values))
        return values, signs, logmags
    raise UnsupportedFamilyError(f"unknown spec {spec!r}")


def sample_values(spec: DistributionSpec, rng: np.random.Generator, size: int) -> np.ndarray:
    """Native float64 draws (convenience wrapper around sample_block)."""
    return sample_block(spec, rng, size)[0]
