"""Streaming Monte Carlo of partial sums S_n and the normalised statistic

    R_n = |S_n / n^(1/alpha)|^(1/LL(n)),

stored on the exponent scale r_log = (log|S_n| - (1/alpha) log n) / LL(n) so
that R_n itself can never overflow.

Paths are independent units of work: each path derives its own 64-bit seed
from the master seed, so results are bit-identical no matter how many workers
run them or in what order they finish.  Accumulation is native float64 with
overflow detection; on overflow the path either raises or switches to signed
log-domain accumulation, per the configured policy (the switch costs
precision and is counted on the trace).

Checkpoints sit on the geometric grid n_k = ceil(n0 * ratio^k), n0 >= 16 so
the exponent 1/LL(n) stays well conditioned; n_max is always included as the
final checkpoint.
"""

from __future__ import annotations

import hashlib
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .distributions import DistributionSpec, sample_block
from .numeric_core import NEG_INF, LL, SignedLogValue, slv_add
from .sequence_calculus import ScaledSequence, chover_exponent_limsup

__all__ = [
    "SimulationConfig",
    "Checkpoint",
    "PathTrace",
    "AggregateSummary",
    "SimulationOverflowError",
    "derive_path_seed",
    "run_path",
    "run_paths",
    "aggregate",
    "default_workers",
]

_BLOCK = 1 << 16  # fixed block size keeps stream consumption deterministic

OVERFLOW_POLICIES = ("error", "switch_to_log")


class SimulationOverflowError(OverflowError):
    """Native accumulation overflowed under overflow_policy='error'."""

    def __init__(self, path_index: int, n: int):
        super().__init__(f"partial sum overflow on path {path_index} at n = {n}")
        self.path_index = path_index
        self.n = n


@dataclass(frozen=True)
class SimulationConfig:
    spec: DistributionSpec
    alpha: float
    n_max: int
    paths: int
    master_seed: int
    checkpoint_ratio: float = 1.1
    n0: int = 16
    overflow_policy: str = "error"

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha <= 2.0:
            raise ValueError(f"alpha must be in (0, 2], got {self.alpha!r}")
        if self.n0 < 16:
            raise ValueError(f"n0 must be >= 16 (keeps LL(n) away from 0), got {self.n0!r}")
        if self.n_max < self.n0:
            raise ValueError(f"n_max must be >= n0, got {self.n_max!r} < {self.n0!r}")
        if not self.checkpoint_ratio > 1.0:
            raise ValueError(f"checkpoint_ratio must exceed 1, got {self.checkpoint_ratio!r}")
        if self.paths < 1:
            raise ValueError(f"paths must be >= 1, got {self.paths!r}")
        if self.overflow_policy not in OVERFLOW_POLICIES:
            raise ValueError(
                f"overflow_policy must be one of {OVERFLOW_POLICIES}, got {self.overflow_policy!r}"
            )

    def checkpoints(self) -> np.ndarray:
        """Strictly increasing checkpoint grid, ending at n_max."""
        out = []
        k = 0
        while True:
            n = math.ceil(self.n0 * self.checkpoint_ratio**k)
            if n > self.n_max:
                break
            if not out or n > out[-1]:
                out.append(n)
            k += 1
        if not out or out[-1] != self.n_max:
            out.append(self.n_max)
        return np.asarray(out, dtype=np.int64)


class Checkpoint(NamedTuple):
    n: int
    s: SignedLogValue
    r_log: float


@dataclass(frozen=True)
class PathTrace:
    path_index: int
    checkpoints: tuple[Checkpoint, ...]
    overflow_events: int

    def __post_init__(self) -> None:
        ns = [c.n for c in self.checkpoints]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("checkpoint n values must be strictly increasing")

    def checkpoint_ns(self) -> np.ndarray:
        return np.asarray([c.n for c in self.checkpoints], dtype=np.int64)

    def r_logs(self) -> np.ndarray:
        return np.asarray([c.r_log for c in self.checkpoints], dtype=np.float64)


def derive_path_seed(master_seed: int, path_index: int) -> int:
    """Deterministic 64-bit seed for one path.

    SHA-256 of the text "<master_seed>:path:<path_index>", top 8 bytes
    big-endian.  Independent of execution order; distinct indices give
    distinct seeds up to hash collisions.
    """
    if path_index < 0:
        raise ValueError(f"path_index must be >= 0, got {path_index!r}")
    digest = hashlib.sha256(f"{int(master_seed)}:path:{int(path_index)}".encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big", signed=False)


def _r_log(sign: int, log_abs_s: float, n: int, inv_alpha: float) -> float:
    if sign == 0:
        return NEG_INF
    return (log_abs_s - inv_alpha * math.log(n)) / LL(float(n))


def run_path(config: SimulationConfig, path_index: int, _negate: bool = False) -> PathTrace:
    """Simulate one path and record (n, S_n, r_log) at each checkpoint.

    ``_negate`` flips the sign of every draw; it exists so tests can verify
    that symmetric families produce sign-flip invariant statistics.
    """
    if not 0 <= path_index < config.paths:
        raise ValueError(f"path_index must be in [0, {config.paths}), got {path_index!r}")
    rng = np.random.default_rng(derive_path_seed(config.master_seed, path_index))
    checkpoints = config.checkpoints()
    inv_alpha = 1.0 / config.alpha
    records: list[Checkpoint] = []
    overflow_events = 0

    s_native = 0.0
    s_slv = SignedLogValue.zero()
    log_mode = False
    next_cp = 0  # index into checkpoints
    n_done = 0

    while n_done < config.n_max:
        size = min(_BLOCK, config.n_max - n_done)
        values, signs, logmags = sample_block(config.spec, rng, size)
        if _negate:
            values = -values
            signs = -signs

        start_in_block = 0
        if not log_mode:
            with np.errstate(over="ignore", invalid="ignore"):
                csum = s_native + np.cumsum(values)
            finite = np.isfinite(csum)
            if finite.all():
                # record checkpoints covered by this block
                while next_cp < checkpoints.size and checkpoints[next_cp] <= n_done + size:
                    n = int(checkpoints[next_cp])
                    s_val = float(csum[n - n_done - 1])
                    slv = SignedLogValue.from_real(s_val)
                    records.append(Checkpoint(n, slv, _r_log(slv.sign, slv.log_mag, n, inv_alpha)))
                    next_cp += 1
                s_native = float(csum[-1])
                n_done += size
                continue
            # overflow inside this block
            bad = int(np.argmin(finite))
            overflow_n = n_done + bad + 1
            if config.overflow_policy == "error":
                raise SimulationOverflowError(path_index, overflow_n)
            overflow_events += 1
            while next_cp < checkpoints.size and checkpoints[next_cp] < overflow_n:
                n = int(checkpoints[next_cp])
                s_val = float(csum[n - n_done - 1])
                slv = SignedLogValue.from_real(s_val)
                records.append(Checkpoint(n, slv, _r_log(slv.sign, slv.log_mag, n, inv_alpha)))
                next_cp += 1
            s_slv = SignedLogValue.from_real(s_native if bad == 0 else float(csum[bad - 1]))
            log_mode = True
            start_in_block = bad

        for i in range(start_in_block, size):
            sgn = int(signs[i])
            if sgn != 0:
                s_slv = slv_add(s_slv, SignedLogValue(sgn, float(logmags[i])))
            n = n_done + i + 1
            if next_cp < checkpoints.size and n == int(checkpoints[next_cp]):
                records.append(
                    Checkpoint(n, s_slv, _r_log(s_slv.sign, s_slv.log_mag, n, inv_alpha))
                )
                next_cp += 1
        n_done += size

    return PathTrace(path_index, tuple(records), overflow_events)


def default_workers(paths: int) -> int:
    """Worker count: CHOVER_THREADS if set, else the CPU count, capped by paths."""
    env = os.environ.get("CHOVER_THREADS")
    if env is not None:
        workers = max(1, int(env))
    else:
        workers = os.cpu_count() or 1
    return max(1, min(workers, paths))


def run_paths(config: SimulationConfig, workers: int | None = None) -> list[PathTrace]:
    """Run every path, fanning out to a process pool when workers > 1.

    Output order is by path index, independent of completion order, and the
    traces are bit-identical for any worker count.
    """
    if workers is None:
        workers = default_workers(config.paths)
    indices = range(config.paths)
    if workers <= 1 or config.paths == 1:
        return [run_path(config, i) for i in indices]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_path, [config] * config.paths, indices))


def _quantile(values: np.ndarray, q: float) -> float:
    """Linear-interpolation quantile that tolerates +-inf entries.

    Falls back to the nearest order statistic whenever the bracketing pair
    contains a non-finite value (lerp between infinities is NaN in IEEE).
    """
    v = np.sort(np.asarray(values, dtype=np.float64))
    pos = q * (v.size - 1)
    lo = int(math.floor(pos))
    hi = int(math.ceil(pos))
    if v[lo] == v[hi]:
        return float(v[lo])
    if not (math.isfinite(v[lo]) and math.isfinite(v[hi])):
        return float(v[lo] if pos - lo < 0.5 else v[hi])
    return float(v[lo] + (pos - lo) * (v[hi] - v[lo]))


@dataclass(frozen=True)
class AggregateSummary:
    """Cross-path view of the limsup-exponent estimates and r_log quantiles."""

    path_exponents: tuple[float, ...]
    exponent_min: float
    exponent_median: float
    exponent_max: float
    band: tuple[float, float]  # 10% / 90% quantiles of the per-path estimates
    checkpoint_quantiles: tuple[tuple[int, float, float, float], ...]  # (n, q10, q50, q90)


def aggregate(traces: list[PathTrace], tail_fraction: float = 0.5) -> AggregateSummary:
    """Per-path limsup-exponent estimates plus cross-path statistics.

    Each path's checkpoints (|S_n / n^(1/alpha)|, LL(n)) feed the trailing
    window extractor; the scaled magnitudes are recovered from r_log without
    leaving the log domain.  All traces must share one checkpoint grid.
    """
    if not traces:
        raise ValueError("aggregate requires at least one trace")
    grid = traces[0].checkpoint_ns()
    for t in traces[1:]:
        if not np.array_equal(t.checkpoint_ns(), grid):
            raise ValueError("traces have mismatched checkpoint grids")
    c = np.asarray([LL(float(n)) for n in grid])

    estimates = []
    for t in traces:
        with np.errstate(invalid="ignore"):
            log_abs_a = t.r_logs() * c  # log |S_n / n^(1/alpha)|
        seq = ScaledSequence.from_log_magnitudes(log_abs_a, c, tail_fraction)
        estimates.append(chover_exponent_limsup(seq))
    est = np.asarray(estimates)

    r_matrix = np.vstack([t.r_logs() for t in traces])
    cq = tuple(
        (
            int(n),
            _quantile(r_matrix[:, k], 0.10),
            _quantile(r_matrix[:, k], 0.50),
            _quantile(r_matrix[:, k], 0.90),
        )
        for k, n in enumerate(grid)
    )
    return AggregateSummary(
        path_exponents=tuple(float(e) for e in est),
        exponent_min=float(np.min(est)),
        exponent_median=_quantile(est, 0.50),
        exponent_max=float(np.max(est)),
        band=(_quantile(est, 0.10), _quantile(est, 0.90)),
        checkpoint_quantiles=cq,
    )
