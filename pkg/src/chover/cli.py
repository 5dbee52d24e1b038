"""Command-line surface.

Commands
--------
classify   decision-tree verdict for a family, JSON on stdout
index      analytic (and optionally numeric) moment index, JSON on stdout
sample     draw variates, CSV on stdout or to --out
simulate   Monte Carlo partial-sum paths: trace CSV + summary JSON lines
lemma      limsup-exponent extraction and dichotomy probes over a CSV
report     classify + index + small simulation in one JSON document

Spec strings use the key-value grammar

    family=<name>;alpha=<r>[;lambda=<r>][;p=<r>][;gamma=<r>][;value=<r>][;shift=<r>]

with family one of stable, gaussian, lattice, logweibull, degenerate; a
``shift`` key wraps the family in Shifted.  Unknown keys are rejected.

Exit codes (stable API): 0 success, 2 parse error, 3 inconsistent
classification inputs, 4 I/O failure, 5 overflow under policy 'error'.
The environment variable CHOVER_THREADS caps the simulate worker pool.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from .classifier import InconsistentInputError, classify_spec
from .distributions import (
    Degenerate,
    DistributionSpec,
    GaussianUnitVariance,
    LatticeExp2,
    LogWeibullTail,
    Shifted,
    SymmetricStable,
    sample_block,
    tail_prob_log,
)
from .moment_index import (
    IndexNotResolvableError,
    TailEvaluationError,
    moment_index_analytic,
    moment_index_numeric,
)
from .sequence_calculus import (
    ScaledSequence,
    chover_exponent_lim,
    chover_exponent_liminf,
    chover_exponent_limsup,
    dichotomy_probe,
)
from .simulator import (
    SimulationConfig,
    SimulationOverflowError,
    aggregate,
    default_workers,
    run_paths,
)

__all__ = ["main", "parse_spec_string", "SpecParseError"]

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INCONSISTENT = 3
EXIT_IO = 4
EXIT_OVERFLOW = 5

OVERFLOW_CHOICES = ("error", "switch_to_log")

_FAMILY_KEYS = {
    "stable": {"required": {"alpha"}, "optional": set()},
    "gaussian": {"required": set(), "optional": set()},
    "lattice": {"required": {"alpha", "lambda"}, "optional": set()},
    "logweibull": {"required": {"alpha", "p", "gamma"}, "optional": set()},
    "degenerate": {"required": {"value"}, "optional": set()},
}
_ALL_KEYS = {"family", "alpha", "lambda", "p", "gamma", "value", "shift"}


class SpecParseError(ValueError):
    pass


def parse_spec_string(text: str) -> DistributionSpec:
    """Parse the ``family=...;key=value`` grammar into a spec."""
    fields: dict[str, str] = {}
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise SpecParseError(f"malformed field {part!r} (expected key=value)")
        key, _, value = part.partition("=")
        key = key.strip()
        if key not in _ALL_KEYS:
            raise SpecParseError(f"unknown key {key!r}")
        if key in fields:
            raise SpecParseError(f"duplicate key {key!r}")
        fields[key] = value.strip()

    family = fields.pop("family", None)
    if family is None:
        raise SpecParseError("missing required key 'family'")
    if family not in _FAMILY_KEYS:
        raise SpecParseError(
            f"unknown family {family!r}; expected one of {sorted(_FAMILY_KEYS)}"
        )
    shift = fields.pop("shift", None)
    keys = _FAMILY_KEYS[family]
    present = set(fields)
    missing = keys["required"] - present
    if missing:
        raise SpecParseError(f"family {family!r} requires keys {sorted(missing)}")
    extra = present - keys["required"] - keys["optional"]
    if extra:
        raise SpecParseError(f"family {family!r} does not accept keys {sorted(extra)}")

    def num(key: str) -> float:
        try:
            return float(fields[key])
        except ValueError as exc:
            raise SpecParseError(f"key {key!r} is not a number: {fields[key]!r}") from exc

    try:
        if family == "stable":
            spec: DistributionSpec = SymmetricStable(num("alpha"))
        elif family == "gaussian":
            spec = GaussianUnitVariance()
        elif family == "lattice":
            spec = LatticeExp2(num("alpha"), num("lambda"))
        elif family == "logweibull":
            spec = LogWeibullTail(num("alpha"), num("p"), num("gamma"))
        else:
            spec = Degenerate(num("value"))
        if shift is not None:
            spec = Shifted(spec, float(shift))
    except ValueError as exc:
        raise SpecParseError(str(exc)) from exc
    return spec


def _json_safe(value):
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)  # "inf" / "-inf": keeps the JSON strictly parseable
    return value


def _print_json(obj) -> None:
    print(json.dumps(obj, default=str))


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_classify(args) -> int:
    try:
        spec = parse_spec_string(args.spec)
    except SpecParseError as exc:
        print(f"spec parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        verdict = classify_spec(spec, args.alpha, requested_beta=args.beta)
    except InconsistentInputError as exc:
        print(f"inconsistent inputs: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return EXIT_PARSE
    out = verdict.to_json_dict()
    out["beta"] = _json_safe(out["beta"])
    _print_json(out)
    return EXIT_OK


def _cmd_index(args) -> int:
    try:
        spec = parse_spec_string(args.spec)
        analytic = moment_index_analytic(spec, args.alpha)
    except SpecParseError as exc:
        print(f"spec parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return EXIT_PARSE
    report = {
        "analytic": {
            "index": _json_safe(analytic.index),
            "convention": analytic.convention,
        }
    }
    if args.numeric:
        def tail(x: float) -> float:
            return math.exp(tail_prob_log(spec, x))

        try:
            numeric = moment_index_numeric(tail, args.alpha, args.b_lo, args.b_hi, args.tol)
            report["numeric"] = {
                "index": _json_safe(numeric.index),
                "interval": [_json_safe(numeric.interval[0]), _json_safe(numeric.interval[1])],
                "probes": [
                    {"b": p.b, "verdict": p.verdict} for p in numeric.probes
                ],
                "convention": numeric.convention,
            }
        except (IndexNotResolvableError, TailEvaluationError) as exc:
            report["numeric"] = {"error": str(exc)}
    _print_json(report)
    return EXIT_OK


def _cmd_sample(args) -> int:
    try:
        spec = parse_spec_string(args.spec)
    except SpecParseError as exc:
        print(f"spec parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    rng = np.random.default_rng(args.seed)
    values, signs, logmags = sample_block(spec, rng, args.count)
    lines = ["index,sign,log_abs,value"]
    for i in range(args.count):
        lines.append(f"{i},{int(signs[i])},{logmags[i]!r},{values[i]!r}")
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        Path(args.out).write_text(text)
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _trace_csv_lines(traces) -> list[str]:
    lines = ["path,n,sign,log_abs_s,r_log"]
    for t in traces:
        for cp in t.checkpoints:
            lines.append(f"{t.path_index},{cp.n},{cp.s.sign},{cp.s.log_mag!r},{cp.r_log!r}")
    return lines


def _cmd_simulate(args) -> int:
    try:
        spec = parse_spec_string(args.spec)
        config = SimulationConfig(
            spec=spec,
            alpha=args.alpha,
            n_max=args.n_max,
            paths=args.paths,
            master_seed=args.seed,
            checkpoint_ratio=args.ratio,
            overflow_policy=args.overflow_policy,
        )
    except (SpecParseError, ValueError) as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        traces = run_paths(config, workers=default_workers(config.paths))
    except SimulationOverflowError as exc:
        print(
            f"overflow under policy 'error': path {exc.path_index} at n = {exc.n}",
            file=sys.stderr,
        )
        return EXIT_OVERFLOW
    summary = aggregate(traces, tail_fraction=args.tail_fraction)

    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        trace_path = out_dir / "trace.csv"
        trace_path.write_text("\n".join(_trace_csv_lines(traces)) + "\n")
        summary_path = out_dir / "summary.jsonl"
        with summary_path.open("w") as fh:
            for n, q10, q50, q90 in summary.checkpoint_quantiles:
                fh.write(
                    json.dumps(
                        {
                            "checkpoint_n": n,
                            "q10": _json_safe(q10),
                            "q50": _json_safe(q50),
                            "q90": _json_safe(q90),
                        }
                    )
                    + "\n"
                )
            for i, e in enumerate(summary.path_exponents):
                fh.write(
                    json.dumps({"path": i, "exponent_estimate": _json_safe(e)}) + "\n"
                )
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(
        f"exponent band (10-90% over {config.paths} paths): "
        f"[{summary.band[0]}, {summary.band[1]}], median {summary.exponent_median}"
    )
    print(f"trace: {trace_path}")
    print(f"summary: {summary_path}")
    return EXIT_OK


def _cmd_lemma(args) -> int:
    try:
        rows = list(csv.DictReader(Path(args.csv).open()))
        if not rows:
            raise ValueError("empty CSV")
        missing = {"n", "a", "c"} - set(rows[0])
        if missing:
            raise ValueError(f"missing columns: {sorted(missing)}")
        a = np.array([float(r["a"]) for r in rows])
        c = np.array([float(r["c"]) for r in rows])
    except (OSError, ValueError, KeyError) as exc:
        print(f"bad CSV: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        seq = ScaledSequence.from_values(a, c, tail_fraction=args.tail_fraction)
    except ValueError as exc:
        print(f"bad CSV: {exc}", file=sys.stderr)
        return EXIT_PARSE
    limsup = chover_exponent_limsup(seq)
    liminf = chover_exponent_liminf(seq)
    lim = chover_exponent_lim(seq)
    print(f"limsup exponent: {limsup}")
    print(f"liminf exponent: {liminf}")
    print(f"lim exponent: {lim.value} (converged: {lim.converged})")
    if args.beta is not None:
        report = dichotomy_probe(seq, args.beta, args.delta)
        print(
            f"upper probe at b = {report.upper.b}: "
            f"{'pass' if report.upper.passed else 'FAIL'} ({report.upper.detail})"
        )
        print(
            f"lower probe at b = {report.lower.b}: "
            f"{'pass' if report.lower.passed else 'FAIL'} ({report.lower.detail})"
        )
    return EXIT_OK


def _cmd_report(args) -> int:
    try:
        spec = parse_spec_string(args.spec)
    except SpecParseError as exc:
        print(f"spec parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        verdict = classify_spec(spec, args.alpha)
    except InconsistentInputError as exc:
        print(f"inconsistent inputs: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    analytic = moment_index_analytic(spec, args.alpha)
    config = SimulationConfig(
        spec=spec,
        alpha=args.alpha,
        n_max=args.n_max,
        paths=args.paths,
        master_seed=args.seed,
        overflow_policy="switch_to_log",
    )
    traces = run_paths(config)
    summary = aggregate(traces)
    doc = {
        "spec": args.spec,
        "alpha": args.alpha,
        "verdict": {k: _json_safe(v) for k, v in verdict.to_json_dict().items()},
        "analytic_index": _json_safe(analytic.index),
        "simulation": {
            "n_max": args.n_max,
            "paths": args.paths,
            "seed": args.seed,
            "exponent_band": [_json_safe(summary.band[0]), _json_safe(summary.band[1])],
            "exponent_median": _json_safe(summary.exponent_median),
        },
    }
    _print_json(doc)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chover",
        description="Chover-type law of the iterated logarithm toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_spec_alpha(p):
        p.add_argument("--spec", required=True, help="family=...;key=value spec string")
        p.add_argument("--alpha", type=float, required=True, help="norming exponent in (0, 2]")

    p = sub.add_parser("classify", help="decision-tree verdict for a family")
    add_spec_alpha(p)
    p.add_argument("--beta", type=float, default=None, help="membership query exponent")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("index", help="moment index of a family")
    add_spec_alpha(p)
    p.add_argument("--numeric", action="store_true", help="also locate the index numerically")
    p.add_argument("--b-lo", type=float, default=-6.0)
    p.add_argument("--b-hi", type=float, default=6.0)
    p.add_argument("--tol", type=float, default=0.1)
    p.set_defaults(func=_cmd_index)

    p = sub.add_parser("sample", help="draw variates from a family")
    p.add_argument("--spec", required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="CSV path (stdout when omitted)")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("simulate", help="Monte Carlo partial-sum paths")
    add_spec_alpha(p)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--paths", type=int, default=8)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--ratio", type=float, default=1.1, help="checkpoint grid ratio")
    p.add_argument("--tail-fraction", type=float, default=0.5)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument(
        "--overflow-policy", choices=OVERFLOW_CHOICES, default="error"
    )
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("lemma", help="limsup exponent and dichotomy probes over a CSV")
    p.add_argument("--csv", required=True, help="CSV with columns n,a,c")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--delta", type=float, default=0.5)
    p.add_argument("--tail-fraction", type=float, default=0.5)
    p.set_defaults(func=_cmd_lemma)

    p = sub.add_parser("report", help="verdict + index + small simulation")
    add_spec_alpha(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-max", type=int, default=100_000)
    p.add_argument("--paths", type=int, default=8)
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
