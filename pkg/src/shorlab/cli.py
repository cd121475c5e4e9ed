"""Command-line front end: factor, distribution, cf, montecarlo, replicate.

Output contract:
  * one JSON document per run on stdout (UTF-8, sorted keys), or CSV with
    header ``y,prob`` for the distribution paths;
  * exit 0 on success, 1 on a replication mismatch, 2 on a precondition
    rejection, 3 when retries are exhausted, 64 on usage errors.

Identical invocations with identical seeds produce byte-identical JSON
except for the two volatile manifest fields (timestamp_utc, elapsed_s).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from datetime import datetime, timezone

import numpy as np

from . import __version__, contfrac, engine, numtheory, pipeline

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_PRECONDITION = 2
EXIT_EXHAUSTED = 3
EXIT_USAGE = 64

SCHEMA_VERSION = 1

# Embedded worked example: N = 91, m = 3, forced outcome y = 13453.
EXAMPLE = {
    "N": 91,
    "m": 3,
    "Q": 16384,
    "L": 14,
    "y": 13453,
    "prob_printed": "3.189335551e-07",  # 10 significant digits
    "d_of_y": 5,
    "coefficients": [0, 1, 4, 1, 1, 2, 3, 1, 1, 3, 1, 1, 1, 1, 3],
    "p_table": [0, 1, 4, 5, 9, 23, 78, 101, 179, 638, 817, 1455, 2272, 3727, 13453],
    "q_table": [1, 1, 5, 6, 11, 28, 95, 123, 218, 777, 995, 1772, 2767, 4539, 16384],
    "rejected_candidate": (2, 5, 61),  # q_2 = 5 fails: 3**5 = 61 mod 91
    "accepted_candidate": (3, 6, 1),  # q_3 = 6 succeeds: 3**6 = 1 mod 91
    "period": 6,
    "half_power": 27,  # 3**(P/2) mod 91
    "gcd_args": (26, 91),
    "factor": 13,
}


class _Parser(argparse.ArgumentParser):
    """argparse with the usage exit code remapped from 2 to 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _manifest(command: str, config: dict) -> dict:
    return {
        "command": command,
        "config": config,
        "schema_version": SCHEMA_VERSION,
        "version": __version__,
        "timestamp_utc": datetime.now(timezone.utc).isoformat(),
    }


def _print_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _write_csv(probs, out_path: str | None) -> None:
    lines = ["y,prob"]
    lines.extend(f"{y},{p:.17g}" for y, p in enumerate(probs))
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> _Parser:
    parser = _Parser(prog="shorlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_factor = sub.add_parser("factor", help="run the five-step factoring pipeline")
    p_factor.add_argument("N", type=int)
    p_factor.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
    p_factor.add_argument("--retries", type=_positive_int, default=100)
    p_factor.add_argument("--forced-m", type=int, default=None)
    p_factor.add_argument("--forced-y", type=int, default=None)
    p_factor.add_argument("--q-override", type=int, default=None)

    p_dist = sub.add_parser("distribution", help="measurement distribution as CSV")
    p_dist.add_argument("N", type=int)
    p_dist.add_argument("m", type=int)
    mode = p_dist.add_mutually_exclusive_group()
    mode.add_argument("--closed-form", action="store_true")
    mode.add_argument("--simulate", action="store_true")
    mode.add_argument("--compare", action="store_true", help="emit max |closed - simulated|")
    p_dist.add_argument("--out", default=None, help="CSV path (default: stdout)")

    p_cf = sub.add_parser("cf", help="continued-fraction expansion table")
    p_cf.add_argument("numerator", type=int)
    p_cf.add_argument("denominator", type=_positive_int)

    p_mc = sub.add_parser("montecarlo", help="seeded period-recovery trials")
    p_mc.add_argument("N", type=int)
    p_mc.add_argument("m", type=int)
    p_mc.add_argument("trials", type=_positive_int)
    p_mc.add_argument("--seed", type=int, default=0)
    p_mc.add_argument("--forced-y", type=int, default=None)

    p_rep = sub.add_parser("replicate", help="re-run the embedded N=91 worked example")
    p_rep.add_argument("--json", action="store_true", dest="as_json")
    p_rep.add_argument(
        "--perturb",
        action="store_true",
        help="test hook: corrupt one expected value to force a mismatch",
    )
    return parser


def cmd_factor(args) -> int:
    config = pipeline.ShorConfig(
        rng_seed=args.seed,
        max_outer_retries=args.retries,
        forced_m=args.forced_m,
        forced_y=args.forced_y,
        q_override=args.q_override,
    )
    config_echo = {
        "N": args.N,
        "seed": args.seed,
        "retries": args.retries,
        "forced_m": args.forced_m,
        "forced_y": args.forced_y,
        "q_override": args.q_override,
    }
    try:
        outcome, trace = pipeline.shor_factor(args.N, config)
    except pipeline.PreconditionError as exc:
        print(f"shorlab factor: precondition failed ({exc.check}): {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ValueError, engine.CapacityError) as exc:
        print(f"shorlab factor: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    manifest = _manifest("factor", config_echo)
    manifest["elapsed_s"] = trace.elapsed_s  # volatile, like timestamp_utc
    _print_json({"manifest": manifest, "trace": trace.to_dict()})
    if outcome.kind in (pipeline.OutcomeKind.FACTOR_FOUND, pipeline.OutcomeKind.LUCKY_GCD):
        return EXIT_OK
    return EXIT_EXHAUSTED


def cmd_distribution(args) -> int:
    if numtheory.gcd_euclid(args.m % args.N, args.N) != 1:
        print(
            f"shorlab distribution: gcd({args.m}, {args.N}) != 1; base must be a unit",
            file=sys.stderr,
        )
        return EXIT_PRECONDITION
    try:
        geometry = engine.choose_geometry(args.N)
    except (ValueError, engine.CapacityError) as exc:
        print(f"shorlab distribution: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    f = engine.ModExpFunction(args.m, args.N)
    if args.compare:
        simulated = engine.simulated_distribution(geometry, f)
        period = numtheory.multiplicative_order(args.m, args.N)
        closed = engine.closed_form_distribution(
            engine.closed_form_params(period, geometry.Q), geometry
        )
        payload = {
            "manifest": _manifest(
                "distribution", {"N": args.N, "m": args.m, "mode": "compare"}
            ),
            "N": args.N,
            "m": args.m,
            "P": period,
            "Q": geometry.Q,
            "max_abs_discrepancy": float(np.max(np.abs(simulated.probs - closed.probs))),
            "closed_form_sum": float(closed.probs.sum()),
            "simulated_sum": float(simulated.probs.sum()),
        }
        _print_json(payload)
        return EXIT_OK
    if args.simulate:
        probs = engine.simulated_distribution(geometry, f).probs
    else:
        period = numtheory.multiplicative_order(args.m, args.N)
        probs = engine.closed_form_distribution(
            engine.closed_form_params(period, geometry.Q), geometry
        ).probs
    _write_csv(probs, args.out)
    return EXIT_OK


def cmd_cf(args) -> int:
    expansion = contfrac.cf_expand(args.numerator, args.denominator)
    header = f"{'n':>4} {'a_n':>12} {'p_n':>14} {'q_n':>14}"
    print(header)
    print("-" * len(header))
    for n_idx, (a, (p, q)) in enumerate(zip(expansion.coefficients, expansion.convergents)):
        print(f"{n_idx:>4} {a:>12} {p:>14} {q:>14}")
    return EXIT_OK


def cmd_montecarlo(args) -> int:
    if numtheory.gcd_euclid(args.m % args.N, args.N) != 1:
        print(
            f"shorlab montecarlo: gcd({args.m}, {args.N}) != 1; base must be a unit",
            file=sys.stderr,
        )
        return EXIT_PRECONDITION
    result = pipeline.monte_carlo_step2(
        args.N, args.m, args.trials, args.seed, forced_y=args.forced_y
    )
    payload = {
        "manifest": _manifest(
            "montecarlo",
            {
                "N": args.N,
                "m": args.m,
                "trials": args.trials,
                "seed": args.seed,
                "forced_y": args.forced_y,
            },
        ),
        "N": result.n,
        "m": result.m,
        "P": result.period,
        "trials": result.trials,
        "successes": result.successes,
        "success_fraction": result.success_fraction,
        "wilson_95": [result.wilson_low, result.wilson_high],
        "success_lower_bound": result.success_lower_bound,
        "asymptotic_bound": result.asymptotic_bound,
        "histogram": result.histogram,
    }
    _print_json(payload)
    return EXIT_OK


def _truncate_sig(value: float, digits: int) -> str:
    """Scientific-notation string with the mantissa truncated to ``digits``."""
    mantissa, exponent = f"{value:.{digits + 4}e}".split("e")
    return mantissa[: digits + 1] + "e" + exponent


def _replicate_fields(perturb: bool) -> list[dict]:
    """Run the worked example and diff every embedded value."""
    expected = dict(EXAMPLE)
    if perturb:
        expected["factor"] = expected["factor"] + 1

    config = pipeline.ShorConfig(forced_m=expected["m"], forced_y=expected["y"])
    outcome, trace = pipeline.shor_factor(expected["N"], config)
    attempt = trace.attempts[0]

    expansion = contfrac.cf_expand(expected["y"], trace.Q)
    params = engine.closed_form_params(expected["period"], trace.Q)
    prob_closed = engine.closed_form_prob(expected["y"], params)
    geometry = engine.geometry_for(expected["N"], trace.Q)
    simulated = engine.simulated_distribution(
        geometry, engine.ModExpFunction(expected["m"], expected["N"])
    )
    prob_simulated = float(simulated.probs[expected["y"]])
    d_y = pipeline.d_from_y(expected["period"], expected["Q"], expected["y"])
    half_power = numtheory.mod_pow(expected["m"], expected["period"] // 2, expected["N"])
    gcd_value = numtheory.gcd_euclid(half_power - 1, expected["N"])

    def field(name, exp, act) -> dict:
        return {"field": name, "expected": exp, "actual": act, "ok": exp == act}

    # The reference probability is printed to 10 significant digits with
    # the trailing digits dropped; match under the same truncation.
    truncated = _truncate_sig(prob_closed, 10)
    fields = [
        field("Q", expected["Q"], trace.Q),
        field("L", expected["L"], trace.L),
        field("coefficients", expected["coefficients"], list(expansion.coefficients)),
        field("p_table", expected["p_table"], [p for p, _ in expansion.convergents]),
        field("q_table", expected["q_table"], [q for _, q in expansion.convergents]),
        field("d_of_y", expected["d_of_y"], d_y),
        field("prob_closed_form_10_digits", expected["prob_printed"], truncated),
        field(
            "prob_simulated_vs_closed_1e-9",
            True,
            abs(prob_simulated - prob_closed) <= 1e-9,
        ),
        field(
            "rejected_candidate",
            list(expected["rejected_candidate"]),
            [list(t) for t in attempt.convergent_tests if t[0] == 2][0]
            if any(t[0] == 2 for t in attempt.convergent_tests)
            else None,
        ),
        field(
            "accepted_candidate",
            list(expected["accepted_candidate"]),
            [list(t) for t in attempt.convergent_tests if t[0] == 3][0]
            if any(t[0] == 3 for t in attempt.convergent_tests)
            else None,
        ),
        field("period", expected["period"], attempt.period),
        field("half_power", expected["half_power"], half_power),
        field("gcd_value", expected["factor"], gcd_value),
        field("factor", expected["factor"], outcome.factor),
    ]
    return fields


def cmd_replicate(args) -> int:
    started = time.perf_counter()
    fields = _replicate_fields(args.perturb)
    elapsed = time.perf_counter() - started
    all_ok = all(f["ok"] for f in fields)
    if args.as_json:
        manifest = _manifest("replicate", {"perturb": args.perturb})
        manifest["elapsed_s"] = elapsed
        _print_json({"manifest": manifest, "pass": all_ok, "fields": fields})
    else:
        for f in fields:
            mark = "ok  " if f["ok"] else "FAIL"
            print(f"{mark} {f['field']}: expected {f['expected']!r}, got {f['actual']!r}")
        print(f"{'PASS' if all_ok else 'FAIL'} ({len(fields)} fields, {elapsed:.2f}s)")
    return EXIT_OK if all_ok else EXIT_MISMATCH


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "factor": cmd_factor,
        "distribution": cmd_distribution,
        "cf": cmd_cf,
        "montecarlo": cmd_montecarlo,
        "replicate": cmd_replicate,
    }
    return handlers[args.command](args)


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
