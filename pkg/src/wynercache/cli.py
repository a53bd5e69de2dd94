"""Command-line front end: simulate, sweep, tradeoff, verify-schedule.

Exit codes: 0 on success, 1 on validation errors (diagnostic on stderr,
never a stack trace), 2 when a requested --assert condition is violated.
Every run prints its effective configuration, so any result can be replayed
from the output alone.
"""

from __future__ import annotations

import argparse
import json
import sys

from .harness import (
    DemandPolicy,
    ExperimentSpec,
    emit_plot_script,
    export_csv,
    run_experiment,
    sweep_snr,
)
from .model import (
    DemandVector,
    NetworkConfig,
    SimError,
    Variant,
    random_library,
    validate_config,
)
from .schemes import cache_placement_soft, delivery_schedule_soft, verify_schedule
from .tradeoff import ACHIEVABLE, UPPER_BOUND, curve

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_ASSERTION = 2


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors follow the exit-code contract."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_VALIDATION)


def _add_config_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--model", choices=["soft", "full"], required=True)
    sub.add_argument("--k", type=int, required=True, help="number of Tx/Rx pairs")
    sub.add_argument("--d", type=int, default=6, help="library size D (default 6)")
    sub.add_argument(
        "--alpha",
        default="1",
        help="cross gain: scalar, or comma list of K values (soft model only)",
    )
    sub.add_argument("--snr-db", default="40", help="power in dB; comma list for sweeps")
    sub.add_argument("--epsilon", type=float, default=0.05)
    sub.add_argument("--backend", choices=["ideal", "mc"], default="ideal")
    sub.add_argument("--n", type=int, default=288, help="block length (mc backend only)")
    sub.add_argument("--bits", type=int, default=8, help="bits per submessage L")
    sub.add_argument("--trials", type=int, default=1)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument(
        "--demands",
        default="random",
        help="random | distinct | equal | worst | exhaustive | explicit:3,1,4,...",
    )
    sub.add_argument("--round-robin", action="store_true")
    sub.add_argument("--prop1-delta-bits", type=int, default=0)
    sub.add_argument("--timeshare-lambda", type=float, default=None)
    sub.add_argument("--allow-small-d", action="store_true")
    sub.add_argument("--workers", type=int, default=None, help="override WCS_WORKERS")
    sub.add_argument("--out", default=None, help="output file path")
    sub.add_argument(
        "--assert",
        dest="assert_mode",
        choices=["interior-success", "all-success"],
        default=None,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wynercache", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    sim = subs.add_parser("simulate", help="run one scheme and report per-receiver success")
    _add_config_flags(sim)

    sweep = subs.add_parser("sweep", help="rerun across an SNR grid and export a CSV table")
    _add_config_flags(sweep)
    sweep.add_argument("--plot-script", default=None, help="also emit a plot script here")

    trade = subs.add_parser("tradeoff", help="export the closed-form MG tradeoff curves")
    trade.add_argument("--model", choices=["soft", "full"], required=True)
    trade.add_argument("--points", type=int, default=200)
    trade.add_argument("--x-max", type=float, default=2.0)
    trade.add_argument("--out", default=None, help="CSV path (stdout when omitted)")
    trade.add_argument("--plot-script", default=None)

    ver = subs.add_parser("verify-schedule", help="build and check the canonical schedule")
    ver.add_argument("--model", choices=["soft"], default="soft")
    ver.add_argument("--k", type=int, required=True)
    ver.add_argument("--d", type=int, default=6)
    ver.add_argument("--demands", default="distinct")
    ver.add_argument("--allow-small-d", action="store_true")
    ver.add_argument("--out", default=None, help="write the schedule JSON here")
    return parser


def _parse_gains(text: str, k: int, variant: Variant) -> tuple[float, ...] | float:
    values = [float(v) for v in text.split(",") if v.strip() != ""]
    if variant is Variant.FULL:
        if len(values) != 1:
            raise SimError("the full model takes a single --alpha value")
        return values[0]
    if len(values) == 1:
        return (values[0],) * k
    if len(values) != k:
        raise SimError(f"--alpha needs 1 or K={k} values, got {len(values)}")
    return tuple(values)


def _parse_snr_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip() != ""]


def _build_config(args: argparse.Namespace) -> NetworkConfig:
    variant = Variant.SOFT_HANDOFF if args.model == "soft" else Variant.FULL
    snrs = _parse_snr_list(args.snr_db)
    power = 10.0 ** (snrs[0] / 10.0)
    gains = _parse_gains(args.alpha, args.k, variant)
    if variant is Variant.FULL:
        cfg = NetworkConfig.full(args.k, gains, power, args.epsilon)
    else:
        cfg = NetworkConfig.soft_handoff(args.k, gains, power, args.epsilon)
    validate_config(cfg)
    return cfg


def _parse_demands(text: str) -> tuple[DemandPolicy, tuple[int, ...] | None]:
    if text.startswith("explicit:"):
        entries = tuple(int(v) for v in text.removeprefix("explicit:").split(","))
        return DemandPolicy.EXPLICIT, entries
    aliases = {
        "random": DemandPolicy.RANDOM,
        "distinct": DemandPolicy.DISTINCT,
        "equal": DemandPolicy.ALL_EQUAL,
        "worst": DemandPolicy.ALL_EQUAL,  # all-equal demands stress the repeated-file path
        "exhaustive": DemandPolicy.EXHAUSTIVE,
    }
    if text not in aliases:
        raise SimError(f"unknown demand policy {text!r}")
    return aliases[text], None


def _build_spec(args: argparse.Namespace) -> ExperimentSpec:
    policy, explicit = _parse_demands(args.demands)
    spec = ExperimentSpec(
        config=_build_config(args),
        backend=args.backend,
        num_files=args.d,
        bits=args.bits,
        n=args.n,
        trials=args.trials,
        master_seed=args.seed,
        demand_policy=policy,
        explicit_demands=explicit,
        round_robin=args.round_robin,
        prop1_extra_bits=args.prop1_delta_bits,
        timeshare_lambda=args.timeshare_lambda,
        allow_small_d=args.allow_small_d,
    )
    spec.validate()
    return spec


def _cmd_simulate(args: argparse.Namespace) -> int:
    spec = _build_spec(args)
    report = run_experiment(spec, workers=args.workers)
    payload = report.to_json()
    text = json.dumps(payload, indent=2)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if args.assert_mode == "interior-success" and report.interior_success < 1.0:
        print(f"assertion failed: interior success {report.interior_success}", file=sys.stderr)
        return EXIT_ASSERTION
    if args.assert_mode == "all-success":
        if any(v < 1.0 for v in report.per_receiver_success.values()):
            print("assertion failed: not every receiver succeeded", file=sys.stderr)
            return EXIT_ASSERTION
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    spec = _build_spec(args)
    snrs = _parse_snr_list(args.snr_db)
    result = sweep_snr(spec, snrs, workers=args.workers)
    print(json.dumps({"spec": spec.to_json(), "snr_db": snrs}, indent=2))
    if args.out:
        export_csv(result, args.out)
        if args.plot_script:
            emit_plot_script(args.out, args.plot_script, points_csv=args.out)
    else:
        for row in result.rows:
            print(
                f"P={row.p_db:g} dB  rate={row.rate_per_user:.6f}  "
                f"MG={row.empirical_mg:.6f}  success={row.guaranteed_success:.4f}"
            )
    return EXIT_OK


def _cmd_tradeoff(args: argparse.Namespace) -> int:
    from .tradeoff import TradeoffCurve, achievable

    variant = Variant.SOFT_HANDOFF if args.model == "soft" else Variant.FULL
    ach = curve(variant, ACHIEVABLE, args.points, args.x_max)
    if args.out:
        # the exported CSV carries both curves, so sample both sets of corners
        ub = curve(variant, UPPER_BOUND, args.points, args.x_max)
        xs = sorted({x for x, _ in ach.samples} | {x for x, _ in ub.samples})
        merged = TradeoffCurve(
            variant,
            ach.kind,
            ach.breakpoints,
            tuple((x, float(achievable(variant, x))) for x in xs),
        )
        export_csv(merged, args.out)
        if args.plot_script:
            emit_plot_script(args.out, args.plot_script)
    else:
        for x, s in ach.samples:
            print(f"{x:.6f} {s:.6f}")
    return EXIT_OK


def _cmd_verify_schedule(args: argparse.Namespace) -> int:
    policy, explicit = _parse_demands(args.demands)
    if policy is DemandPolicy.EXPLICIT:
        demands = DemandVector.checked(explicit, args.k, args.d)
    elif policy is DemandPolicy.ALL_EQUAL:
        demands = DemandVector((1,) * args.k)
    elif policy is DemandPolicy.DISTINCT:
        if args.d < args.k:
            raise SimError("distinct demands need at least K files")
        demands = DemandVector(tuple(range(1, args.k + 1)))
    else:
        raise SimError("verify-schedule needs distinct, equal, or explicit demands")
    library = random_library(args.d, 5 * 8, seed=0, allow_small_d=args.allow_small_d)
    schedule = delivery_schedule_soft(args.k, demands)
    placement = cache_placement_soft(args.k, library)
    violations = verify_schedule(schedule, placement, demands)
    doc = schedule.to_json()
    doc["violations"] = [
        {"kind": v.kind, "period": v.period, "actor": v.actor, "detail": v.detail}
        for v in violations
    ]
    text = json.dumps(doc, indent=2)
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if violations:
        print(f"{len(violations)} violation(s) found", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "sweep": _cmd_sweep,
        "tradeoff": _cmd_tradeoff,
        "verify-schedule": _cmd_verify_schedule,
    }
    try:
        return handlers[args.command](args)
    except SimError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
