"""Command line interface: `sweep` runs the Monte Carlo experiment,
`demo` walks through the fixed manipulation witness."""
from __future__ import annotations

import argparse
import sys

from .geninst import GenConfig
from .harness import (
    SweepConfig,
    aggregate,
    render_csv,
    run_trials,
    write_csv,
    write_per_trial_csv,
)
from .mechanisms import boston, boston_with_rounds, deferred_acceptance
from .model import rank_of
from .oracle import witness_instance
from .strategies import Strategy


def _parse_strategies(text: str) -> tuple[Strategy, ...]:
    try:
        return tuple(Strategy(tok.strip().upper()) for tok in text.split(","))
    except ValueError:
        raise ValueError(f"strategies must be a comma list drawn from A,B,C: {text!r}") from None


def _parse_mechanisms(text: str) -> tuple[str, ...]:
    return tuple(tok.strip() for tok in text.split(","))


def _parse_counts(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok.strip()) for tok in text.split(","))
    except ValueError:
        raise ValueError(f"sophisticated counts must be a comma list of integers: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schoolmatch",
        description="School choice simulator: manipulation benefit under "
        "immediate acceptance (boston) and deferred acceptance (da).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run the seeded Monte Carlo sweep and emit CSV")
    sweep.add_argument("--students", type=int, default=2000, help="student count (default 2000)")
    sweep.add_argument("--schools", type=int, default=20, help="school count (default 20)")
    sweep.add_argument("--trials", type=int, default=100, help="trials to average (default 100)")
    sweep.add_argument(
        "--strategies", default="A,B,C", help="comma subset of A,B,C (default all)"
    )
    sweep.add_argument(
        "--mechanisms", default="boston,da", help="comma subset of boston,da (default both)"
    )
    sweep.add_argument(
        "--soph-counts",
        default=None,
        help="comma list of sophisticated-student counts "
        "(default: 20 evenly spaced counts up to the student count)",
    )
    sweep.add_argument("--seed", type=int, default=0, help="64-bit master seed (default 0)")
    sweep.add_argument("--out", default=None, help="output CSV path (default stdout)")
    sweep.add_argument(
        "--per-trial", default=None, help="optional path for raw per-trial records CSV"
    )
    sweep.add_argument("--jobs", type=int, default=1, help="parallel trial workers (default 1)")

    sub.add_parser("demo", help="run both mechanisms on the fixed manipulation witness")
    return parser


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = SweepConfig(
        gen=GenConfig(n=args.students, m=args.schools),
        trials=args.trials,
        strategies=_parse_strategies(args.strategies),
        mechanisms=_parse_mechanisms(args.mechanisms),
        soph_counts=None if args.soph_counts is None else _parse_counts(args.soph_counts),
        master_seed=args.seed,
        output_path=args.out,
    )
    records_by_trial = run_trials(cfg, jobs=args.jobs)
    rows = aggregate(records_by_trial)
    if cfg.output_path is None:
        sys.stdout.write(render_csv(rows))
    else:
        write_csv(rows, cfg.output_path)
    if args.per_trial is not None:
        write_per_trial_csv(records_by_trial, args.per_trial)
    return 0


def _cmd_demo() -> int:
    witness = witness_instance()
    inst = witness.instance
    print(f"Fixed witness: {inst.n} students, {inst.m} schools, one seat each")
    for s, prefs in enumerate(inst.true_prefs):
        print(f"  student {s} true preferences: {list(prefs)}")
    for j, prio in enumerate(inst.priorities):
        print(f"  school {j} strict priority: {list(prio.strict_order)}")

    truthful_boston, rounds = boston_with_rounds(inst, inst.true_prefs)
    truthful_da = deferred_acceptance(inst, inst.true_prefs)
    print("boston, all truthful:")
    for s in range(inst.n):
        school = truthful_boston.assignment[s]
        print(
            f"  student {s} -> school {school} "
            f"(true rank {rank_of(inst.true_prefs[s], school)}, round {rounds[s]})"
        )
    print("deferred acceptance, all truthful:")
    for s in range(inst.n):
        school = truthful_da.assignment[s]
        print(f"  student {s} -> school {school} (true rank {rank_of(inst.true_prefs[s], school)})")

    misreport_profile = list(inst.true_prefs)
    misreport_profile[witness.student] = witness.misreport
    manipulated = boston(inst, tuple(misreport_profile))
    school = manipulated.assignment[witness.student]
    print(
        f"boston, student {witness.student} reports {list(witness.misreport)}: "
        f"student {witness.student} -> school {school} "
        f"(true rank {rank_of(inst.true_prefs[witness.student], school)} "
        f"instead of {witness.truthful_rank})"
    )
    manipulated_da = deferred_acceptance(inst, tuple(misreport_profile))
    school_da = manipulated_da.assignment[witness.student]
    print(
        f"deferred acceptance, same misreport: student {witness.student} -> school {school_da} "
        f"(true rank {rank_of(inst.true_prefs[witness.student], school_da)}; no gain)"
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_demo()
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
