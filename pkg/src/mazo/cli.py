"""Command-line entry points: the actor runner and the two-player soak.

Both commands print either a human-readable text report or a canonical
machine report (same canonicity rules as save documents, so repeated runs
emit byte-identical output).  Exit codes are a regression gate: 0 means
clean, 2 means the probe found failures (aborts or stalls), 1 means the
invocation itself was bad (arguments or content pack).
"""

from __future__ import annotations

import argparse
import sys
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from typing import IO, Optional

from .actor import DEFAULT_LIMITS, Report, RunRecord, StepLimits, aggregate, play_run
from .baseline import baseline_db
from .canonical import canonical_bytes
from .content import ContentDb, ContentError, load_content
from .netsync import DEFAULT_SOAK_LIMITS, SoakLimits, SoakReport, soak_run
from .run import RunConfig


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage problems must exit 1, not argparse's default 2
    def error(self, message: str) -> None:
        raise UsageError(message)


def _two_decimals(value: Fraction) -> str:
    exact = Decimal(value.numerator) / Decimal(value.denominator)
    return str(exact.quantize(Decimal("0.01"), rounding=ROUND_HALF_EVEN))


def _fmt_optional(value: Optional[Fraction]) -> str:
    return "n/a" if value is None else _two_decimals(value)


def _load_db(path: Optional[str]) -> ContentDb:
    if path is None:
        return baseline_db()
    with open(path, "rb") as handle:
        return load_content(handle.read())


# ---------------------------------------------------------------------------
# Actor command
# ---------------------------------------------------------------------------


def _actor_parser() -> _Parser:
    parser = _Parser(prog="mazo-actor", description="Run seeded autoplay probes and report.")
    parser.add_argument("--runs", type=int, required=True, help="number of seeds to play")
    parser.add_argument("--seed-start", type=int, default=1, help="first seed (default 1)")
    parser.add_argument("--players", type=int, choices=(1, 2), default=1)
    parser.add_argument("--content", default=None, help="content pack path (default: built-in)")
    parser.add_argument("--report", choices=("text", "machine"), default="text")
    parser.add_argument("--combat-step-limit", type=int, default=DEFAULT_LIMITS.combat_step_limit)
    parser.add_argument("--run-step-limit", type=int, default=DEFAULT_LIMITS.run_step_limit)
    return parser


def _record_to_dict(record: RunRecord) -> dict:
    return {
        "seed": record.seed,
        "outcome": record.outcome.value,
        "abort_reason": None if record.abort_reason is None else record.abort_reason.value,
        "combats": record.combats,
        "elites": record.elites,
        "bosses": record.bosses,
        "final_hp": record.final_hp,
        "surviving_heroes": record.surviving_heroes,
        "steps": record.steps,
    }


def _report_to_dict(report: Report) -> dict:
    return {
        "runs": report.runs,
        "wins": report.wins,
        "losses": report.losses,
        "aborts": report.aborts,
        "win_rate": _two_decimals(report.win_rate),
        "avg_combats": _two_decimals(report.avg_combats),
        "avg_elites": _two_decimals(report.avg_elites),
        "avg_bosses": _two_decimals(report.avg_bosses),
        "avg_victory_hp": (
            None if report.avg_victory_hp is None else _two_decimals(report.avg_victory_hp)
        ),
        "avg_surviving_heroes": (
            None
            if report.avg_surviving_heroes is None
            else _two_decimals(report.avg_surviving_heroes)
        ),
    }


def _actor_text(report: Report) -> str:
    lines = [
        f"runs={report.runs} wins={report.wins} losses={report.losses} aborts={report.aborts}",
        "win_rate={} avg_combats={} avg_elites={} avg_bosses={}".format(
            _two_decimals(report.win_rate),
            _two_decimals(report.avg_combats),
            _two_decimals(report.avg_elites),
            _two_decimals(report.avg_bosses),
        ),
        "avg_victory_hp={} avg_surviving_heroes={}".format(
            _fmt_optional(report.avg_victory_hp), _fmt_optional(report.avg_surviving_heroes)
        ),
    ]
    return "\n".join(lines)


def run_actor_cli(
    argv: Optional[list[str]] = None,
    out: Optional[IO[str]] = None,
    err: Optional[IO[str]] = None,
) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = _actor_parser()
    try:
        args = parser.parse_args(argv)
        if args.runs < 1:
            raise UsageError("--runs must be at least 1")
        if args.combat_step_limit < 1 or args.run_step_limit < 1:
            raise UsageError("step limits must be at least 1")
    except UsageError as exc:
        err.write(parser.format_usage())
        err.write(f"error: {exc}\n")
        return 1
    try:
        db = _load_db(args.content)
    except (OSError, ContentError) as exc:
        err.write(f"error: cannot load content: {exc}\n")
        return 1

    config = RunConfig(players=args.players)
    limits = StepLimits(
        combat_step_limit=args.combat_step_limit, run_step_limit=args.run_step_limit
    )
    records = [
        play_run(seed, config, db, limits=limits)
        for seed in range(args.seed_start, args.seed_start + args.runs)
    ]
    report = aggregate(records)
    if args.report == "machine":
        doc = {"report": _report_to_dict(report), "records": [_record_to_dict(r) for r in records]}
        out.write(canonical_bytes(doc).decode("utf-8") + "\n")
    else:
        out.write(_actor_text(report) + "\n")
    return 0 if report.aborts == 0 else 2


def actor_main() -> None:
    sys.exit(run_actor_cli())


# ---------------------------------------------------------------------------
# Soak command
# ---------------------------------------------------------------------------


def _soak_parser() -> _Parser:
    parser = _Parser(prog="mazo-soak", description="Run the in-process two-player soak.")
    parser.add_argument("--runs", type=int, required=True, help="number of seeds to soak")
    parser.add_argument("--seed-start", type=int, default=1, help="first seed (default 1)")
    parser.add_argument("--content", default=None, help="content pack path (default: built-in)")
    parser.add_argument("--report", choices=("text", "machine"), default="text")
    parser.add_argument(
        "--idle-limit", type=int, default=DEFAULT_SOAK_LIMITS.idle_limit_ticks,
        help="ticks without an action before a seed counts as stalled",
    )
    parser.add_argument(
        "--budget", type=int, default=DEFAULT_SOAK_LIMITS.budget_ticks,
        help="tick budget per seed before a progress timeout",
    )
    return parser


def _soak_to_dict(report: SoakReport) -> dict:
    return {
        "completed": report.completed,
        "stalls": report.stalls,
        "progress_timeouts": report.progress_timeouts,
        "first_stall_seed": report.first_stall_seed,
    }


def _soak_text(report: SoakReport) -> str:
    line = (
        f"completed={report.completed} stalls={report.stalls} "
        f"progress_timeouts={report.progress_timeouts}"
    )
    if report.first_stall_seed is not None:
        line += f"\nfirst_stall_seed={report.first_stall_seed}"
    return line


def run_soak_cli(
    argv: Optional[list[str]] = None,
    out: Optional[IO[str]] = None,
    err: Optional[IO[str]] = None,
) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = _soak_parser()
    try:
        args = parser.parse_args(argv)
        if args.runs < 1:
            raise UsageError("--runs must be at least 1")
        if args.idle_limit < 1 or args.budget < 1:
            raise UsageError("soak limits must be at least 1")
    except UsageError as exc:
        err.write(parser.format_usage())
        err.write(f"error: {exc}\n")
        return 1
    try:
        db = _load_db(args.content)
    except (OSError, ContentError) as exc:
        err.write(f"error: cannot load content: {exc}\n")
        return 1

    seeds = list(range(args.seed_start, args.seed_start + args.runs))
    limits = SoakLimits(idle_limit_ticks=args.idle_limit, budget_ticks=args.budget)
    report = soak_run(seeds, RunConfig(players=2), db, limits=limits)
    if args.report == "machine":
        out.write(canonical_bytes({"report": _soak_to_dict(report)}).decode("utf-8") + "\n")
    else:
        out.write(_soak_text(report) + "\n")
    return 0 if report.stalls == 0 else 2


def soak_main() -> None:
    sys.exit(run_soak_cli())
