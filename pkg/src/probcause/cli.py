"""Command-line interface: ``probcause analyze|check|verify|simulate``.

Exit codes: 0 success, 1 parse/validation error, 2 infeasible or contradicted
evidence, 3 verification failures.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import bounds, lp, report, sampler
from .errors import (
    AssumptionContradiction,
    Infeasible,
    InfeasibleSystem,
    ParseError,
    ProbCauseError,
)
from .model import AssumptionSet, causation_of, format_rational, observables_of
from .studyfile import StudyBlock, StudyFile, dumps_study, parse_dataset

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INFEASIBLE = 2
EXIT_VERIFY_FAILED = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _assumption_set(text: str) -> AssumptionSet:
    try:
        return AssumptionSet.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="probcause", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def output_flags(p):
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--digits", type=int, default=report.DEFAULT_DIGITS,
                       help="decimal digits for display (half-to-even rounding)")

    analyze = sub.add_parser("analyze", help="bounds for each assumption regime")
    analyze.add_argument("study")
    analyze.add_argument("--assume", action="append", type=_assumption_set, metavar="LIST",
                         help="regime such as 'none', 'monotonicity', 'exogeneity+monotonicity'; repeatable")
    analyze.add_argument("--regime-matrix", action="store_true",
                         help="run all four exogeneity/monotonicity combinations")
    analyze.add_argument("--override-contradiction", action="store_true",
                         help="apply assumptions even when the data refute them")
    output_flags(analyze)

    check = sub.add_parser("check", help="diagnostics only")
    check.add_argument("study")
    check.add_argument("--assume", type=_assumption_set, metavar="LIST")
    output_flags(check)

    verify = sub.add_parser("verify", help="closed forms vs exact LP on sampled profiles")
    verify.add_argument("--trials", type=int, default=1000)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--regimes", default="all",
                        help=f"'all' or comma list of {', '.join(sampler.REGIMES)}")
    verify.add_argument("--floor", type=_fraction, default=Fraction(1, 100))
    verify.add_argument("--format", choices=("text", "json"), default="text")

    simulate = sub.add_parser("simulate", help="emit sampled observables as study files")
    simulate.add_argument("--trials", type=int, default=10)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--assume", type=_assumption_set, default=AssumptionSet(), metavar="LIST")
    simulate.add_argument("--floor", type=_fraction, default=Fraction(1, 100))
    simulate.add_argument("--out", help="directory for sim-NNNNN.study files (default: JSON list on stdout)")
    return parser


def _write(data: bytes) -> None:
    sys.stdout.buffer.write(data)
    sys.stdout.flush()


def _regimes_for(args, study: StudyFile) -> list[AssumptionSet]:
    if args.regime_matrix:
        regimes = list(report.REGIME_MATRIX)
        for extra in args.assume or ():
            if extra not in regimes:
                regimes.append(extra)
        return regimes
    if args.assume:
        return list(dict.fromkeys(args.assume))
    return [study.assumptions or AssumptionSet()]


def cmd_analyze(args) -> int:
    study = parse_dataset(args.study)
    regimes = _regimes_for(args, study)
    result = report.run_analyze(
        study, regimes, override=args.override_contradiction, strict=not args.regime_matrix
    )
    _write(report.render_report(result, args.format, args.digits))
    return EXIT_OK


def cmd_check(args) -> int:
    study = parse_dataset(args.study)
    _write(report.render_report(report.run_check(study, args.assume), args.format, args.digits))
    return EXIT_OK


def _parse_regimes(text: str) -> list[tuple[str, AssumptionSet]]:
    if text.strip() == "all":
        return list(sampler.REGIMES.items())
    out = []
    for name in text.split(","):
        name = name.strip()
        if name not in sampler.REGIMES:
            raise ParseError(f"unknown regime {name!r}", "--regimes")
        out.append((name, sampler.REGIMES[name]))
    return out


def run_verify(
    config: sampler.SamplerConfig,
    regimes: Sequence[AssumptionSet],
    engine: Callable = bounds.evaluate,
) -> tuple[int, list[sampler.VerificationReport]]:
    """Run the verification trial for each regime; status 0 iff nothing failed."""
    reports = [
        sampler.verify_bounds_trial(replace(config, constraints=assume), engine=engine)
        for assume in regimes
    ]
    status = EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY_FAILED
    return status, reports


def cmd_verify(args, engine: Callable = bounds.evaluate) -> int:
    if args.trials < 1:
        raise ParseError("must be at least 1", "--trials")
    regimes = [assume for _, assume in _parse_regimes(args.regimes)]
    try:
        config = sampler.SamplerConfig(seed=args.seed, count=args.trials, floor=args.floor)
    except ValueError as exc:
        raise ParseError(str(exc), "verify") from None
    status, reports = run_verify(config, regimes, engine)
    _write(report.render_verification(reports, args.format))
    return status


def simulated_study(profile, assume: AssumptionSet, label: str) -> StudyFile:
    joint, effects = observables_of(profile)
    truth = causation_of(profile)
    obs = StudyBlock("probabilities", joint.cells)
    exp = StudyBlock(
        "probabilities",
        (effects.py_x, 1 - effects.py_x, effects.py_x_prime, 1 - effects.py_x_prime),
    )
    truth_doc = {
        name: (None if value is None else format_rational(value))
        for name, value in (("pns", truth.pns), ("pn", truth.pn), ("ps", truth.ps))
    }
    truth_doc["profile"] = {
        f"p{i}{j}{k}": format_rational(v) for (i, j, k), v in profile.as_dict().items()
    }
    return StudyFile(exp, obs, assume, label=label, truth=truth_doc)


def cmd_simulate(args) -> int:
    if args.trials < 1:
        raise ParseError("must be at least 1", "--trials")
    try:
        config = sampler.SamplerConfig(
            seed=args.seed, count=args.trials, constraints=args.assume, floor=args.floor
        )
    except ValueError as exc:
        raise ParseError(str(exc), "simulate") from None
    studies = [
        simulated_study(sampler.sample_profile(config, i), args.assume, f"simulated seed={args.seed} index={i}")
        for i in range(args.trials)
    ]
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for i, study in enumerate(studies):
            with open(os.path.join(args.out, f"sim-{i:05d}.study"), "w", encoding="utf-8") as fh:
                fh.write(dumps_study(study))
    else:
        doc = [s.to_dict() for s in studies]
        _write((json.dumps(doc, indent=2, sort_keys=True) + "\n").encode())
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "check": cmd_check,
    "verify": cmd_verify,
    "simulate": cmd_simulate,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (Infeasible, InfeasibleSystem, AssumptionContradiction) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ProbCauseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
