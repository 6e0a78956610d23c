"""Drug-trial fixture under every assumption regime, with LP witnesses.

    python scripts/golden_example.py [path/to/file.study]

For each bound reported without assumptions, prints a response profile that
reproduces both data sets and attains the bound, showing the bound is sharp.
"""
import sys
from pathlib import Path

from probcause import lp
from probcause.model import AssumptionSet, causation_of, format_decimal, observables_of
from probcause.report import REGIME_MATRIX, render_report, run_analyze
from probcause.studyfile import parse_dataset

DEFAULT = Path(__file__).resolve().parent.parent / "studies" / "table2.study"


def main() -> int:
    study = parse_dataset(sys.argv[1] if len(sys.argv) > 1 else DEFAULT)
    report = run_analyze(study, REGIME_MATRIX, strict=False)
    sys.stdout.write(render_report(report).decode())

    joint, effects = study.joint(), study.effects()
    if joint is None or effects is None:
        return 0
    print("\nWitness profiles (no assumptions)")
    for measure in ("pns", "pn", "ps"):
        for side in ("lower", "upper"):
            w = lp.witness_for_bound(joint, effects, AssumptionSet(), measure, side)
            assert observables_of(w) == (joint, effects)
            value = causation_of(w).get(measure)
            mass = " ".join(f"p{i}{j}{k}={format_decimal(v, 4)}" for (i, j, k), v in w.as_dict().items() if v)
            print(f"  {measure.upper():>3} {side:<5} = {format_decimal(value, 4):<7} {mass}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
