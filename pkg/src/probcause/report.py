"""Analysis reports and their text / JSON renderings.

The JSON rendering is the stable machine-readable schema: every number is an
object ``{"exact": "n/d", "decimal": "0.002"}`` where ``decimal`` is the exact
value rounded half-to-even at the requested number of digits. Keys are sorted
and no timestamps are emitted, so identical inputs give identical bytes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import bounds, diagnostics, lp
from .bounds import BoundsReport
from .errors import AssumptionContradiction, Infeasible, MonotonicityIncompatible, ProbCauseError
from .model import AssumptionSet, CausalEffects, Interval, JointDistribution, format_decimal, format_rational
from .studyfile import StudyFile

REPORT_VERSION = 1
DEFAULT_DIGITS = 3

# the four exogeneity x monotonicity combinations
REGIME_MATRIX = (
    AssumptionSet(),
    AssumptionSet(exogeneity=True),
    AssumptionSet(monotonicity=True),
    AssumptionSet(exogeneity=True, monotonicity=True),
)

NAIVE_ERR_CAVEAT = "naive, incorrect under confounding"


@dataclass(frozen=True)
class RegimeResult:
    assume: AssumptionSet
    bounds: Optional[BoundsReport]
    guidance: diagnostics.Guidance
    contradictions: tuple[str, ...] = ()
    refused: Optional[str] = None
    note: Optional[str] = None
    lp_certified: Optional[bool] = None


@dataclass(frozen=True)
class AnalysisReport:
    study: StudyFile
    joint: Optional[JointDistribution]
    effects: Optional[CausalEffects]
    diagnostics: diagnostics.DiagnosticReport
    regimes: tuple[RegimeResult, ...] = ()
    version: int = REPORT_VERSION


def _analyze_regime(joint, effects, assume, override, strict) -> RegimeResult:
    diag = diagnostics.assumption_report(joint, effects, assume)
    contradicted = diag.contradicted - {"evidence"}
    note = None
    if contradicted:
        message = "; ".join(c for c in diag.contradictions if not c.startswith("evidence"))
        if not override:
            if strict:
                raise AssumptionContradiction(f"[{assume.label}] {message}")
            return RegimeResult(assume, None, diag.recommendation, diag.contradictions, refused=message)
        if "exogeneity" in contradicted and joint is not None:
            effects = None
            note = "override: experimental data set aside, effects taken from P(y|x), P(y|x')"
        else:
            note = "override: contradicted assumption applied anyway"
    try:
        result = bounds.evaluate(joint, effects, assume)
    except ProbCauseError as exc:
        if isinstance(exc, Infeasible) and not isinstance(exc, MonotonicityIncompatible):
            raise
        if strict and not override:
            raise
        return RegimeResult(assume, None, diag.recommendation, diag.contradictions, refused=str(exc), note=note)
    try:
        certified = lp.certify(result, joint, effects, assume)
    except ProbCauseError:
        certified = False
    return RegimeResult(assume, result, diag.recommendation, diag.contradictions, note=note, lp_certified=certified)


def run_analyze(
    study: StudyFile,
    regimes: Sequence[AssumptionSet],
    override: bool = False,
    strict: bool = True,
) -> AnalysisReport:
    """Diagnostics, then one bounds report per regime.

    With ``strict`` a regime refuted by the data raises
    :class:`AssumptionContradiction`; otherwise it is recorded as refused.
    Incompatible evidence always raises.
    """
    joint, effects = study.joint(), study.effects()
    declared = study.assumptions or AssumptionSet()
    diag = diagnostics.assumption_report(joint, effects, declared)
    if diag.compatibility.verdict is diagnostics.Verdict.FAIL:
        raise Infeasible(f"evidence is incompatible: {diag.compatibility.violated} fails")
    results = tuple(_analyze_regime(joint, effects, a, override, strict) for a in regimes)
    return AnalysisReport(study, joint, effects, diag, results)


def run_check(study: StudyFile, declared: Optional[AssumptionSet] = None) -> AnalysisReport:
    """Diagnostics-only report."""
    joint, effects = study.joint(), study.effects()
    declared = declared if declared is not None else (study.assumptions or AssumptionSet())
    return AnalysisReport(study, joint, effects, diagnostics.assumption_report(joint, effects, declared))


# ------------------------------------------------------------------ rendering


def _num(value: Optional[Fraction], digits: int):
    if value is None:
        return None
    return {"exact": format_rational(value), "decimal": format_decimal(value, digits)}


def _interval(interval: Optional[Interval], provenance: str, digits: int):
    if interval is None:
        return {"status": "undefined", "provenance": provenance}
    status = "vacuous" if interval.vacuous else ("identified" if interval.identified else "bounded")
    return {
        "status": status,
        "lower": _num(interval.lower, digits),
        "upper": _num(interval.upper, digits),
        "provenance": provenance,
    }


def _check(check: diagnostics.Check, digits: int) -> dict:
    out = {"verdict": check.verdict.value}
    if check.violated:
        out["violated"] = check.violated
    if check.discrepancies is not None:
        out["discrepancies"] = {
            "y_x": _num(check.discrepancies[0], digits),
            "y_x_prime": _num(check.discrepancies[1], digits),
        }
        out["tolerance"] = _num(check.tolerance, digits)
    return out


def _attribution(att: Optional[bounds.AttributionMeasures], digits: int):
    if att is None:
        return None
    return {
        "rr": _num(att.rr, digits),
        "err": _num(att.err, digits),
        "cerr": _num(att.cerr, digits),
        "relative_difference": _num(att.relative_difference, digits),
        "experimental_rr": _num(att.experimental_rr, digits),
        "experimental_err": _num(att.experimental_err, digits),
        "rr_exceeds_two": att.rr_exceeds_two,
    }


def _estimates(joint, effects, digits) -> dict:
    out = {}
    if joint is not None:
        out["observational"] = {
            "P(x,y)": _num(joint.xy, digits),
            "P(x,y')": _num(joint.xy_prime, digits),
            "P(x',y)": _num(joint.x_prime_y, digits),
            "P(x',y')": _num(joint.x_prime_y_prime, digits),
            "P(x)": _num(joint.px, digits),
            "P(y)": _num(joint.py, digits),
            "P(y|x)": _num(joint.py_given_x if joint.px else None, digits),
            "P(y|x')": _num(joint.py_given_x_prime if joint.px_prime else None, digits),
        }
    if effects is not None:
        out["experimental"] = {
            "P(y_x)": _num(effects.py_x, digits),
            "P(y_x')": _num(effects.py_x_prime, digits),
        }
    return out


def report_to_dict(report: AnalysisReport, digits: int = DEFAULT_DIGITS) -> dict:
    diag = report.diagnostics
    regimes = []
    for r in report.regimes:
        entry = {
            "assumptions": r.assume.label,
            "guidance": {"estimator": r.guidance.estimator, "description": r.guidance.description},
            "contradictions": list(r.contradictions),
        }
        if r.refused is not None:
            entry["refused"] = r.refused
        if r.note is not None:
            entry["note"] = r.note
        if r.bounds is not None:
            prov = r.bounds.provenance
            entry["bounds"] = {
                name: _interval(r.bounds.get(name), prov.get(name, ""), digits)
                for name in bounds.MEASURES
            }
            if r.bounds.effect_bounds is not None:
                entry["effect_bounds"] = {
                    key: _interval(iv, prov.get("effects", ""), digits)
                    for key, iv in zip(("P(y_x)", "P(y_x')"), r.bounds.effect_bounds)
                }
            entry["attribution"] = _attribution(r.bounds.attribution, digits)
            entry["lp_certified"] = r.lp_certified
        regimes.append(entry)
    return {
        "format_version": report.version,
        "digits": digits,
        "study": report.study.to_dict(),
        "estimates": _estimates(report.joint, report.effects, digits),
        "diagnostics": {
            "compatibility": _check(diag.compatibility, digits),
            "exogeneity": _check(diag.exogeneity, digits),
            "monotonicity_compatibility": _check(diag.monotonicity_compatibility, digits),
            "declared": diag.declared.label,
            "contradictions": list(diag.contradictions),
            "guidance": {
                "estimator": diag.recommendation.estimator,
                "description": diag.recommendation.description,
            },
        },
        "regimes": regimes,
    }


def _dec(value: Fraction, digits: int) -> str:
    return format_decimal(value, digits)


def _interval_text(name: str, interval: Optional[Interval], provenance: str, digits: int) -> str:
    if interval is None:
        return f"{name} = undefined (conditioning cell has probability zero)"
    if interval.vacuous:
        return f"{name} = [0, 1] (vacuous)"
    if interval.identified:
        return f"{name} = {_dec(interval.lower, digits)} (identified, {provenance})"
    return f"{name} = [{_dec(interval.lower, digits)}, {_dec(interval.upper, digits)}] ({provenance})"


def render_text(report: AnalysisReport, digits: int = DEFAULT_DIGITS) -> str:
    lines = []
    title = report.study.label or "study"
    lines.append(f"Analysis of {title}")
    lines.append("")
    lines.append("Estimates")
    for block, values in _estimates(report.joint, report.effects, digits).items():
        for key, num in values.items():
            shown = "undefined" if num is None else num["decimal"]
            lines.append(f"  {key:<9} = {shown}")
    diag = report.diagnostics
    lines.append("")
    lines.append("Diagnostics")
    for label, check in (
        ("compatibility", diag.compatibility),
        ("exogeneity", diag.exogeneity),
        ("monotonicity", diag.monotonicity_compatibility),
    ):
        text = f"  {label:<13} {check.verdict.value}"
        if check.violated:
            text += f" ({check.violated} fails)"
        if check.discrepancies is not None:
            d1, d0 = check.discrepancies
            text += f"; |P(y_x)-P(y|x)| = {_dec(d1, digits)}, |P(y_x')-P(y|x')| = {_dec(d0, digits)}"
        lines.append(text)
    for c in diag.contradictions:
        lines.append(f"  contradiction: {c}")
    lines.append(f"  guidance: {diag.recommendation.description}")

    for r in report.regimes:
        lines.append("")
        lines.append(f"Assumptions: {r.assume.label}")
        lines.append(f"  guidance: {r.guidance.description}")
        if r.note:
            lines.append(f"  {r.note}")
        if r.refused is not None:
            lines.append(f"  refused: {r.refused}")
            continue
        b = r.bounds
        for name in bounds.MEASURES:
            lines.append("  " + _interval_text(name.upper(), b.get(name), b.provenance.get(name, ""), digits))
        if b.effect_bounds is not None:
            for key, iv in zip(("P(y_x)", "P(y_x')"), b.effect_bounds):
                lines.append(f"  {key} in [{_dec(iv.lower, digits)}, {_dec(iv.upper, digits)}]")
        att = b.attribution
        if att is not None:
            for label, value in (
                ("RR", att.rr),
                ("ERR", att.err),
                ("CERR", att.cerr),
                ("relative difference", att.relative_difference),
            ):
                if value is not None:
                    lines.append(f"  {label} = {_dec(value, digits)}")
            if att.experimental_err is not None:
                lines.append(f"  experimental ERR = {_dec(att.experimental_err, digits)} ({NAIVE_ERR_CAVEAT})")
        if r.lp_certified is not None:
            lines.append(f"  LP certified: {'yes' if r.lp_certified else 'NO'}")
    return "\n".join(lines) + "\n"


def render_json(report: AnalysisReport, digits: int = DEFAULT_DIGITS) -> str:
    return json.dumps(report_to_dict(report, digits), indent=2, sort_keys=True) + "\n"


def render_report(report: AnalysisReport, fmt: str = "text", digits: int = DEFAULT_DIGITS) -> bytes:
    if fmt == "text":
        return render_text(report, digits).encode("utf-8")
    if fmt == "json":
        return render_json(report, digits).encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


def verification_to_dict(reports) -> dict:
    out = {"format_version": REPORT_VERSION, "regimes": []}
    for r in reports:
        out["regimes"].append({
            "regime": r.regime,
            "seed": r.seed,
            "trials": r.trials,
            "containment_failures": r.containment_failures,
            "sharpness_mismatches": r.sharpness_mismatches,
            "identity_failures": r.identity_failures,
            "worst": {k: {"discrepancy": format_rational(d), "index": i} for k, (d, i) in sorted(r.worst.items())},
            "failures": list(r.failures),
            "passed": r.passed,
        })
    out["passed"] = all(r.passed for r in reports)
    return out


def render_verification(reports, fmt: str = "text") -> bytes:
    if fmt == "json":
        return (json.dumps(verification_to_dict(reports), indent=2, sort_keys=True) + "\n").encode()
    lines = []
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        lines.append(
            f"{status} {r.regime:<24} trials={r.trials} containment_failures={r.containment_failures} "
            f"sharpness_mismatches={r.sharpness_mismatches} identity_failures={r.identity_failures}"
        )
        for f in r.failures:
            lines.append(f"    {f}")
    return ("\n".join(lines) + "\n").encode()
