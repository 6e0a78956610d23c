import json
from argparse import Namespace
from fractions import Fraction as F
from pathlib import Path

import pytest

from probcause import bounds, cli, report
from probcause.cli import main
from probcause.model import AssumptionSet, Interval
from probcause.sampler import SamplerConfig
from probcause.studyfile import parse_dataset, parse_study

STUDY = str(Path(__file__).resolve().parent.parent / "studies" / "table2.study")


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


def write_study(tmp_path, doc, name="s.study"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_analyze_text_no_assumptions(capsys):
    status, out, _ = run(capsys, "analyze", STUDY)
    assert status == 0
    assert "PNS = [0.002, 0.016] (combined bounds)" in out
    assert "PN = [1.0, 1.0] (combined bounds)" in out
    assert "PS = [0.002, 0.031] (combined bounds)" in out
    assert "LP certified: yes" in out


def test_analyze_text_monotone(capsys):
    status, out, _ = run(capsys, "analyze", STUDY, "--assume", "monotonicity")
    assert status == 0
    assert "PN = 1.0 (identified, Theorem 3)" in out
    assert "PNS = 0.002 (identified, Theorem 3)" in out
    assert "PS = 0.002 (identified, Theorem 3)" in out
    assert "experimental ERR = 0.125 (naive, incorrect under confounding)" in out


def test_structured_exact_and_decimal(capsys):
    status, out, _ = run(capsys, "analyze", STUDY, "--format", "json")
    doc = json.loads(out)
    pns = doc["regimes"][0]["bounds"]["pns"]["lower"]
    assert pns == {"exact": "1/500", "decimal": "0.002"}
    assert doc["format_version"] == report.REPORT_VERSION


def test_experimental_only_vacuous(tmp_path, capsys):
    path = write_study(tmp_path, {"version": 1, "experimental": {
        "mode": "counts", "x": {"y": 16, "y_prime": 984}, "x_prime": {"y": 14, "y_prime": 986}}})
    status, out, _ = run(capsys, "analyze", path)
    assert status == 0
    assert "PNS = [0.002, 0.016] (experimental bounds)" in out
    assert "PN = [0, 1] (vacuous)" in out and "PS = [0, 1] (vacuous)" in out


def test_regime_matrix_refuses_exogeneity(capsys):
    status, out, _ = run(capsys, "analyze", STUDY, "--regime-matrix")
    assert status == 0
    assert out.count("refused: exogeneity") == 2
    assert "PN = 1.0 (identified, Theorem 3)" in out


def test_contradicted_assumption_exit_2(capsys):
    status, _, err = run(capsys, "analyze", STUDY, "--assume", "exogeneity")
    assert status == 2 and "exogeneity" in err


def test_override_contradiction(capsys):
    status, out, _ = run(capsys, "analyze", STUDY, "--assume", "exogeneity", "--override-contradiction")
    assert status == 0
    assert "override" in out and "(Theorem 1)" in out


def test_incompatible_evidence_exit_2(tmp_path, capsys):
    path = write_study(tmp_path, {
        "version": 1,
        "observational": {"mode": "counts", "x": {"y": 50, "y_prime": 0}, "x_prime": {"y": 0, "y_prime": 50}},
        "experimental": {"mode": "counts", "x": {"y": 1, "y_prime": 3}, "x_prime": {"y": 1, "y_prime": 3}},
    })
    status, _, err = run(capsys, "analyze", path)
    assert status == 2 and "incompatible" in err


def test_validation_error_exit_1(tmp_path, capsys):
    path = write_study(tmp_path, {"version": 1, "observational": {
        "mode": "counts", "x": {"y": -1, "y_prime": 3}, "x_prime": {"y": 1, "y_prime": 3}}})
    status, _, err = run(capsys, "analyze", path)
    assert status == 1 and "observational.x.y" in err
    status, _, _ = run(capsys, "analyze", str(tmp_path / "missing.study"))
    assert status == 1
    with pytest.raises(SystemExit) as info:
        main(["analyze", STUDY, "--assume", "nonsense"])
    assert info.value.code == 1


def test_check_command(capsys):
    status, out, _ = run(capsys, "check", STUDY, "--assume", "monotonicity", "--format", "json")
    doc = json.loads(out)
    assert status == 0 and doc["regimes"] == []
    assert doc["diagnostics"]["guidance"]["estimator"] == "CERR"
    assert doc["diagnostics"]["exogeneity"]["verdict"] == "fail"


def test_empty_regime_list_is_diagnostics_only():
    rep = report.run_analyze(parse_dataset(STUDY), [])
    assert rep.regimes == ()
    assert b"Diagnostics" in report.render_report(rep)


def test_verify_single_trial(capsys):
    status, out, _ = run(capsys, "verify", "--trials", "1", "--format", "json")
    doc = json.loads(out)
    assert status == 0 and doc["passed"]
    assert [r["trials"] for r in doc["regimes"]] == [1] * 5


def test_verify_corrupted_engine_exits_3(capsys):
    def corrupted(joint, effects, assume):
        r = bounds.evaluate(joint, effects, assume)
        return r.__class__(Interval(r.pns.lower * F(1, 2), r.pns.upper), r.pn, r.ps, r.provenance)

    args = Namespace(trials=20, seed=0, regimes="none", floor=F(1, 100), format="text")
    assert cli.cmd_verify(args, engine=corrupted) == cli.EXIT_VERIFY_FAILED
    assert "FAIL" in capsys.readouterr().out
    status, reports = cli.run_verify(SamplerConfig(count=20), [AssumptionSet()], engine=corrupted)
    assert status == 3 and reports[0].sharpness_mismatches


def test_verify_rejects_unknown_regime(capsys):
    status, _, err = run(capsys, "verify", "--regimes", "faith")
    assert status == 1 and "faith" in err


def test_simulate_round_trip(tmp_path, capsys):
    status, _, _ = run(capsys, "simulate", "--trials", "3", "--seed", "5", "--assume", "monotonicity",
                       "--out", str(tmp_path))
    assert status == 0
    files = sorted(tmp_path.glob("sim-*.study"))
    assert len(files) == 3
    for path in files:
        study = parse_dataset(path)
        truth = {k: F(v) for k, v in study.truth.items() if k != "profile" and v is not None}
        status, out, _ = run(capsys, "analyze", str(path), "--format", "json")
        assert status == 0
        got = json.loads(out)["regimes"][0]["bounds"]
        for name, value in truth.items():
            assert F(got[name]["lower"]["exact"]) == value == F(got[name]["upper"]["exact"])


def test_simulate_stdout(capsys):
    status, out, _ = run(capsys, "simulate", "--trials", "2")
    docs = json.loads(out)
    assert status == 0 and len(docs) == 2
    assert parse_study(docs[0]).joint() is not None


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", STUDY, "--format", "json", "--regime-matrix"],
        ["check", STUDY, "--format", "json"],
        ["verify", "--trials", "5", "--format", "json"],
        ["simulate", "--trials", "3", "--seed", "11"],
    ],
)
def test_byte_identical_repeats(capsysbinary, argv):
    outputs = []
    for _ in range(2):
        assert main(argv) == 0
        outputs.append(capsysbinary.readouterr().out)
    assert outputs[0] == outputs[1] and outputs[0]
