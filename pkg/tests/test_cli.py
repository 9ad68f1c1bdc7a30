import json
import subprocess
import sys

import pytest

from relalg.cli import RunReport, run
from relalg.constructions import mackenzie
from relalg.raformat import write_ra


@pytest.fixture
def mck_file(tmp_path):
    path = tmp_path / "mck.ra"
    write_ra(mackenzie(), path)
    return path


def json_run(*argv):
    code, report = run(["--json", *map(str, argv)])
    return code, report


def test_check_passes(mck_file):
    code, report = json_run("check", mck_file)
    assert code == 0 and report.passed
    assert report.results["classification"]["integral"] is True


def test_check_broken_table_fails_with_witness(tmp_path):
    s = mackenzie()
    path = tmp_path / "bad.ra"
    write_ra(s.with_entry(1, 2, s.mask(["a"])), path)
    code, report = json_run("check", path)
    assert code == 1
    failing = [v for v in report.verdicts if not v["passed"]]
    assert failing and all(v["witness"] for v in failing)


def test_gen_then_check_roundtrip(tmp_path):
    out = tmp_path / "ly5.ra"
    code, report = json_run("gen", "lyndon", 5, "-o", out)
    assert code == 0 and report.outputs == [str(out)]
    code, _ = json_run("check", out)
    assert code == 0


def test_gen_lyndon_three_is_generated_but_fails_check(tmp_path):
    out = tmp_path / "ly3.ra"
    assert json_run("gen", "lyndon", 3, "-o", out)[0] == 0
    code, report = json_run("check", out)
    assert code == 1
    assert [v["name"] for v in report.verdicts if not v["passed"]] == ["axiom associativity"]


def test_represent_and_verify(tmp_path):
    ra = tmp_path / "re2.ra"
    rep = tmp_path / "re2.rep"
    assert json_run("gen", "re", 2, "-o", ra)[0] == 0
    code, report = json_run("represent", ra, "--max-base", 3, "-o", rep)
    assert code == 0 and report.results["base"] == 2
    code, report = json_run("verify", ra, rep)
    assert code == 0


def test_represent_mackenzie_not_found(mck_file):
    code, report = json_run("represent", mck_file, "--max-base", 4)
    assert code == 1
    assert report.results["exhausted"] is True


def test_verify_bad_certificate(tmp_path, mck_file):
    rep = tmp_path / "bad.rep"
    rep.write_text("algebra: mck.ra\nbase: 2\n1' b\nb 1'\n")
    code, report = json_run("verify", mck_file, rep)
    assert code == 1
    assert report.verdicts[0]["witness"][0] == "witness"


def test_eval(mck_file, tmp_path):
    code, report = json_run("eval", "x;(y + z) = x;y + x;z", mck_file)
    assert code == 0
    eqs = tmp_path / "laws.eqs"
    eqs.write_text("# two laws\nx~~ = x\nx~ = x\n")
    code, report = json_run("eval", eqs, mck_file)
    assert code == 1
    assert [e["valid"] for e in report.results["equations"]] == [True, False]


def test_eval_parse_error_is_usage_error(mck_file):
    code, report = json_run("eval", "x +", mck_file)
    assert code == 2 and "cannot parse" in report.error


@pytest.mark.parametrize("argv", [
    ["decompose", "--classes", "2,3", "--samples", "50"],
    ["points", "--classes", "2,2,3", "--trials", "50"],
    ["pipeline", "--classes", "2,3"],
    ["orders", "--limit", "30"],
    ["bruck-ryser", "6"],
    ["slope-rep", "3"],
    ["fuse", "5", "8"],
])
def test_commands_pass(argv):
    code, report = json_run(*argv)
    assert code == 0, report.verdicts


def test_orders_output():
    _, report = json_run("orders", "--limit", "25")
    assert report.results["excluded_orders"] == [6, 14, 21, 22]
    assert report.results["non_representable_indices"] == [7, 15, 22, 23]


def test_quotient(tmp_path):
    ra = tmp_path / "sb.ra"
    assert json_run("gen", "sb", "--classes", "1,2", "-o", ra)[0] == 0
    out = tmp_path / "q.ra"
    code, report = json_run("quotient", ra, "--ideal-seed", "p0_0", "-o", out)
    assert code == 0
    assert report.results["quotient_simple"] is True
    assert len(report.results["quotient_atoms"]) == 4


@pytest.mark.parametrize("argv", [
    ["check", "/nonexistent.ra"],
    ["slope-rep", "2"],
    ["slope-rep", "4"],
    ["decompose", "--classes", "x"],
    ["nosuchcommand"],
    ["gen", "lyndon"],
])
def test_usage_errors_exit_2(argv):
    code, _ = run(["--json", *argv])
    assert code == 2


def test_global_options_before_or_after_command(mck_file):
    _, a = run(["--json", "--seed", "5", "check", str(mck_file)])
    _, b = run(["check", str(mck_file), "--json", "--seed", "5"])
    assert a.seed == b.seed == 5
    assert a.to_json() == b.to_json().replace(json.dumps(b.command), json.dumps(a.command))


def test_report_json_roundtrip(mck_file):
    _, report = run(["--json", "--timings", "check", str(mck_file)])
    back = RunReport.from_json(report.to_json(timings=True))
    assert back.to_json(timings=True) == report.to_json(timings=True)
    assert "axioms" in back.timings


def cli(*argv):
    return subprocess.run([sys.executable, "-m", "relalg.cli", *map(str, argv)],
                          capture_output=True, text=True)


def test_json_output_is_byte_identical_across_runs(mck_file):
    first = cli("--json", "check", mck_file)
    second = cli("--json", "check", mck_file)
    assert first.returncode == 0
    assert first.stdout == second.stdout
    assert json.loads(first.stdout)["exit_code"] == 0
    assert "timings" not in json.loads(first.stdout)


def test_human_output_goes_to_stderr(mck_file):
    proc = cli("check", mck_file)
    assert proc.returncode == 0
    assert proc.stdout == ""
    assert proc.stderr.startswith("seed ")
    assert "PASS" in proc.stderr
