import json
import subprocess
import sys

import pytest

from wallcross.cli import main
from wallcross.scenario import SCENARIO_DIR


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_main(capsys):
    code, out, _ = run(capsys, "verify", "main")
    assert code == 0
    assert "EXPECTED-DEFECT cell[square]" in out
    assert out.splitlines()[-1] == "16 checks: 13 pass, 3 expected defect, 0 fail"


def test_verify_main_killed(capsys):
    code, out, _ = run(capsys, "verify", "main", "--kill", "qp*qpp")
    assert code == 0
    assert out.splitlines()[-1] == "10 checks: 10 pass, 0 expected defect, 0 fail"
    assert "qp*qpp set to zero" in out.splitlines()[0]


def test_global_flags_before_subcommand(capsys):
    code, out, _ = run(capsys, "--format", "json", "verify", "open")
    assert code == 0
    assert all(item["status"] == "pass" for item in json.loads(out))


def test_verify_file_path(capsys):
    code, _, _ = run(capsys, "verify", str(SCENARIO_DIR / "open.scn"))
    assert code == 0


def test_verify_failing_scenario_exits_1(tmp_path, capsys):
    text = (SCENARIO_DIR / "main.scn").read_text().replace("cell[square] = defect", "cell[square] = pass\n#")
    path = tmp_path / "bad.scn"
    path.write_text(text)
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 1
    assert "FAIL" in out


def test_pullback(capsys):
    code, out, _ = run(capsys, "pullback", "-f", "z1 + z2 + (1 + q^2 + q*z3 + q*z3^-1)*z4", "-s", "-0")
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "# exact"
    assert lines[0] == "z1 + z2 + z4 + qp*z2*z3*z4 + q*z3*z4 + q*z3^-1*z4 + q*qp*z2*z4 + q^2*z4"


def test_pullback_truncated(capsys):
    code, out, _ = run(capsys, "pullback", "-f", "z2^-1", "-s", "-0", "--cutoff", "2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["exact"] is False and payload["cutoff"] == "2"
    # z2^-1 (1 + u)^-1 with u = qp*z3*z4 + q*qp*z4, terms below valuation 2
    assert payload["result"] == "z2^-1 - qp*z2^-1*z3*z4 + qp^2*z2^-1*z3^2*z4^2 - q*qp*z2^-1*z4"


def test_compose(capsys):
    code, out, _ = run(capsys, "compose", "-0", "0+")
    assert code == 0
    assert "z1 -> z1 + qpp*z1*z3^-1*z4 + qp*qpp*z1*z2*z4 + q*qpp*z1*z4" in out
    assert "z2 -> z2 + qp*z2*z3*z4 + q*qp*z2*z4" in out


def test_cell_check(capsys):
    code, out, _ = run(capsys, "cell-check", "main", "square", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert set(payload) == {"cell", "residuals", "defect", "valuation", "expected", "status"}
    assert payload["residuals"]["z1"] == "qp*qpp*z1*z2*z4"
    assert payload["defect"] == "qp*qpp*z2*z4*d1 - qp*qpp*z1*z4*d2"
    assert payload["valuation"] == "17/12"
    assert payload["status"] == "expected-defect"


def test_cell_check_killed(capsys):
    code, out, _ = run(capsys, "cell-check", "main", "square", "--kill", "qp*qpp")
    assert code == 0
    assert "expected pass: pass" in out


def test_bracket(capsys):
    assert run(capsys, "bracket", "--schouten", "z2*d1", "z1*d2")[1].strip() == "-z1*z2*d1 + z1*z2*d2"
    assert run(capsys, "bracket", "--hf", "z1*g2", "z2*g1")[1].strip() == "-z1*z2*g1 + z1*z2*g2"


def test_master(capsys):
    code, out, _ = run(capsys, "master", "main")
    assert code == 0
    ids = [line.split()[1] for line in out.splitlines()[1:-1] if line[:1] != " "]
    assert ids == ["master[eq0]", "master[eq1]", "master[eq2]", "master[full]"]


@pytest.mark.parametrize(
    "argv,fragment",
    [
        (["verify", "nowhere"], "cannot read scenario"),
        (["pullback", "-f", "z9", "-s", "-0"], "out of range"),
        (["pullback", "-f", "z1", "-s", "xx"], "unknown wall"),
        (["compose", "-0", "0-"], "disconnected"),
        (["verify", "main", "--kill", "z1"], "'z1' is not a parameter"),
    ],
)
def test_errors_exit_2(capsys, argv, fragment):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("wallcross: error: ")
    assert fragment in err


def test_usage_errors():
    with pytest.raises(SystemExit) as info:
        main(["verify"])
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "wallcross", "verify", "open"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "scenario open (cutoff 20)"


def test_reports_are_byte_identical(capsys):
    first = run(capsys, "verify", "open", "--format", "json")[1]
    second = run(capsys, "verify", "open", "--format", "json")[1]
    assert first == second
