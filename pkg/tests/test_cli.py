import json

import pytest

from qbl.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_specfun_json(capsys):
    code, out, _ = run(capsys, "specfun", "C", "--k", "1", "--z", "1", "--precision", "30")
    doc = json.loads(out)
    assert code == 0
    assert doc["precision_digits"] == 30
    re, im = doc["rows"][0]["value"]
    assert re.startswith("0.57721566490153286060651209008") and float(im) == 0


def test_specfun_hankel_method_complex_output(capsys):
    code, out, _ = run(capsys, "specfun", "C", "--k", "0", "--z", "0.5", "--method", "hankel")
    val = json.loads(out)["rows"][0]["value"]
    assert isinstance(val, list) and len(val) == 2
    assert abs(float(val[0]) - 0.5641895835477563) < 1e-12


def test_specfun_csv(capsys):
    code, out, _ = run(capsys, "specfun", "zeta", "--n", "3", "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[0] == "n,value" and lines[1].startswith("3,1.2020569031595943")


def test_borel_both(capsys):
    code, out, _ = run(capsys, "borel", "--inputs", "ups1,ek:0", "--z", "0.3", "--order", "30")
    row = json.loads(out)["rows"][0]
    assert code == 0
    assert float(row["difference"]) < 1e-10
    # z arrives as a binary double, so only ~16 digits match the decimal-z oracle
    assert abs(float(row["formal"][0]) - 1.1203727095446988) < 1e-15


def test_borel_formal_unsupported_is_usage_error(capsys):
    code, _, err = run(capsys, "borel", "--inputs", "exp,ek:0", "--mode", "formal")
    assert code == 2 and "formal route" in err


def test_qde_lambda(capsys):
    code, out, _ = run(capsys, "qde", "lambda", "--model", "blowup-p2", "--q1", "1", "--q2", "1")
    doc = json.loads(out)
    assert doc["equals_reference"] is True
    assert doc["detLambda"] == "(-(1/283)*z)/(1*z-(24/283))"


def test_qde_compare(capsys, tmp_path):
    target = tmp_path / "diff.json"
    code, out, _ = run(capsys, "qde", "derive-ode", "--compare-printed", "--out", str(target))
    doc = json.loads(target.read_text())
    assert code == 0 and out == ""
    assert doc["comparison"]["agree"] is False
    assert doc["order"] == 4


def test_qde_verify_csv(capsys):
    code, out, _ = run(capsys, "qde", "verify", "--which", "ifunction", "--order", "10", "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[0].startswith("member,passed")
    assert all(",True," in l for l in lines[1:])


def test_qde_mb(capsys):
    code, out, _ = run(capsys, "qde", "mb", "--n", "1", "--j", "0", "--z", "0.4")
    re, im = json.loads(out)["rows"][0]["value"]
    assert abs(float(re) - 1.4918246976412703) < 1e-10


def test_bad_usage_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["specfun", "nope"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        main(["specfun", "zeta", "--precision", "10"])
    assert e.value.code == 2
    code, _, _ = run(capsys, "specfun", "C", "--k", "1")
    assert code == 2


def test_computation_error_exit_1(capsys):
    code, _, err = run(capsys, "specfun", "C", "--k", "-1", "--z", "1")
    assert code == 1 and "DomainError" in err


def test_acceptance_subset(capsys):
    code, out, err = run(capsys, "acceptance", "--suite", "4,5")
    assert code == 0
    assert json.loads(out)["all_passed"] is True
    assert "[PASS]  4" in err


def test_acceptance_unknown(capsys):
    code, _, _ = run(capsys, "acceptance", "--suite", "99")
    assert code == 2


def test_qde_h_integral_lists(capsys):
    code, out, _ = run(capsys, "qde", "h-integral", "--n", "2", "--d", "1", "--j", "1",
                       "--k", "0", "--z", "0.2", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 2 and lines[0] == "z,value"
