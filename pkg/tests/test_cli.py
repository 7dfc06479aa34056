import json
import shutil

import pytest
from click.testing import CliRunner

from modeq.cli import main
from modeq.golden import GOLDEN_DIR


def run(*args, env=None):
    return CliRunner().invoke(main, list(args), env=env)


def coefficients(obj):
    return {int(n): c for n, c in obj["coeffs"]}


def test_expand_E4():
    res = run("expand", "--group", "sl2z", "--name", "E4", "--order", "3")
    assert res.exit_code == 0
    assert coefficients(json.loads(res.output)["series"]) == {0: "1", 1: "240", 2: "2160"}


def test_expand_M1():
    res = run("expand", "-g", "g3plus", "--name", "M1", "--order", "4")
    assert coefficients(json.loads(res.output)["series"]) == {0: "1", 1: "6", 3: "6"}


def test_expand_unknown_name_exits_2():
    res = run("expand", "-g", "sl2z", "--name", "E8", "--order", "4")
    assert res.exit_code == 2
    assert "UnknownGenerator" in res.output


@pytest.mark.parametrize("args", [("--order", "2"), ("--order", "x")])
def test_bad_order_is_a_usage_error(args):
    assert run("certify", "-g", "sl2z", "--kinf", "1/2", *args).exit_code == 2


def test_extremal_level_one_weight_six():
    res = run("extremal", "-g", "sl2z", "-k", "6", "--order", "6")
    obj = json.loads(res.output)
    assert obj["valuation"] == "1"
    assert coefficients(obj["series"])[1] == "1"


def test_extremal_level_two_minus_weight_four():
    res = run("extremal", "-g", "g2plus", "-k", "4", "-c", "-", "--order", "6")
    assert json.loads(res.output)["valuation"] == "1"


def test_extremal_empty_space_exits_4():
    assert run("extremal", "-g", "sl2z", "-k", "3", "--order", "6").exit_code == 4


def test_certify_level_one():
    res = run("certify", "-g", "sl2z", "--kinf", "1/2", "--krho", "1/2", "--ki", "3/2", "--order", "14")
    assert res.exit_code == 0
    obj = json.loads(res.output)
    assert obj["ell"] == 11
    assert obj["coords"]["g1_text"] == "1/11088*e4*e6"
    assert obj["coords"]["g0_text"] == "1/1848*e4^3 - 1/1584*e6^2"


def test_certify_level_two_first_case():
    res = run("certify", "-g", "g2plus", "--kinf", "1/2", "--krho1", "3/2", "--krho2", "1/2", "--order", "14")
    obj = json.loads(res.output)
    assert obj["ell"] == 7 and obj["delta"] == "+"
    assert [c for _, c in obj["y_plus"]["coeffs"][:4]] == ["1", "70", "5926", "503696"]


def test_certify_gcd_violation_exits_3():
    res = run("certify", "-g", "sl2z", "--kinf", "1/2", "--ki", "1", "--krho", "1/2")
    assert res.exit_code == 3
    assert "coeffs" not in res.output


def test_json_is_deterministic():
    args = ("certify", "-g", "g3plus", "--kinf", "1", "--krho1", "1/2", "--krho2", "1/2", "--order", "12")
    assert run(*args).output == run(*args).output


def test_order_from_environment():
    res = run("expand", "-g", "sl2z", "--name", "E6", env={"MODEQ_ORDER": "5"})
    assert json.loads(res.output)["series"]["trunc"] == "5"


def test_output_file(tmp_path):
    out = tmp_path / "e4.json"
    res = run("expand", "-g", "sl2z", "--name", "E4", "--order", "4", "-o", str(out))
    assert res.exit_code == 0
    assert json.loads(out.read_text())["name"] == "E4"


def test_pretty_format():
    res = run("expand", "-g", "sl2z", "--name", "E4", "--order", "4", "--format", "pretty")
    assert "1 + 240*q + 2160*q^2 + 6720*q^3 + O(q^4)" in res.output


def test_dims_and_basis():
    assert json.loads(run("dims", "-g", "g3plus", "-k", "9", "-c", "chi").output)["dimension"] == 2
    res = run("basis", "-g", "sl2z", "-k", "24", "--order", "6")
    assert len(json.loads(res.output)["basis"]) == 3


def test_wronskian_and_decompose():
    res = run("wronskian", "-g", "sl2z", "--form", "E2*E4 + E6", "--order", "16")
    assert json.loads(res.output)["polynomial"] == "-7*e4^3 + 3*e6^2"
    res = run("decompose", "-g", "sl2z", "--form", "E2*E4 + 2*E6", "--order", "16")
    obj = json.loads(res.output)
    assert obj["phi_part"] == "e4" and obj["modular_part"] == "2*e6"


def test_low_order_is_reported_not_printed():
    res = run("wronskian", "-g", "sl2z", "--form", "E2*E4 + E6", "--order", "8")
    assert res.exit_code == 4
    assert "InsufficientPrecision" in res.output and "coeffs" not in res.output


def test_indicial_and_apparent():
    q = ("--r", "1/4", "--s", "0", "--t", "864")
    res = run("indicial", "-g", "sl2z", "--point", "rho1", *q)
    assert json.loads(res.output)["kappa"] == "3/2"
    res = run("apparent", "-g", "sl2z", "--point", "rho1", "--kappa", "3/2", *q)
    assert json.loads(res.output)["apparent"] is True


def test_construct_q_interior():
    res = run("construct-q", "-g", "sl2z", "--kinf", "0", "--interior", "3/7:1")
    obj = json.loads(res.output)
    assert obj["degree"] == 2
    assert obj["obstruction_polynomial"] == "-7*r2**2 - 8640*r2 - 2654208"
    assert any("(-576)*E4*Delta/F1" in s for s in obj["solutions"])
    assert any("(-4608/7)*E4*Delta/F1" in s for s in obj["solutions"])


def test_paper_examples_all_pass():
    res = run("paper-examples")
    assert res.exit_code == 0
    assert "FAIL" not in res.output


def test_paper_examples_filter():
    res = run("paper-examples", "--filter", "g3plus")
    lines = [ln for ln in res.output.splitlines() if ln.startswith("PASS")]
    assert lines and all("G3plus" in ln for ln in lines)


def test_paper_examples_corrupted_exits_1(tmp_path):
    name = "sl2z-e6-11088.json"
    shutil.copy(GOLDEN_DIR / name, tmp_path / name)
    data = json.loads((tmp_path / name).read_text())
    data["expect"]["scale"] = "11087"
    (tmp_path / name).write_text(json.dumps(data))
    res = run("paper-examples", "--golden-dir", str(tmp_path))
    assert res.exit_code == 1
    assert "FAIL" in res.output
