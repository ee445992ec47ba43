import json
from pathlib import Path

import pytest

from probsub.cli import run

SC = Path(__file__).resolve().parent.parent / "scenarios"


def report(tmp_path, *argv):
    out = tmp_path / "r.json"
    code = run([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_check_universal_exit0(tmp_path):
    code, rep = report(tmp_path, "check", "--scenario", str(SC / "universal_cardinality.json"))
    assert code == 0 and rep["result"]["passed"]
    assert rep["inputs"]["seed"] == 0 and rep["subcommand"] == "check"


def test_check_two_point_exit1_with_witness(tmp_path):
    code, rep = report(tmp_path, "check", "--scenario", str(SC / "two_point_exponential.json"))
    assert code == 1
    ws = [w for w in rep["result"]["witnesses"] if w["x"] == 1 and w["y"] == 1]
    assert ws and ws[0]["lhs"] == pytest.approx(0.86466, abs=1e-5)
    assert ws[0]["rhs"] == pytest.approx(0.91792, abs=1e-5)


def test_unknown_family_exit2(tmp_path, capsys):
    code, rep = report(tmp_path, "construct", "--scenario", str(SC / "bad_family.json"))
    assert code == 2 and rep is None
    assert "unknown family" in capsys.readouterr().err


def test_malformed_json_exit2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["check", "--scenario", str(bad)]) == 2
    assert run(["check", "--scenario", str(tmp_path / "missing.json")]) == 2


def test_unknown_subcommand_exit2(capsys):
    assert run(["frobnicate"]) == 2


def test_construct_writes_csv(tmp_path):
    code, rep = report(tmp_path, "construct", "--scenario", str(SC / "jordan.json"), "--csv", str(tmp_path / "c"))
    assert code == 0
    assert "w3" in rep["result"]["flagged"]
    files = sorted(p.name for p in (tmp_path / "c").iterdir())
    assert len(files) == 8 and "set_empty.csv" in files
    head = (tmp_path / "c" / "set_w1.csv").read_text().splitlines()
    assert head[0] == "x,value" and len(head) == 258


def test_extract_frank(tmp_path):
    code, rep = report(tmp_path, "extract", "--scenario", str(SC / "frank_row.json"))
    assert code == 0 and rep["result"]["table"][""] == 0.0


def test_rho_and_neighborhood(tmp_path):
    code, rep = report(tmp_path, "rho", "--scenario", str(SC / "rho_product.json"))
    assert code == 0 and rep["result"]["verdicts"]["triangle"]
    code, rep = report(tmp_path, "neighborhood", "--scenario", str(SC / "neighborhood.json"))
    assert code == 0 and rep["result"]["members"] == ["", "a", "c"]


def test_order_and_lattice(tmp_path):
    code, rep = report(tmp_path, "order", "--scenario", str(SC / "order.json"))
    assert code == 0 and rep["result"]["d1_leq_d2"] and not rep["result"]["d2_leq_d1"]
    code, rep = report(tmp_path, "lattice", "--scenario", str(SC / "lattice.json"))
    assert code == 0 and rep["result"]["join"]["flags"]["semicopula"]


def test_tau_csv(tmp_path):
    code, rep = report(tmp_path, "tau", "--scenario", str(SC / "tau_exponentials.json"), "--csv", str(tmp_path))
    assert code == 0 and (tmp_path / "tau.csv").exists()
    assert len(rep["result"]["values"]) == 65


def test_classify_default(tmp_path):
    code, rep = report(tmp_path, "classify")
    assert code == 0 and rep["result"]["verdicts"]["copula"]


def test_grid_flags_override(tmp_path):
    code, rep = report(tmp_path, "check", "--scenario", str(SC / "universal_cardinality.json"),
                       "--grid-n", "32", "--xmax", "6", "--tol", "1e-8", "--seed", "4")
    assert code == 0
    assert rep["inputs"]["grid_n"] == 32 and rep["inputs"]["x_max"] == 6
    assert rep["result"]["params"]["tol"] == 1e-8 and rep["result"]["params"]["seed"] == 4


def test_bad_grid_flag_exit2(tmp_path):
    assert run(["check", "--scenario", str(SC / "universal_cardinality.json"), "--grid-n", "3"]) == 2


def test_timing_only_on_request(tmp_path):
    _, rep = report(tmp_path, "classify")
    assert "timing_s" not in rep
    _, rep = report(tmp_path, "classify", "--timing")
    assert rep["timing_s"] >= 0


@pytest.mark.parametrize("name", ["qam_mix.json", "two_point_exponential.json"])
def test_byte_identical(tmp_path, name):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["check", "--scenario", str(SC / name), "--seed", "7", "--out", str(a)])
    run(["check", "--scenario", str(SC / name), "--seed", "7", "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()
