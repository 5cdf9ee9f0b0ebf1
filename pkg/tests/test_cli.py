import json

import jsonschema
import pytest

from lcmsunflower import cli, io


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, schema, *argv):
    code, out, err = run(capsys, *argv)
    obj = json.loads(out)
    jsonschema.validate(obj, io.schema(schema))
    return code, obj


@pytest.fixture
def supports(tmp_path):
    path = tmp_path / "f.json"
    path.write_text(json.dumps({"ground_size": 3, "labels": [2, 3, 5], "members": [[1, 2], [1, 3], [2, 3]]}))
    return str(path)


def test_fk_exact(capsys):
    code, obj = run_json(capsys, "fk_result", "fk-exact", "--N", "4", "--k", "3")
    assert code == 0 and obj["value"] == "25/12"
    assert run_json(capsys, "fk_result", "fk-exact", "--N", "1", "--k", "3")[1]["value"] == "1"
    assert run_json(capsys, "fk_result", "fk-exact", "--N", "2", "--k", "5")[1]["value"] == "3/2"


def test_fk_budget_exit_code(capsys):
    code, obj = run_json(capsys, "fk_result", "fk-exact", "--N", "20", "--k", "3", "--budget", "3")
    assert code == 2 and obj["exact"] is False


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["fk-exact", "--N", "4", "--k", "2"])
    assert info.value.code == 64
    with pytest.raises(SystemExit) as info:
        cli.main(["no-such-command"])
    assert info.value.code == 64


def test_capacity(capsys):
    code, obj = run_json(capsys, "capacity_result", "capacity", "--n", "2", "--k", "3")
    assert code == 0 and obj["F"] == 3


def test_sunflower_check(capsys, supports):
    code, obj = run_json(capsys, "sunflower_check", "sunflower-check", "--family", supports, "--k", "3", "--co")
    assert code == 0 and not obj["free"]
    assert obj["witness_labels"] == [[2, 3], [2, 5], [3, 5]]
    code, obj = run_json(capsys, "sunflower_check", "sunflower-check", "--family", supports, "--k", "3")
    assert obj["free"]


def test_malformed_family(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"ground_size": 3,\n "members": [[1, 2], [1, 4]]}')
    code, out, err = run(capsys, "sunflower-check", "--family", str(bad), "--k", "3")
    assert code == 65 and "members[1][1]" in err
    broken = tmp_path / "broken.json"
    broken.write_text('{"ground_size": 3,\n "members": [[1, 2],, ]}')
    code, out, err = run(capsys, "sunflower-check", "--family", str(broken), "--k", "3")
    assert code == 65 and "line 2" in err


def test_harmonic_commands(capsys):
    code, obj = run_json(capsys, "harmonic_result", "harmonic", "Hl", "--N", "10", "--l", "2")
    assert obj["exact"] == "4/15"
    assert run_json(capsys, "harmonic_result", "harmonic", "Al", "--x", "10", "--l", "2")[1]["count"] == 2
    assert run_json(capsys, "harmonic_result", "harmonic", "zomega", "--X", "1000", "--z", "1.5")[1]["holds"]
    g = run_json(capsys, "harmonic_result", "harmonic", "G", "--z", "0")[1]
    assert g["value"] == 1.0
    s = run_json(capsys, "harmonic_result", "harmonic", "sathe", "--x", "100000", "--l", "2", "--cutoff", "10000")[1]
    assert 0.5 < s["ratio"] < 2


def test_harmonic_trend_formats(capsys):
    code, obj = run_json(capsys, "harmonic_trend", "harmonic", "trend", "--Ns", "1000,10000", "--ells", "1,2")
    assert len(obj["rows"]) == 4
    code, out, err = run(capsys, "--format", "csv", "harmonic", "trend", "--Ns", "1000", "--ells", "1")
    assert out.startswith("N,ell,")


def test_csv_rejected_for_objects(capsys):
    code, out, err = run(capsys, "--format", "csv", "fk-exact", "--N", "3", "--k", "3")
    assert code == 64


def test_construct_thm12(capsys):
    code, obj = run_json(capsys, "construction_report", "construct", "thm12", "--k", "4", "--prime-limit", "200", "--B", "auto")
    assert obj["paper_params"]["B"] == pytest.approx(2.718281828459045 * 2**0.5)
    assert obj["predicted_exponent"] == pytest.approx(2 / (2.718281828459045 * 2**0.5))
    code, obj = run_json(
        capsys, "construction_report", "construct", "thm12", "--k", "3", "--prime-limit", "1000", "--B", "1", "--emit-elements"
    )
    assert obj["freeness_checks"]["sum_matches_product"] and obj["freeness_checks"]["lcm_k_free"]


def test_construct_thm12_cap(capsys):
    argv = ["construct", "thm12", "--k", "4", "--prime-limit", "1000", "--B", "1", "--emit-elements", "--cap", "10"]
    code, out, err = run(capsys, *argv)
    assert code == 65 and "cap" in err
    code, obj = run_json(capsys, "construction_report", *argv, "--allow-truncate")
    assert code == 0 and obj["warnings"]


def test_construct_thm12_shortfall(capsys):
    code, out, err = run(capsys, "construct", "thm12", "--k", "3", "--prime-limit", "100", "--t", "2")
    assert code == 65


def test_construct_thm15(capsys, tmp_path):
    fam = tmp_path / "fam.json"
    fam.write_text(json.dumps({"ground_size": 2, "members": [[], [1], [1, 2]]}))
    code, obj = run_json(capsys, "construction_report", "construct", "thm15", "--family", str(fam), "--prime-limit", "500")
    assert float(obj["harmonic_sum_float"]) >= 3
    assert obj["freeness_checks"]["sum_at_least_family_size"]


def test_construct_weighted(capsys, tmp_path):
    base = tmp_path / "base.json"
    base.write_text(json.dumps({"ground_size": 3, "members": [[], [1], [1, 2], [3]]}))
    code, obj = run_json(
        capsys,
        "construction_report",
        "construct", "weighted", "--c", "0.25", "--base", str(base), "--weights", "1/(p+1)", "--prime-range", "5:200",
    )
    assert code == 0
    checks = obj["freeness_checks"]
    assert checks["harmonic_identity"] and checks["measure_routes_agree"] and checks["base_cosunflower_free"]


def test_construct_weighted_bad_rule(capsys, tmp_path):
    base = tmp_path / "base.json"
    base.write_text(json.dumps({"ground_size": 3, "members": [[]]}))
    code, out, err = run(capsys, "construct", "weighted", "--c", "0.25", "--base", str(base), "--weights", "p^2", "--prime-range", "5:200")
    assert code == 64


def test_params(capsys):
    code, obj = run_json(capsys, "params", "params", "--N-log10", "1e6", "--k", "4")
    assert obj["r"] == 2 and obj["t"] >= 1


def test_output_file(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert cli.main(["--output", str(out), "fk-exact", "--N", "4", "--k", "3"]) == 0
    assert json.loads(out.read_text())["value"] == "25/12"
