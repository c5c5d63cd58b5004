import json

import pytest
from click.testing import CliRunner

from bsl.harness.cli import main
from bsl.polygon import group_to_dict, preset_modular


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)
    return invoke


def test_validate(run):
    res = run("validate", "--group", "modular")
    assert res.exit_code == 0
    assert "overall: PASS" in res.output


def test_validate_json(run):
    res = run("--json", "validate", "--group", "hexagon")
    assert res.exit_code == 0
    assert json.loads(res.output)["ok"] is True


def test_validate_bad_file(run, tmp_path):
    data = group_to_dict(preset_modular())
    data["letters"][0]["generator_halfplane"] = ["1", "3", "0", "1"]
    path = tmp_path / "g.json"
    path.write_text(json.dumps(data))
    res = run("validate", "--group", str(path))
    assert res.exit_code == 2
    assert "ValidationError" in res.output


def test_expand(run):
    res = run("expand", "--alpha", "(1+sqrt:5)/2", "--depth", "8")
    assert res.exit_code == 0
    assert res.output.split() == list("aBAbaBAb")


def test_expand_vertex_fails(run):
    res = run("expand", "--alpha", "3/2", "--depth", "8")
    assert res.exit_code == 1
    assert "NearBoundaryAmbiguity" in res.output


def test_accelerate(run):
    res = run("--json", "accelerate", "--alpha", "sqrt:2", "--depth", "9")
    words = json.loads(res.output)["words"]
    assert [w["word"] for w in words] == ["aBa", "aBa"]


def test_convergents(run):
    res = run("--json", "convergents", "--alpha", "sqrt:2", "--rmax", "2")
    rows = json.loads(res.output)["rows"]
    assert [r["point"] for r in rows] == ["1", "7/5", "41/29"]
    assert [r["D"] for r in rows] == ["1", "5", "29"]


def test_check_classical(run):
    res = run("check-classical", "--alpha", "sqrt:2", "--alpha", "(1+sqrt:5)/2", "--n", "20")
    assert res.exit_code == 0
    assert res.output.count("PASS") == 2
    res = run("check-classical", "--alpha", "10/7", "--n", "5")
    assert res.exit_code == 1


def test_check_theorem_part1(run):
    res = run("check-theorem", "--group", "hexagon", "--alpha", "sqrt:2", "--rmax", "10")
    assert res.exit_code == 0
    assert "part 1: PASS" in res.output


def test_check_theorem_part2_exit_code(run):
    res = run("check-theorem", "--alpha", "sqrt:2", "--rmax", "5", "--qmax", "300")
    assert res.exit_code == 1
    assert "NOT A CONVERGENT" in res.output
    res = run("check-theorem", "--alpha", "sqrt:2", "--rmax", "5", "--qmax", "300",
              "--eps", "0.2")
    assert res.exit_code == 0


def test_enumerate(run):
    res = run("enumerate", "--qmax", "4", "--window", "0,1")
    rows = [json.loads(line) for line in res.output.splitlines()]
    assert [r["D"] for r in rows] == ["1", "4", "3", "2", "3", "4", "1"]


def test_render(run, tmp_path):
    out = tmp_path / "f.svg"
    res = run("render", "--qmax", "5", "--viewport", "0,1", "-o", str(out))
    assert res.exit_code == 0
    assert out.read_text().count("<circle") == 11


def test_global_precision(run):
    res = run("--precision", "128", "--json", "expand", "--group", "hexagon",
              "--alpha", "sqrt:2", "--depth", "5")
    assert res.exit_code == 0
    assert len(json.loads(res.output)["letters"]) == 5


def test_constants(run):
    res = run("--json", "constants", "--qmax", "60", "--window", "0,1")
    data = json.loads(res.output)
    assert data["S0"] == pytest.approx(1.0)
    assert data["kappa1"] > 0 and data["kappa2"] > 0
