import json

import pytest
from click.testing import CliRunner

from quantalab.cli import main
from quantalab.quantale import godel3, two_chain
from quantalab.serialize import quantale_to_json


@pytest.fixture
def runner():
    return CliRunner()


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


@pytest.fixture
def godel_path(tmp_path):
    return write(tmp_path, "godel.json", {"type": "tnorm", "blocks": []})


@pytest.fixture
def block_path(tmp_path):
    return write(tmp_path, "block.json", {
        "type": "tnorm",
        "blocks": [{"lo": "1/4", "hi": "1/2", "kind": "lukasiewicz"}]})


def test_quantale_condition_s_satisfied(runner, godel_path):
    r = runner.invoke(main, ["quantale", "--quantale", godel_path, "--check", "s"])
    assert r.exit_code == 0
    assert "satisfied" in r.output


def test_quantale_condition_s_violated_with_witness(runner, block_path):
    r = runner.invoke(main, ["quantale", "--quantale", block_path, "--check", "s"])
    assert r.exit_code == 1
    assert "1/4" in r.output and "lukasiewicz" in r.output


def test_quantale_malformed_rational_is_input_error(runner, tmp_path):
    path = write(tmp_path, "bad.json", {
        "type": "tnorm", "blocks": [{"lo": "1/0", "hi": "1/2", "kind": "product"}]})
    r = runner.invoke(main, ["quantale", "--quantale", path, "--check", "s"])
    assert r.exit_code == 2


def test_quantale_finite_axioms_violation(runner, tmp_path):
    path = write(tmp_path, "broken.json", {
        "type": "finite", "carrier": ["0/1", "1/2", "1/1"],
        "tensor": [["0/1", "0/1", "0/1"],
                   ["0/1", "1/1", "1/2"],
                   ["0/1", "1/2", "1/1"]],
        "unit": "1/1"})
    r = runner.invoke(main, ["quantale", "--quantale", path, "--check", "axioms",
                             "--format", "structured"])
    assert r.exit_code == 1
    report = json.loads(r.output)
    assert report["axioms"]["status"] == "violated"
    assert report["axioms"]["violations"]


def test_quantale_structured_output_and_file(runner, godel_path, tmp_path):
    out = tmp_path / "report.json"
    r = runner.invoke(main, ["quantale", "--quantale", godel_path,
                             "--format", "structured", "--out", str(out),
                             "--grid-step", "1/16"])
    assert r.exit_code == 0
    report = json.loads(out.read_text())
    assert report["adjunction"]["status"] == "ok"
    assert report["condition (S)"]["status"] == "satisfied"


def test_laws_scenario_passes(runner, tmp_path):
    path = write(tmp_path, "sc.json", {
        "quantale": quantale_to_json(godel3()),
        "sets": {"X": ["a", "b"], "Y": ["u"], "Z": ["w", "v"]},
        "seed": 3, "budgets": {"scenarios": 8}})
    r = runner.invoke(main, ["laws", "--scenario", path])
    assert r.exit_code == 0, r.output
    assert "failures: []" in r.output


def test_laws_two_chain_reports_oracle_match(runner, tmp_path):
    path = write(tmp_path, "sc2.json", {
        "quantale": quantale_to_json(two_chain()),
        "sets": {"X": ["a", "b"], "Y": ["u"], "Z": ["w"]},
        "seed": 1, "budgets": {"scenarios": 6}})
    r = runner.invoke(main, ["laws", "--scenario", path, "--format", "structured"])
    assert r.exit_code == 0, r.output
    report = json.loads(r.output)
    assert report["classical_filter_oracle"]["status"] == "match"


def test_laws_budget_exhaustion_exit_code(runner, tmp_path):
    path = write(tmp_path, "sc3.json", {
        "quantale": quantale_to_json(godel3()),
        "sets": {"X": ["a"], "Y": ["u"], "Z": ["w"]},
        "seed": 1, "budgets": {"scenarios": 9}})
    r = runner.invoke(main, ["laws", "--scenario", path, "--budget", "2"])
    assert r.exit_code == 3
    assert "incomplete: True" in r.output


def test_laws_nonconical_map_value_is_input_error(runner, tmp_path):
    # the constant-degree-1/2 table fails the conicality precondition
    entries = [[{"values": v}, "1/2"] for v in
               [["0/1"], ["1/2"], ["1/1"]]]
    entries[-1][1] = "1/1"
    path = write(tmp_path, "sc4.json", {
        "quantale": quantale_to_json(godel3()),
        "sets": {"X": ["a"], "Y": ["u"], "Z": ["w"]},
        "maps": {"f": {"a": {"entries": entries}},
                 "g": {"u": {"entries": entries}}}})
    r = runner.invoke(main, ["laws", "--scenario", path])
    assert r.exit_code == 2
    assert "not a plain semifilter" in r.output


def test_counterexample_violation(runner, block_path):
    r = runner.invoke(main, ["counterexample", "--quantale", block_path,
                             "--t", "3/8", "--s", "3/8", "--truncation", "200"])
    assert r.exit_code == 0, r.output
    assert "verdict: VIOLATION" in r.output
    assert "step1_value: 1/1" in r.output
    assert "step2_bound: 1/4" in r.output


def test_counterexample_expected_clean_on_condition_s(runner, godel_path):
    r = runner.invoke(main, ["counterexample", "--quantale", godel_path,
                             "--t", "3/8", "--s", "1/4", "--truncation", "100"])
    assert r.exit_code == 0
    assert "NO_VIOLATION_EXPECTED" in r.output


def test_counterexample_boundary_is_input_error(runner, block_path):
    r = runner.invoke(main, ["counterexample", "--quantale", block_path,
                             "--t", "3/8", "--s", "1/4"])
    assert r.exit_code == 2


def test_reports_are_deterministic(runner, tmp_path):
    path = write(tmp_path, "det.json", {
        "quantale": quantale_to_json(godel3()),
        "sets": {"X": ["a", "b"], "Y": ["u"], "Z": ["w"]},
        "seed": 5, "budgets": {"scenarios": 6}})
    first = runner.invoke(main, ["laws", "--scenario", path, "--format", "structured"])
    second = runner.invoke(main, ["laws", "--scenario", path, "--format", "structured"])
    assert first.exit_code == second.exit_code == 0
    assert first.output == second.output


def test_counterexample_variants(runner, block_path):
    for variant in ("filter", "bounded"):
        r = runner.invoke(main, ["counterexample", "--quantale", block_path,
                                 "--t", "3/8", "--s", "3/8",
                                 "--truncation", "150", "--variant", variant,
                                 "--format", "structured"])
        assert r.exit_code == 0, r.output
        report = json.loads(r.output)
        assert report["verdict"] == "VIOLATION"
        assert report["step2_bound"] == "1/4"


def test_counterexample_from_scenario_with_witness_catalog(runner, tmp_path):
    from quantalab.counterexample import Ramp
    from quantalab.serialize import expr_to_json
    from fractions import Fraction
    path = write(tmp_path, "cx.json", {
        "quantale": {"type": "tnorm",
                     "blocks": [{"lo": "1/4", "hi": "1/2", "kind": "lukasiewicz"}]},
        "variant": "filter",
        "witness_catalog": [expr_to_json(Ramp(Fraction(1, 4)))]})
    r = runner.invoke(main, ["counterexample", "--scenario", path,
                             "--t", "3/8", "--s", "3/8", "--truncation", "60",
                             "--format", "structured"])
    assert r.exit_code == 0, r.output
    report = json.loads(r.output)
    assert report["variant"] == "filter"
    assert report["catalog_size"] == 1
    assert report["verdict"] == "VIOLATION"


def test_counterexample_needs_a_source(runner):
    r = runner.invoke(main, ["counterexample", "--t", "3/8", "--s", "3/8"])
    assert r.exit_code == 2
