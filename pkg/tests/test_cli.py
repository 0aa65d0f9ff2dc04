"""Tests of the ptree command-line tool."""

import json

import pytest

from ptree.cli import main
from ptree.dsl import parse

from .conftest import GREEN_ON_FILE, LIGHT_DEVICE_FILE, PLANS_DIR

LIGHT = str(LIGHT_DEVICE_FILE)


def test_validate(capsys):
    assert main(["validate", LIGHT]) == 0
    assert capsys.readouterr().out == "ok\n"


def test_validate_invalid(tmp_path, capsys):
    tree_file = tmp_path / "bad.ptree"
    tree_file.write_text("(X (x 1/2) (~x 1/3 (Y (y 1/2) (~y 1/4))))", encoding="utf8")
    assert main(["validate", str(tree_file)]) == 1
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    assert lines[0].startswith("normalization at <root>")
    assert lines[1].startswith("normalization at X=~x")


def test_prob(capsys):
    assert main(["prob", LIGHT, "-e", "X=x,Y=y"]) == 0
    assert capsys.readouterr().out == "3/8 (0.375)\n"


def test_cond(capsys):
    assert main(["cond", LIGHT, "-t", "H=h", "-g", "X=x,Y=y"]) == 0
    assert capsys.readouterr().out == "1/2 (0.5)\n"


def test_do(tmp_path, green_on_tree):
    output = tmp_path / "green_on.ptree"
    assert main(["do", LIGHT, "-i", "X=x", "-o", str(output)]) == 0
    assert parse(output.read_text(encoding="utf8")) == green_on_tree


def test_do_to_stdout(capsys, green_on_tree):
    assert main(["do", LIGHT, "--intervene", "X=x"]) == 0
    assert parse(capsys.readouterr().out) == green_on_tree


def test_posterior(capsys):
    assert main(["posterior", LIGHT, "--hyp", "H", "-i", "X=x", "-e", "Y=y"]) == 0
    assert capsys.readouterr().out == "h 3/5 (0.6)\n~h 2/5 (0.4)\n"


def test_sample(tmp_path):
    output = tmp_path / "samples.csv"
    assert main(["sample", LIGHT, "-n", "5", "--seed", "42", "--csv", str(output)]) == 0
    lines = output.read_text(encoding="utf8").splitlines()
    assert lines[:2] == ["# resolution order: H X Y", "H,X,Y"]
    assert len(lines) == 7


def test_sample_negative():
    with pytest.raises(SystemExit) as error:
        main(["sample", LIGHT, "-n", "-1", "--seed", "42"])
    assert error.value.code == 2


def test_experiment(tmp_path):
    output = tmp_path / "trials.csv"
    plan = str(PLANS_DIR / "light_device.yaml")
    assert main(["experiment", plan, "--csv", str(output)]) == 0
    lines = output.read_text(encoding="utf8").splitlines()
    assert lines[0] == "trial_index,interventions,observation,H=h,H=~h"
    assert len(lines) == 202


def test_experiment_verify(tmp_path, capsys):
    plan_file = tmp_path / "plan.yaml"
    plan_file.write_text(
        f"tree: {LIGHT}\nhypothesis: H\ntrue_value: h\npolicy: X=x\n"
        "observe: Y\ntrials: 4\nseed: 9\n",
        encoding="utf8",
    )
    assert main(["experiment", str(plan_file), "--verify"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 6


def test_experiment_verify_shipped_plan(tmp_path):
    output = tmp_path / "trials.csv"
    plan = str(PLANS_DIR / "light_device.yaml")
    assert main(["experiment", plan, "--csv", str(output), "--verify"]) == 0
    assert len(output.read_text(encoding="utf8").splitlines()) == 202


def test_experiment_malformed_plan(tmp_path, capsys):
    plan_file = tmp_path / "plan.yaml"
    plan_file.write_text("tree: [unclosed\nhypothesis: H\n", encoding="utf8")
    assert main(["experiment", str(plan_file)]) == 1
    captured = capsys.readouterr()
    assert captured.out == ""
    lines = captured.err.splitlines()
    assert len(lines) == 1
    assert lines[0].startswith("ERROR: Failed running experiment")
    assert "is not valid YAML" in lines[0]


def test_export(capsys):
    assert main(["export", LIGHT, "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["var"] == "H"


def test_export_unknown_format():
    with pytest.raises(SystemExit) as error:
        main(["export", LIGHT, "--format", "svg"])
    assert error.value.code == 2


def test_missing_file(tmp_path, capsys):
    assert main(["prob", str(tmp_path / "missing.ptree")]) == 1
    captured = capsys.readouterr()
    assert captured.out == ""
    assert captured.err.startswith("ERROR: Failed computing probability")


def test_zero_probability(capsys):
    assert main(["cond", str(GREEN_ON_FILE), "-t", "H=h", "-g", "X=~x"]) == 1
    assert "probability 0" in capsys.readouterr().err


def test_repeated_literal(capsys):
    assert main(["prob", LIGHT, "-e", "X=x,X=~x"]) == 1
    assert capsys.readouterr().err.startswith("ERROR: ")
