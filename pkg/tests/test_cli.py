import json

import pytest

from dp4sieve.cli import main


def test_field_check(capsys):
    assert main(["--field-p", "2", "--field-n", "2", "field-check"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["q"] == 4 and out["modulus"] == [1, 1, 1]


def test_cone_and_markings(capsys):
    assert main(["cone"]) == 0
    cone = json.loads(capsys.readouterr().out)
    assert len(cone["minus_one_classes"]) == 16
    assert len(cone["conic_classes"]) == 10
    assert main(["markings"]) == 0
    markings = json.loads(capsys.readouterr().out)
    assert len(markings) == 1920


def test_sieve_command(capsys):
    assert main(["--field-p", "3", "sieve", "--k", "1,0,0,0"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["partials"][0] == "4/9"


def test_zeta_command(capsys):
    assert main(["--field-p", "3", "zeta", "--N", "2", "--orders", "1,1,1,1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    # degree-1 factor coefficient of t_1 at q=3:
    # 1/3 - 2/9 + 2/81 - 1/243 = 32/243
    assert payload["degree1_factor"]["(1, 0, 0, 0)"] == "32/243"


def test_tamagawa_command(capsys):
    assert main(["--field-p", "3", "tamagawa"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "N,partial,increment"
    assert len(lines) == 11


def test_count_command(tmp_path, capsys):
    code = main(["--field-p", "3", "--d-max", "1",
                 "--cache-dir", str(tmp_path / "cache"),
                 "--out-dir", str(tmp_path / "out"), "count"])
    assert code == 0
    paths = capsys.readouterr().out.strip().splitlines()
    assert len(paths) == 2
    csv = open(paths[0]).read()
    assert csv.splitlines()[0] == "d,N,N_eps,prediction,ratio,upper_bound,flags"
    assert csv.splitlines()[1].startswith("0,16,16")


def test_invalid_config_exit_code(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("epsilon = 0\n")
    assert main(["--config", str(bad), "field-check"]) == 2


def test_budget_exit_code(tmp_path):
    # a budget too small for even the degree-0 class marks every row
    # partial; the report is still written and the exit code is 3
    code = main(["--field-p", "3", "--d-max", "2", "--budget", "10",
                 "--cache-dir", str(tmp_path / "c"),
                 "--out-dir", str(tmp_path / "o"), "count"])
    assert code == 3
