import json

import pytest

from tsif.constants import ExitCode
from tsif.database.records import read_database
from tsif.run import main

WIDTHS = "sum_width_decreasing_sequence,sum_width_zigzag"


def test_catalog_list(capsys):
    assert main(["catalog", "list"]) == ExitCode.success


def test_synth_writes_a_database(tmp_path, capsys):
    db = tmp_path / "pv.jsonl"
    assert main(["synth", "-p", "nb_peak,nb_valley", "-o", str(db)]) == ExitCode.success
    out = capsys.readouterr().out
    assert "P + V <= n - 2" in out
    assert len(read_database(db).records) == 4
    assert (tmp_path / "pv.jsonl.gin").is_file()

    assert main(["verify", "--db", str(db), "--max-n", "7"]) == ExitCode.success
    assert "4 records" in capsys.readouterr().out

    assert main(["facet", "--db", str(db)]) == ExitCode.success
    statuses = [record.facet["status"] for record in read_database(db).records]
    assert statuses.count("facet") >= 1


def test_verify_reports_violations(tmp_path, capsys):
    db = tmp_path / "wrong.jsonl"
    header = {"schema": "tsif-invariants", "version": 1, "tool": "test"}
    record = {
        "kind": "linear",
        "pair": ["nb_peak", "nb_valley"],
        "payload": {"e": -3, "e0": 1, "coeffs": [-1, -1], "describe": "P + V <= n - 3"},
        "certificate": "linear_synthesis",
    }
    db.write_text(json.dumps(header) + "\n" + json.dumps(record) + "\n")
    assert main(["verify", "--db", str(db), "--max-n", "5"]) == ExitCode.verification_failure
    assert "1 violations" in capsys.readouterr().out


def test_prove(capsys):
    assert main(["prove", "-p", WIDTHS, "-f", "R2 = 1"]) == ExitCode.success
    assert "proved_universal" in capsys.readouterr().out
    assert main(["prove", "-p", "nb_peak,nb_valley", "-f", "R1 = 0"]) == ExitCode.verification_failure


def test_gap(tmp_path, capsys):
    dot = tmp_path / "gap.dot"
    assert main(["gap", "--constraint", "nb_peak", "--delta", "1", "--dot", str(dot), "--check"]) == ExitCode.success
    assert dot.read_text().startswith('digraph "nb_peak_gap_1"')
    assert "certificate proved" in capsys.readouterr().out


def test_demo_solve(capsys):
    args = ["demo-solve", "-p", "nb_peak,nb_valley", "-n", "1", "--targets", "0", "0"]
    assert main(args) == ExitCode.success
    assert "solved=True" in capsys.readouterr().out


def test_export_dot(capsys):
    assert main(["export-dot", "--what", "transducer", "--name", "peak"]) == ExitCode.success
    assert capsys.readouterr().out.startswith("digraph")


def test_mine_with_bindings(tmp_path, capsys):
    dump = tmp_path / "pv.json"
    args = ["--bindings=Mining.max_conjuncts=1", "mine", "-p", "nb_peak,nb_valley", "--dump-dataset", str(dump)]
    assert main(args) == ExitCode.success
    assert [entry["n"] for entry in json.loads(dump.read_text())] == list(range(7, 13))


@pytest.mark.parametrize(
    "args",
    [
        ["synth", "-p", "nb_peak"],
        ["synth", "-p", "nb_peak,nb_unknown"],
        ["gap", "--constraint", "nb_peak", "--delta", "6"],
        ["prove", "-p", "nb_peak,nb_valley", "-f", "R1 < 2"],
        ["verify", "--db", "does-not-exist.jsonl"],
        ["no-such-command"],
    ],
)
def test_usage_errors(args, capsys):
    assert main(args) == ExitCode.usage_error
