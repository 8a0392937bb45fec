import csv
import io
import json
import math

import pytest

from amplicount.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def records(text):
    return [json.loads(line) for line in text.splitlines()]


def test_count_example(capsys):
    code, out, _ = run(capsys, "count", "--n", "4", "--t", "4", "--P", "8", "--seed", "1")
    assert code == 0
    rec, agg = records(out)
    assert rec["f_tilde"] in (0, 1, 2, 3, 4) and rec["queries"] == 8
    assert rec["t_tilde"] == round(16 * math.sin(rec["f_tilde"] * math.pi / 8) ** 2, 9)
    assert rec["config"]["seed"] == 1 and agg["record"] == "aggregate"
    assert rec["success_guarantee"] == 0.810569469


def test_count_zero(capsys):
    code, out, _ = run(capsys, "count", "--n", "4", "--t", "0", "--P", "8", "--seed", "1")
    assert code == 0 and records(out)[0]["t_tilde"] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--n", "4", "--t", "4", "--P", "8", "--seed", "3", "--trials", "5"],
        ["count-rel", "--n", "6", "--t", "3", "--c", "2", "--seed-base", "10", "--trials", "3"],
        ["count-exact", "--n", "5", "--t", "2", "--seed", "4", "--trials", "3"],
        ["search", "--n", "6", "--t", "1", "--seed", "2", "--trials", "4"],
        ["search-known", "--n", "5", "--solutions", "3,9", "--seed", "2"],
        ["amplify", "--n", "3", "--t", "1", "--seed", "5"],
        ["derandomize", "--n", "3", "--t", "1", "--seed", "5", "--method", "augmented"],
        ["estimate", "--a", "0.3", "--P", "16", "--seed", "8", "--trials", "4"],
        ["heuristic", "--seed", "1", "--trials", "16", "--kappa", "1.8"],
    ],
)
def test_replay_is_byte_identical(capsys, argv):
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2 and out1
    for rec in records(out1):
        assert "config" in rec


def test_seed_base_matches_per_trial_seeds(capsys):
    _, out, _ = run(capsys, "count", "--n", "4", "--t", "3", "--P", "8", "--seed-base", "7", "--trials", "3")
    batch = records(out)[:3]
    for i, rec in enumerate(batch):
        _, single, _ = run(capsys, "count", "--n", "4", "--t", "3", "--P", "8", "--seed", str(7 + i))
        assert records(single)[0]["f_tilde"] == rec["f_tilde"] and rec["seed"] == 7 + i


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "count", "--n", "4", "--t", "4", "--P", "2", "--seed", "1")[0] == 2
    assert run(capsys, "count", "--n", "4", "--t", "4", "--P", "8")[0] == 2
    assert run(capsys, "search", "--n", "4", "--t", "0", "--seed", "1", "--budget", "40")[0] == 4
    assert run(capsys, "search", "--n", "15", "--t", "1", "--seed", "1")[0] == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "count", "--oracle", str(bad), "--P", "8", "--seed", "1")[0] == 2
    assert run(capsys, "count", "--P", "8", "--seed", "1")[0] == 2
    assert run(capsys, "bogus")[0] == 2


def test_oracle_file(capsys, tmp_path):
    path = tmp_path / "o.json"
    path.write_text(json.dumps({"n": 3, "solutions": [2, 5]}))
    code, out, _ = run(capsys, "search", "--oracle", str(path), "--seed", "0")
    rec = records(out)[0]
    assert code == 0 and rec["solution"] in (2, 5) and rec["N"] == 8


def test_family_file(capsys, tmp_path):
    path = tmp_path / "fam.json"
    path.write_text(json.dumps({
        "seed_space_size": 8,
        "heuristic": "constant:5",
        "members": [{"n": 3, "solutions": [5]}, {"n": 3, "solutions": [5, 6]}],
        "weights": [0.5, 0.5],
    }))
    code, out, _ = run(capsys, "heuristic", "--family", str(path), "--seed", "0", "--trials", "4", "--kappa", "2")
    recs = records(out)
    assert code == 0 and recs[-1]["within_bound"] is True
    assert [r["h"] for r in recs[:-1]] == [8, 8]


def test_pretty_and_csv_formats(capsys):
    _, out, _ = run(capsys, "count", "--n", "3", "--t", "1", "--P", "4", "--seed", "0", "--format", "pretty")
    assert out.startswith("algo=count")
    _, out, _ = run(capsys, "count", "--n", "3", "--t", "1", "--P", "4", "--seed", "0", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[0]["algo"] == "count" and len(rows) == 2


def test_verify_grid_theorem4(capsys):
    code, out, err = run(capsys, "verify-grid", "--suite", "theorem4")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == (9 + 33 + 129) * 5
    assert min(float(r["success_probability"]) for r in rows) >= 0.8105694
    assert max(float(r["error_term_mass"]) for r in rows) < 0.4
    assert "ok" in err


def test_derandomize_output(capsys):
    _, out, _ = run(capsys, "derandomize", "--n", "3", "--t", "1", "--seed", "0")
    rec = records(out)[0]
    assert rec["good"] and rec["good_mass"] == 1.0
