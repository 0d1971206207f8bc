"""Command-line surface: record shapes, exit codes, caps, configuration,
and byte-level reproducibility."""

import json

import pytest

from drinfeld.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def records(out):
    return [json.loads(line) for line in out.splitlines() if line]


def test_points_enumeration(capsys):
    code, out = run(capsys, "points", "--d", "1", "--p", "3", "--n", "2")
    assert code == 0
    recs = records(out)
    assert len(recs) == 12
    assert recs[0] == {"p": 3, "d": 1, "level": 2, "rep": [1, 0]}


def test_invalid_prime_is_usage_error(capsys):
    code, _ = run(capsys, "points", "--d", "1", "--p", "4", "--n", "2")
    assert code == 2
    code, _ = run(capsys, "tau", "--p", "6", "--coords", "[1, [0,1]]")
    assert code == 2


def test_unknown_command_exits_2(capsys):
    with pytest.raises(SystemExit) as err:
        main(["frobnicate"])
    assert err.value.code == 2


def test_missing_argument_is_usage_error(capsys):
    code, _ = run(capsys, "points", "--d", "1", "--p", "3")
    assert code == 2


def test_count_cap_fails_fast(capsys, monkeypatch):
    monkeypatch.setenv("DRINFELD_MAX_COUNT", "5")
    code, _ = run(capsys, "points", "--d", "1", "--p", "3", "--n", "2")
    assert code == 2
    monkeypatch.setenv("DRINFELD_MAX_COUNT", "not-a-number")
    code, _ = run(capsys, "points", "--d", "1", "--p", "3", "--n", "2")
    assert code == 2


def test_tau_report_shape(capsys):
    code, out = run(
        capsys, "tau", "--p", "2", "--e", "2", "--N", "40",
        "--coords", "[1, [0,1]]",
    )
    assert code == 0
    (rec,) = records(out)
    assert rec["weights"] == ["1/2", "1/2"]
    assert rec["certified_level"] == 1
    assert [lat["hnf"] for lat in rec["simplex"]["chain"]] == [
        [[1, 0], [0, 1]], [[2, 0], [0, 1]]
    ]
    assert rec["point"]["field"] == {"p": 2, "e": 2, "f": 1, "N": 40}


def test_cover_membership(capsys):
    code, out = run(
        capsys, "cover", "--p", "2", "--e", "2", "--N", "40",
        "--coords", "[1, [0,1]]", "--n", "1",
    )
    assert code == 0
    (rec,) = records(out)
    assert rec["member_open"] and rec["member_closed"]


def test_building_ball_and_dot(capsys, tmp_path):
    dot = tmp_path / "ball.dot"
    code, out = run(
        capsys, "building", "ball", "--p", "2", "--d", "1",
        "--radius", "1", "--dot", str(dot),
    )
    assert code == 0
    assert len(records(out)) == 4
    text = dot.read_text()
    assert text.startswith("graph ball {") and text.count("--") == 3


def test_building_neighbors_and_type(capsys):
    code, out = run(
        capsys, "building", "neighbors", "--p", "2",
        "--vertex", "[[1,0],[0,1]]",
    )
    assert code == 0
    assert len(records(out)) == 3
    code, out = run(
        capsys, "building", "type", "--p", "2",
        "--chain", "[[[1,0],[0,1]],[[2,0],[0,1]]]",
    )
    assert code == 0
    (rec,) = records(out)
    assert rec["type_vector"] == [1, 1]


def test_dist_round_trip(capsys, tmp_path):
    code, out = run(
        capsys, "dist", "random", "--p", "2", "--d", "1", "--n", "2",
        "--seed", "5",
    )
    assert code == 0
    (rec,) = records(out)
    path = tmp_path / "mu.json"
    path.write_text(json.dumps(rec))
    code, out = run(
        capsys, "dist", "push", "--p", "2", "--d", "1",
        "--in", str(path), "--to", "1",
    )
    assert code == 0
    (pushed,) = records(out)
    assert pushed["level"] == 1
    assert sum(e["coeff"] for e in pushed["entries"]) == 0
    code, out = run(
        capsys, "dist", "check", "--p", "2", "--d", "1", "--in", str(path)
    )
    assert code == 0
    (checked,) = records(out)
    assert checked["mass_zero"] is True


def test_dist_check_rejects_nonzero_mass(capsys):
    bad = json.dumps({
        "level": 1,
        "entries": [{"point": {"level": 1, "rep": [1, 0]}, "coeff": 2}],
    })
    code, out = run(capsys, "dist", "check", "--p", "2", "--d", "1",
                    "--dist", bad)
    assert code == 1
    (rec,) = records(out)
    assert rec["mass_zero"] is False


def test_lambda_with_oracle(capsys):
    code, out = run(
        capsys, "lambda", "--p", "2",
        "--edge", "[[[1,0],[0,1]],[[2,0],[0,1]]]",
        "--pair", "[[1,0],[0,1]]", "--oracle",
    )
    assert code == 0
    (rec,) = records(out)
    assert rec["value"] == 1 and rec["oracle_value"] == 1 and rec["agrees"]


def test_sweep_lambda_summary(capsys):
    code, out = run(capsys, "sweep-lambda", "--p", "2", "--d", "1",
                    "--radius", "1")
    assert code == 0
    recs = records(out)
    assert recs[-1]["edges"] == 6 and recs[-1]["disagreements"] == 0


def test_alpha_residue_agreement(capsys):
    dist = json.dumps({
        "level": 1,
        "entries": [
            {"point": {"level": 1, "rep": [1, 0]}, "coeff": 1},
            {"point": {"level": 1, "rep": [0, 1]}, "coeff": -1},
        ],
    })
    code, out = run(
        capsys, "alpha", "residue", "--p", "2", "--d", "1", "--dist", dist,
        "--edge", "[[[1,0],[0,1]],[[2,0],[0,1]]]",
    )
    assert code == 0
    (rec,) = records(out)
    assert rec["agree"] and rec["dlog_residue"] == rec["pairing"]


def test_alpha_converge_records(capsys):
    code, out = run(capsys, "alpha", "converge", "--p", "2",
                    "--families", "2")
    assert code == 0
    recs = records(out)
    assert len(recs) == 6
    assert all(r["pass"] for r in recs)


def test_alpha_equivariance_records(capsys):
    code, out = run(capsys, "alpha", "equivariance", "--p", "3",
                    "--translates", "2")
    assert code == 0
    recs = records(out)
    assert len(recs) == 2 and all(r["pass"] for r in recs)


def test_reproducible_bytes(capsys):
    argv = ("dist", "random", "--p", "3", "--d", "1", "--n", "2",
            "--seed", "9")
    _, first = run(capsys, *argv)
    _, second = run(capsys, *argv)
    assert first == second


def test_config_file_supplies_defaults(capsys, tmp_path):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[drinfeld]\np = 3\nd = 1\nn = 2\n")
    code, out = run(capsys, "points", "--config", str(cfg))
    assert code == 0
    assert len(records(out)) == 12
    # explicit flags win over the file
    code, out = run(capsys, "points", "--config", str(cfg), "--n", "1")
    assert code == 0
    assert len(records(out)) == 4


def test_out_file_sink(capsys, tmp_path):
    path = tmp_path / "pts.jsonl"
    code, out = run(capsys, "points", "--d", "1", "--p", "2", "--n", "1",
                    "--out", str(path))
    assert code == 0 and out == ""
    lines = path.read_text().splitlines()
    assert len(lines) == 3
