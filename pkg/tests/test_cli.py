import json

import pytest

from credpool import cli

AB = {
    "agenda": {"propositions": [{"name": "X", "truth": [1, 0]}, {"name": "not-X", "truth": [0, 1]}]},
    "agents": [
        {"name": "Amira", "credences": [0.5, 0.1], "weight": 0.4},
        {"name": "Benito", "credences": [0.2, 0.6], "weight": 0.6},
    ],
}
FINE = {
    "agenda": {"propositions": [{"name": f"X{i + 1}", "truth": [int(i == t) for t in range(3)]} for i in range(3)]},
    "agents": [
        {"name": "Carmen", "credences": [0.2, 0.3, 0.5], "weight": 0.5},
        {"name": "Donal", "credences": [0.6, 0.3, 0.1], "weight": 0.5},
    ],
}


@pytest.fixture
def write(tmp_path):
    def _write(doc, name="in.json"):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)
    return _write


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_fix_sed(write, capsys):
    code, out, _ = run(capsys, "fix", write(AB), "--divergence", "sed")
    assert code == 0
    rows = json.loads(out)["agents"]
    assert rows[0]["credences"] == pytest.approx([0.7, 0.3], abs=1e-12)


def test_fix_gkl_directions_agree(write, capsys):
    path = write(AB)
    _, a, _ = run(capsys, "fix", path, "--divergence", "gkl", "--direction", "from")
    _, b, _ = run(capsys, "fix", path, "--divergence", "gkl", "--direction", "to")
    assert json.loads(a)["agents"] == json.loads(b)["agents"]


def test_malformed_json(write, capsys):
    code, out, err = run(capsys, "fix", write('{"agenda": [1,\n 2'))
    assert code == 1 and out == ""
    assert ":2:" in err


def test_field_diagnostics(write, capsys):
    bad = json.loads(json.dumps(AB))
    bad["agents"][1]["credences"][0] = "20%"
    code, out, err = run(capsys, "fix", write(bad))
    assert code == 1 and out == "" and "agents[1].credences[0]" in err and "percentages" in err
    bad["agents"][1]["credences"][0] = 20
    code, _, err = run(capsys, "fix", write(bad))
    assert code == 1 and "outside [0, 1]" in err
    bad = json.loads(json.dumps(AB))
    bad["agenda"]["propositions"][0]["truth"] = [1, 2]
    code, _, err = run(capsys, "pool", write(bad))
    assert code == 1 and "agenda.propositions[0].truth[1]" in err


def test_pool_lp_with_weights(write, capsys):
    code, out, _ = run(capsys, "pool", write(AB), "--method", "lp", "--weights", "0.4,0.6")
    assert code == 0
    assert json.loads(out)["credences"] == pytest.approx([0.32, 0.40], abs=1e-12)


def test_wcap_gkl_to(write, capsys):
    code, out, _ = run(capsys, "wcap", write(AB), "--divergence", "gkl", "--direction", "to", "--weights", "0.4,0.6")
    assert code == 0
    assert json.loads(out)["credences"] == pytest.approx([0.4444, 0.5556], abs=1e-4)


def test_pool_gp_fine_partition(write, capsys):
    code, out, _ = run(capsys, "pool", write(FINE), "--method", "gp")
    assert code == 0
    assert json.loads(out)["credences"] == pytest.approx([0.398, 0.345, 0.257], abs=1e-3)


def test_general_normalize_rejected(write, capsys):
    code, out, err = run(capsys, "pool", write(FINE), "--method", "gp", "--general-normalize")
    assert code == 1 and out == "" and "cannot be normalized" in err


def test_weights_normalized_with_warning(write, capsys):
    doc = json.loads(json.dumps(AB))
    doc["agents"][0]["weight"], doc["agents"][1]["weight"] = 2, 3
    code, out, err = run(capsys, "pool", write(doc))
    assert code == 0 and "normalizing" in err
    assert json.loads(out)["credences"] == pytest.approx([0.32, 0.40], abs=1e-12)


def test_csv(write, capsys):
    code, out, _ = run(capsys, "fix", write(AB), "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "agent,X,not-X"
    assert lines[1].startswith("Amira,0.69999999999999996,")


def test_byte_identical(write, capsys):
    path = write(AB)
    outs = {run(capsys, "pool", path, "--method", "agg", "--divergence", "power:3")[1] for _ in range(3)}
    assert len(outs) == 1


def test_round_trip(write, capsys):
    for seed in range(5):
        _, first, _ = run(capsys, "sample", "--seed", str(seed), "--m", "3", "--n", "3")
        profile, warn = cli.parse_profile(first)
        assert warn == []
        assert cli.dumps(cli.profile_document(profile)) == first
        from credpool.theoremlab import random_profile
        assert profile == random_profile(seed, 3, 3)


def test_fmt():
    assert cli.fmt(0.1) == "0.10000000000000001"
    assert float(cli.fmt(1 / 3)) == 1 / 3
    assert cli.fmt(1.0) == "1.0" and cli.fmt(0.0) == "0.0"


def test_certify(tmp_path, capsys):
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "certify", "--claims", "prop2ii,sec9", "--report", str(report))
    assert code == 0 and "PASS prop2ii" in out
    doc = json.loads(report.read_text())
    assert doc["claims"][1]["detail"]["GP1"] == pytest.approx([0.398, 0.345, 0.257, 0.743], abs=1e-3)
    code, _, _ = run(capsys, "certify", "--seed", "7", "--claims", "thm8", "--report", str(report))
    assert code == 0


def test_certify_failure_exit_code(tmp_path, capsys, monkeypatch):
    from credpool import theoremlab
    bad = theoremlab.Claim("prop4", "forced failure", "holds", 0.0, lambda seed: (1.0, 1, 0, {}))
    monkeypatch.setattr(theoremlab, "CLAIMS", [bad])
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "certify", "--report", str(report))
    assert code == 3 and "FAIL prop4" in out and report.exists()


def test_unknown_claim(tmp_path, capsys):
    code, _, err = run(capsys, "certify", "--claims", "bogus", "--report", str(tmp_path / "r.json"))
    assert code == 1


def test_solver_error_exit_code(write, capsys, monkeypatch):
    from credpool.errors import SolverError

    def boom(*a, **k):
        raise SolverError("no bracket")
    monkeypatch.setattr(cli, "wcap_d1", boom)
    code, out, err = run(capsys, "wcap", write(AB), "--divergence", "power:3")
    assert code == 2 and out == "" and "no bracket" in err
