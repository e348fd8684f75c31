import json
import subprocess
import sys

import numpy as np
import pytest

from seqdisc import io
from seqdisc.cli import main
from seqdisc.linalg import haar_unitary

Z = np.diag([1, -1])
X = np.array([[0, 1], [1, 0]])


@pytest.fixture
def mats(tmp_path):
    def write(name, m):
        path = tmp_path / name
        io.save_matrix(m, path)
        return path

    return write


def test_matrix_json_round_trip(rng):
    m = haar_unitary(4, rng).matrix
    obj = json.loads(json.dumps(io.matrix_to_json(m)))
    assert np.array_equal(io.matrix_from_json(obj), m)


@pytest.mark.parametrize("bad", [{}, {"d": 2, "entries": [[[1, 0]]]}, {"d": 1, "entries": [[[1]]]},
                                 {"d": 1, "entries": [[["x", 0]]]}, {"d": 0, "entries": []}])
def test_matrix_json_rejects(bad):
    with pytest.raises(io.ParseError):
        io.matrix_from_json(bad)


def test_theta_command(mats, capsys):
    assert main(["theta", str(mats("u.json", np.diag([1j, 1])))]) == 0
    assert "theta = 1.570796327" in capsys.readouterr().out
    assert main(["theta", str(mats("i.json", np.eye(3)))]) == 0
    assert "theta = 0.000000000" in capsys.readouterr().out


def test_theta_errors(mats, tmp_path, capsys):
    assert main(["theta", str(mats("bad.json", 2 * np.eye(2)))]) == 3
    assert "defect" in capsys.readouterr().err
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    assert main(["theta", str(garbage)]) == 2
    assert main(["theta", str(tmp_path / "missing.json")]) == 2


def test_plan_command(mats, capsys, tmp_path):
    u = mats("u.json", np.diag([np.exp(1j * np.pi / 4), 1]))
    v = mats("v.json", np.eye(2))
    assert main(["plan", str(u), str(v)]) == 0
    assert "N = 4" in capsys.readouterr().out
    out = tmp_path / "plan.json"
    assert main(["plan", str(u), str(v), "--copies", "2", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "parts = (2, 2)" in text and "steps = 2" in text
    assert json.loads(out.read_text()) == {"total_runs": 4, "copies": 2, "parts": [2, 2], "length": 2, "valid": True}
    w = mats("w.json", np.exp(0.3j) * np.eye(2))
    assert main(["plan", str(v), str(w)]) == 4
    assert main(["plan", str(u), str(v), "--copies", "9"]) == 2


def test_synthesize_command(mats, tmp_path, capsys):
    out = tmp_path / "p.json"
    assert main(["synthesize", str(mats("z.json", Z)), str(mats("i.json", np.eye(2))), str(out)]) == 0
    obj = json.loads(out.read_text())
    assert obj["num_runs"] == 1 and obj["orth_defect"] <= 1e-12 and obj["interleavers"] == []
    assert set(obj) == {"d", "num_runs", "input_state", "interleavers", "branch_u_output", "branch_v_output",
                        "candidates", "orth_defect", "bumped"}

    assert main(["synthesize", str(mats("s.json", np.diag([1j, 1]))), str(mats("i.json", np.eye(2))), str(out)]) == 0
    obj = json.loads(out.read_text())
    assert obj["num_runs"] == 2 and obj["orth_defect"] <= 1e-12

    rng = np.random.default_rng(3)
    a, b = mats("a.json", haar_unitary(4, rng).matrix), mats("b.json", haar_unitary(4, rng).matrix)
    assert main(["synthesize", str(a), str(b), str(out)]) == 0
    assert io.protocol_from_json(json.loads(out.read_text())).orth_defect <= 1e-7

    assert main(["synthesize", str(mats("i.json", np.eye(2))), str(mats("j.json", -np.eye(2))), str(out)]) == 4


def test_protocol_json_round_trip(rng, tmp_path):
    from seqdisc.synthesis import synthesize_protocol

    p = synthesize_protocol(haar_unitary(3, rng), haar_unitary(3, rng))
    obj = json.loads(io.write_json(io.protocol_to_json(p)))
    q = io.protocol_from_json(obj)
    assert np.array_equal(q.input_state, p.input_state)
    assert np.array_equal(q.branch_u_output, p.branch_u_output)
    assert all(np.array_equal(a.matrix, b.matrix) for a, b in zip(p.interleavers, q.interleavers))
    assert io.protocol_to_json(q) == io.protocol_to_json(p)


def test_simulate_command(mats, tmp_path, capsys):
    rng = np.random.default_rng(11)
    u, v = haar_unitary(3, rng).matrix, haar_unitary(3, rng).matrix
    uf, vf = mats("u.json", u), mats("v.json", v)
    proto = tmp_path / "p.json"
    assert main(["synthesize", str(uf), str(vf), str(proto)]) == 0
    r1, r2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert main(["simulate", str(proto), str(uf), "--shots", "100", "--seed", "5", "--out", str(r1)]) == 0
    rep = json.loads(r1.read_text())
    assert dict(zip(rep["labels"], rep["counts"]))["U"] == 100
    assert main(["simulate", str(proto), str(vf), "--shots", "100", "--out", str(r2)]) == 0
    assert dict(zip(json.loads(r2.read_text())["labels"], json.loads(r2.read_text())["counts"]))["V"] == 100
    t = mats("t.json", haar_unitary(3, rng).matrix)
    assert main(["simulate", str(proto), str(t), "--shots", "500", "--seed", "1", "--out", str(r1)]) == 0
    assert main(["simulate", str(proto), str(t), "--shots", "500", "--seed", "1", "--out", str(r2)]) == 0
    assert r1.read_bytes() == r2.read_bytes()
    assert main(["simulate", str(proto), str(mats("q.json", np.eye(2)))]) == 6
    capsys.readouterr()


def test_verify_commands(tmp_path, capsys):
    assert main(["verify", "subadd", "--trials", "1000", "--d", "3", "--seed", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["pass"] is True
    assert main(["verify", "criterion", "--trials", "1000"]) == 0
    assert json.loads(capsys.readouterr().out)["pass"] is True
    out = tmp_path / "opt.json"
    assert main(["verify", "optimality", "--restarts", "5", "--iterations", "10", "--samples", "2000",
                 "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["pass"] and rep["reports"][0]["best_chain_theta"] < np.pi


def test_verify_optimality_with_files(mats, capsys):
    u = mats("u.json", np.diag([np.exp(1j * np.pi / 4), 1]))
    v = mats("v.json", np.eye(2))
    assert main(["verify", "optimality", "--u", str(u), "--v", str(v), "--restarts", "50",
                 "--iterations", "20", "--samples", "2000"]) == 0
    rep = json.loads(capsys.readouterr().out)["reports"][0]
    assert rep["k"] == 3 and rep["best_chain_theta"] <= 3 * np.pi / 4 + 1e-6


def test_verify_violation_exit_code(mats, tmp_path, monkeypatch, capsys):
    import seqdisc.cli as cli

    def broken(d, trials, seed):
        u = haar_unitary(2, np.random.default_rng(0))
        return 1, 0.5, (u, u, 1.0, 0.5)

    monkeypatch.setattr(cli, "subadditivity_sweep", broken)
    dump = tmp_path / "cx.json"
    assert main(["verify", "subadd", "--counterexample", str(dump)]) == 7
    assert json.loads(dump.read_text())["lhs"] == 1.0
    capsys.readouterr()


def test_pauli_command(tmp_path, capsys):
    assert main(["pauli", "3"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["identified"] == 9 and rep["runs"] == 2 and rep["one_run_impossible"]
    assert main(["pauli", "2", "--truth", "1", "1"]) == 0
    assert "readout = (1, 1)" in capsys.readouterr().out
    assert main(["pauli", "2", "--truth", "2", "0"]) == 2


def test_eliminate_command(tmp_path, capsys):
    d = tmp_path / "cands"
    d.mkdir()
    io.save_matrix(Z, d / "a_z.json")
    io.save_matrix(np.eye(2), d / "b_i.json")
    assert main(["eliminate", str(d), "0"]) == 0
    out = capsys.readouterr().out
    assert "survivor = 0" in out and "total_runs = 1" in out
    io.save_matrix(X, d / "c_x.json")
    t = tmp_path / "t.json"
    assert main(["eliminate", str(d), "2", "--out", str(t)]) == 0
    rep = json.loads(t.read_text())
    assert rep["survivor"] == 2 and rep["total_runs"] <= 2
    io.save_matrix(-Z, d / "d_negz.json")
    assert main(["eliminate", str(d), "0"]) == 4
    capsys.readouterr()


def test_eliminate_random_candidates(tmp_path, capsys):
    rng = np.random.default_rng(8)
    d = tmp_path / "cands"
    d.mkdir()
    for i in range(5):
        io.save_matrix(haar_unitary(2, rng).matrix, d / f"c{i}.json")
    for seed in range(5):
        truth = seed % 5
        t = tmp_path / f"t{seed}.json"
        assert main(["eliminate", str(d), str(truth), "--seed", str(seed), "--out", str(t)]) == 0
        assert json.loads(t.read_text())["survivor"] == truth
    capsys.readouterr()


def test_pipeline_is_byte_reproducible(tmp_path):
    rng = np.random.default_rng(2)
    u, v, t = (tmp_path / n for n in ("u.json", "v.json", "t.json"))
    for path in (u, v, t):
        io.save_matrix(haar_unitary(3, rng).matrix, path)

    def pipeline(tag):
        proto, rep, ver = (tmp_path / f"{tag}_{n}.json" for n in ("p", "r", "v"))
        assert main(["synthesize", str(u), str(v), str(proto)]) == 0
        assert main(["simulate", str(proto), str(t), "--shots", "200", "--seed", "4", "--out", str(rep)]) == 0
        assert main(["verify", "criterion", "--trials", "50", "--seed", "4", "--out", str(ver)]) == 0
        return [p.read_bytes() for p in (proto, rep, ver)]

    assert pipeline("a") == pipeline("b")


def test_console_entry_point(tmp_path):
    path = tmp_path / "z.json"
    io.save_matrix(Z, path)
    out = subprocess.run([sys.executable, "-m", "seqdisc.cli", "theta", str(path)], capture_output=True, text=True)
    assert out.returncode == 0 and "theta = 3.141592654" in out.stdout
