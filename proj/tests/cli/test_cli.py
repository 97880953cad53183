import csv
import io
import json
import os
import random
import subprocess
from pathlib import Path

import pytest

CLI = os.environ.get("RIGIDVIEW_CLI", "rigidview")
FRAMES = Path(os.environ.get("RIGIDVIEW_FRAMES", Path(__file__).resolve().parents[2] / "frames"))


def run(*args, env=None):
    return subprocess.run([CLI, *map(str, args)], capture_output=True, text=True, env=env)


def ok(*args):
    r = run(*args)
    assert r.returncode == 0, r.stderr
    return json.loads(r.stdout)


@pytest.fixture
def sim(tmp_path):
    ok("simulate", "--seed", 4, "--points", 9, "--out-dir", tmp_path)
    return tmp_path


def test_envelope_shape():
    rep = ok("dof", "--regime", "puv", "-p", 11, "-k", 2)
    assert list(rep) == ["command", "inputs", "result", "diagnostics"]
    assert rep["result"]["dof"] == 44 and rep["result"]["info"] == 44
    assert rep["result"]["balanced"] and rep["result"]["redundancy_caveat"]


def test_dof_table_reproduces_everything():
    rep = ok("dof", "--table")
    rows = rep["result"]["table"]
    assert len(rows) == 11
    assert all(r["reproduced"] for r in rows)
    assert ok("dof", "--regime", "puv", "-k", 2)["result"]["min_points"] == 11
    assert ok("dof", "--regime", "puv", "-p", 4)["result"]["min_frames"] == "never"


def test_dof_csv_table():
    r = run("dof", "--table", "--format", "csv")
    assert r.returncode == 0
    rows = [row for row in csv.reader(io.StringIO(r.stdout)) if row]
    header = next(row for row in rows if "claim" in row)
    assert "reproduced" in header


def test_simulate_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir()
    b.mkdir()
    ok("simulate", "--seed", 12, "--out-dir", a)
    env = dict(os.environ, RIGIDVIEW_SEED="12")
    r = run("simulate", "--out-dir", b, env=env)
    assert r.returncode == 0, r.stderr
    for name in ("sim_scene.json", "sim_frame1.json", "sim_frame2.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_locate_focal_on_simulated_frames(sim):
    truth = ok("simulate", "--seed", 4, "--points", 9, "--out-dir", sim)["result"]["true_f1pp"]
    rep = ok("locate-focal", sim / "sim_frame1.json", sim / "sim_frame2.json")
    got = rep["result"]["f1pp"]
    scale = max(1.0, abs(truth["x"]), abs(truth["y"]))
    assert abs(got["x"] - truth["x"]) <= 1e-6 * scale
    assert abs(got["y"] - truth["y"]) <= 1e-6 * scale
    assert got["frame"] == "original"


def test_locate_focal_accepts_csv(sim, tmp_path):
    for i in (1, 2):
        frame = json.loads((sim / f"sim_frame{i}.json").read_text())
        lines = ["label,x,y"] + [f"{p['label']},{p['x']!r},{p['y']!r}" for p in frame["points"]]
        (tmp_path / f"f{i}.csv").write_text("\n".join(lines) + "\n")
    a = ok("locate-focal", sim / "sim_frame1.json", sim / "sim_frame2.json")["result"]["f1pp"]
    b = ok("locate-focal", tmp_path / "f1.csv", tmp_path / "f2.csv")["result"]["f1pp"]
    assert a == b


def test_worked_example_scan_table():
    rep = ok("locate-focal", FRAMES / "worked_frame1.json", FRAMES / "worked_frame2.json", "--scan-table")
    table = rep["result"]["table"]
    assert [row["u"] for row in table][:2] == [1.33, 1.35]
    assert max(abs(row["value"]) for row in table) == pytest.approx(1.0)
    assert rep["result"]["u"] == pytest.approx(-0.7315973712783161, rel=1e-9)
    q = rep["diagnostics"]["quotients"]
    assert q["cp"] == pytest.approx(1.9855173191458866, rel=1e-12)


def test_predict_line_contains_observed_point(sim):
    rep = ok("predict-line", sim / "sim_frame1.json", sim / "sim_frame2.json", "-z", "Z")
    assert rep["diagnostics"]["residuals"]["observed"] < 1e-9


def test_missing_label_is_an_input_error(sim):
    r = run("predict-line", sim / "sim_frame1.json", sim / "sim_frame2.json", "-z", "Q9")
    assert r.returncode == 2
    assert "Q9" in r.stderr
    assert r.stdout == ""


def test_malformed_input_is_an_input_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"points": [{"label": "R", "x": 1}]}')
    r = run("locate-focal", bad, bad)
    assert r.returncode == 2
    assert "bad.json" in r.stderr
    assert run("locate-focal", tmp_path / "missing.json", bad).returncode == 2
    assert run("dof", "--regime", "fisheye", "-p", 3, "-k", 2).returncode == 2
    assert run("no-such-command").returncode == 2


def test_match_recovers_shuffled_identities(sim, tmp_path):
    frame2 = json.loads((sim / "sim_frame2.json").read_text())
    pts = frame2["points"][:8]
    order = list(range(8))
    random.Random(8).shuffle(order)
    renamed = [{"label": f"p{k}", "x": pts[i]["x"], "y": pts[i]["y"]} for k, i in enumerate(order)]
    truth = {pts[i]["label"]: f"p{k}" for k, i in enumerate(order)}
    (tmp_path / "s2.json").write_text(json.dumps({"frame_id": "s2", "points": renamed}))
    frame1 = json.loads((sim / "sim_frame1.json").read_text())
    frame1["points"] = frame1["points"][:8]
    (tmp_path / "s1.json").write_text(json.dumps(frame1))
    rep = ok("match", tmp_path / "s1.json", tmp_path / "s2.json", "--threads", 2)
    got = {pair["s1"]: pair["s2"] for pair in rep["result"]["assignment"]}
    assert got == truth
    assert rep["result"]["badness"] <= 1e-6
    assert rep["result"]["runner_up_badness"] >= 1e3 * rep["result"]["badness"]
    assert rep["diagnostics"]["evaluated"] <= 40320


def test_budget_exceeded_exits_4(sim):
    r = run("match", sim / "sim_frame1.json", sim / "sim_frame2.json", "--budget", 1000)
    assert r.returncode == 4
    assert "budget" in r.stderr


def test_ambiguity_report(sim):
    rep = ok("ambiguity", "--scene", sim / "sim_scene.json", "--t", 0.7)
    res = rep["diagnostics"]["residuals"]
    assert res["frame1"] <= 1e-9 and res["frame2"] <= 1e-9
    assert rep["result"]["signature_divergence"] > 1e-3
    assert run("ambiguity", "--scene", sim / "sim_scene.json", "--t", 1).returncode == 2


def test_text_format_after_subcommand():
    r = run("dof", "--regime", "known", "-p", 5, "-k", 2, "--format", "text")
    assert r.returncode == 0
    assert "result.balanced = true" in r.stdout
