import math
import random

import pytest

import rigidview as rv


def test_cross_ratio_swap_reciprocal():
    a, b, c, d = (0.0, 0.0), (1.0, 0.5), (3.0, 1.5), (7.0, 3.5)
    assert rv.cross_ratio(a, b, c, d) * rv.cross_ratio(a, b, d, c) == pytest.approx(1.0, abs=1e-12)


def test_locate_focal_matches_truth():
    sim = rv.simulate(points=8, seed=11)
    basis = ["R", "P", "Q", "A", "C", "E", "G"]
    f1 = sim["frame1"]
    f2 = sim["frame2"]
    assert [label for label, _ in f1][:7] == basis
    sol = rv.locate_focal(f1, f2)
    tx, ty = sim["true_f1pp"]
    scale = max(abs(x) + abs(y) for _, (x, y) in f2)
    assert math.hypot(sol["f1pp"][0] - tx, sol["f1pp"][1] - ty) <= 1e-6 * max(1.0, scale, math.hypot(tx, ty))


def test_predicted_line_passes_through_eighth_point():
    sim = rv.simulate(points=8, seed=5)
    f1, f2 = sim["frame1"], sim["frame2"]
    label, (x, y) = f2[7]
    a, b, c = rv.predict_line(f1, f2, label)
    assert abs(a * x + b * y + c) / math.hypot(a, b) < 1e-6


def test_match_recovers_shuffle():
    sim = rv.simulate(points=8, seed=3)
    s1 = [xy for _, xy in sim["frame1"]]
    s2 = [xy for _, xy in sim["frame2"]]
    perm = list(range(8))
    random.Random(3).shuffle(perm)
    shuffled = [s2[i] for i in perm]
    res = rv.match(s1, shuffled)
    assert [perm[j] for j in res["assignment"]] == list(range(8))


def test_dof_ledger():
    v = rv.dof("puv", 11, 2)
    assert v["balanced"] and v["dof"] == 44 and v["info"] == 44
    assert rv.min_points("puv", 2) == 11
    assert rv.min_frames("puv", 4) is None


def test_missing_label_raises():
    sim = rv.simulate(points=8, seed=2)
    with pytest.raises(rv.RigidviewError, match="Z9"):
        rv.predict_line(sim["frame1"], sim["frame2"], "Z9")
