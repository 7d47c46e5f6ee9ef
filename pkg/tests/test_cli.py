import csv
import json

import pytest

from classcoupler.cli import main
from classcoupler.driver import run_draws
from classcoupler.presets import PRESETS, ConfigError, build_model


def run_cli(tmp_path, *args, name="out.json"):
    out = tmp_path / name
    code = main([*args, "--out", str(out)])
    return code, out


def test_sim2_summary(tmp_path):
    code, out = run_cli(tmp_path, "run", "--preset", "sim2", "--draws", "300", "--seed", "7")
    assert code == 0
    s = json.loads(out.read_text())
    assert s["n_draws"] == 300 and s["horizon_failures"] == 0
    assert s["ci"][0] <= s["atom_prob"] <= s["ci"][1]
    assert s["bct"]["min"] >= 3
    assert "diagnostics" not in s


def test_byte_identical_reruns(tmp_path):
    args = ["run", "--preset", "sim2", "--draws", "200", "--seed", "11"]
    _, a = run_cli(tmp_path, *args, name="a.json")
    _, b = run_cli(tmp_path, *args, name="b.json")
    assert a.read_bytes() == b.read_bytes()


def test_timings_are_separate(tmp_path):
    code, out = run_cli(tmp_path, "run", "--preset", "sim2", "--draws", "50", "--timings")
    s = json.loads(out.read_text())
    assert set(s["diagnostics"]) == {"elapsed_seconds", "workers"}


def test_worker_invariance():
    model = build_model(PRESETS["sim2"])
    one = run_draws(model, 120, seed=3, workers=1)
    many = run_draws(model, 120, seed=3, workers=8, chunk_size=7)
    assert [(o.index, o.draw, o.bct) for o in one.outcomes] == [(o.index, o.draw, o.bct) for o in many.outcomes]


def test_csv_rows(tmp_path):
    code, out = run_cli(tmp_path, "run", "--preset", "sim1", "--draws", "20", "--format", "csv", name="d.csv")
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["draw_index", "atom", "mu", "v", "bct", "mh_steps"]
    assert len(rows) == 21
    for r in rows[1:]:
        assert r[1] in ("0", "1") and float(r[3]) > 0
        if r[1] == "1":
            assert float(r[2]) == 0.0


def test_histogram_export(tmp_path):
    hist = tmp_path / "h.csv"
    code, _ = run_cli(tmp_path, "run", "--preset", "sim2", "--draws", "100", "--bins", "5",
                      "--hist-out", str(hist))
    rows = list(csv.reader(hist.open()))
    assert rows[0] == ["quantity", "bin_left", "bin_right", "count"]
    assert sum(int(r[3]) for r in rows[1:] if r[0] == "bct") == 100


def test_config_file(tmp_path):
    cfg = {"model": "single_mean", "data": [0.2, -0.4, 1.1], "atom_weight": 0.5,
           "slab_variance": 4.0, "variance": {"known": 1.0}}
    path = tmp_path / "m.json"
    path.write_text(json.dumps(cfg))
    code, out = run_cli(tmp_path, "run", "--config", str(path), "--draws", "100")
    assert code == 0
    assert json.loads(out.read_text())["n_draws"] == 100


@pytest.mark.parametrize("case", ["two-sample-case2"])
def test_two_sample_preset(tmp_path, case):
    code, out = run_cli(tmp_path, "run", "--preset", case, "--draws", "30", "--format", "csv", name="t.csv")
    assert code == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["draw_index", "atom", "mu1", "mu2", "v", "bct", "mh_steps"]
    for r in rows[1:]:
        assert (r[2] == r[3]) == (r[1] == "1")


def test_config_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["run", "--config", str(bad), "--draws", "1"]) == 2
    missing = tmp_path / "missing.json"
    missing.write_text(json.dumps({"model": "single_mean", "data": [1.0]}))
    assert main(["run", "--config", str(missing), "--draws", "1"]) == 2
    assert main(["run", "--config", str(tmp_path / "nope.json"), "--draws", "1"]) == 2
    assert "error:" in capsys.readouterr().err
    with pytest.raises(ConfigError):
        build_model({"model": "unknown", "atom_weight": 0.5, "variance": {}})


def test_invalid_counts():
    assert main(["run", "--preset", "sim2", "--draws", "0"]) == 2
    assert main(["run", "--preset", "sim2", "--workers", "0"]) == 2


def test_horizon_failures_reported(tmp_path):
    code, out = run_cli(tmp_path, "run", "--preset", "sim1", "--draws", "20", "--max-horizon", "10")
    assert code == 3
    assert json.loads(out.read_text())["horizon_failures"] > 0


def test_imh_demo(tmp_path):
    code, out = run_cli(tmp_path, "imh-demo", "--weights", "1,2,3", "--draws", "3000", "--seed", "1")
    assert code == 0
    s = json.loads(out.read_text())
    assert s["exact"] == pytest.approx([1 / 6, 2 / 6, 3 / 6])
    assert s["tv_distance"] < 0.05


def test_verbose_flag_positions():
    assert main(["-v", "run", "--preset", "sim2", "--draws", "2", "--out", "/dev/null"]) == 0
    assert main(["run", "--preset", "sim2", "--draws", "2", "-v", "--out", "/dev/null"]) == 0
