import csv
import json
import math

import numpy as np
import pytest

from slimeca import cli
from slimeca.errors import ConfigurationError
from slimeca.frames import read_pgm, to_gray
from slimeca.geometry import serialize_maze, bundled_gate

SHORT = "max_steps = 37\ntrials = 2\nfood = q\n"


@pytest.fixture
def cfg_file(tmp_path):
    p = tmp_path / "short.cfg"
    p.write_text(SHORT)
    return str(p)


def run(argv):
    return cli.main(argv)


def read_metrics(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.mark.parametrize("stride", [1, 5, 10, 37, 100])
def test_frame_and_metrics_counts(tmp_path, cfg_file, stride):
    out = tmp_path / "o"
    assert run(["run", "--config", cfg_file, "--inputs", "01", "--out", str(out),
                "--stride", str(stride)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    steps = summary["steps"]
    frames = sorted((out / "frames").glob("mass_*.pgm"))
    assert len(frames) == math.ceil(steps / stride) + 1 == summary["frames"]
    rows = read_metrics(out / "metrics.csv")
    assert rows[0] == list(cli.METRICS_HEADER)
    idx = [int(r[0]) for r in rows[1:]]
    assert idx == list(range(1, steps + 1))


def test_summary_contents(tmp_path, cfg_file):
    out = tmp_path / "o"
    run(["run", "--gate", "P2", "--config", cfg_file, "--inputs", "1,1", "--out", str(out)])
    s = json.loads((out / "summary.json").read_text())
    assert s["geometry"] == "P2" and s["inputs"] == [1, 1]
    assert s["parameters"]["max_steps"] == 37 and s["parameters"]["food"] == "q"
    assert isinstance(s["seed"], int)


def test_no_inputs_black_frames(tmp_path, cfg_file):
    out = tmp_path / "o"
    assert run(["run", "--config", cfg_file, "--inputs", "00", "--out", str(out),
                "--smell-frames"]) == 0
    s = json.loads((out / "summary.json").read_text())
    assert s["outputs"] == [0, 0]
    for f in (out / "frames").glob("mass_*.pgm"):
        assert not read_pgm(f).any()
    smell = sorted((out / "frames").glob("smell_*.pgm"))
    assert smell and read_pgm(smell[0]).max() == 255


def test_identical_manifests_byte_identical(tmp_path, cfg_file):
    outs = []
    for n in range(2):
        out = tmp_path / f"o{n}"
        run(["run", "--config", cfg_file, "--inputs", "11", "--out", str(out), "--stride", "3"])
        outs.append(out)
    names = sorted(p.relative_to(outs[0]) for p in outs[0].rglob("*") if p.is_file())
    assert names == sorted(p.relative_to(outs[1]) for p in outs[1].rglob("*") if p.is_file())
    for name in names:
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


def test_unreadable_config_exit_2(tmp_path, capsys):
    assert run(["run", "--config", str(tmp_path / "missing.cfg"), "--inputs", "01",
                "--out", str(tmp_path / "o")]) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("reward_smell = 1.5\n")
    assert run(["validate", "--config", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err


def test_bad_maze_exit_2(tmp_path):
    m = tmp_path / "m.maze"
    m.write_text("###\n#X#\n###\n")
    assert run(["validate", "--maze", str(m)]) == 2


def test_contract_violation_exit_3(tmp_path, cfg_file, monkeypatch):
    real = cli.simulate

    def leaky(*a, **kw):
        for step, grid, seed in real(*a, **kw):
            if step == 5:
                grid.mass[grid.mask] *= 0.5
            yield step, grid, seed

    monkeypatch.setattr(cli, "simulate", leaky)
    assert run(["run", "--config", cfg_file, "--inputs", "01",
                "--out", str(tmp_path / "o")]) == 3


def test_validate_and_wave(tmp_path, capsys):
    maze = tmp_path / "p2.maze"
    maze.write_text(serialize_maze(bundled_gate("P2")))
    assert run(["validate", "--maze", str(maze), "--scenario", "p2_y"]) == 0
    assert "ok:" in capsys.readouterr().out
    out = tmp_path / "w.pgm"
    assert run(["wave", "--gate", "P1", "--origin", "x", "--out", str(out)]) == 0
    px = read_pgm(out)
    g = bundled_gate("P1")
    assert px.shape == g.shape and px[g.input_x] > 0 and not px[~g.mask].any()


def test_table_json(tmp_path, capsys):
    cfgp = tmp_path / "t.cfg"
    cfgp.write_text("max_steps = 20\ntrials = 2\n")
    out = tmp_path / "t.json"
    assert run(["table", "--config", str(cfgp), "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert [r["inputs"] for r in data["rows"]] == [[0, 0], [0, 1], [1, 0], [1, 1]]
    assert all(sum(r["counts"].values()) == r["trials"] == 2 for r in data["rows"])
    assert json.loads(capsys.readouterr().out) == data


@pytest.mark.parametrize("text,want", [
    ("01", (False, True)), ("1,0", (True, False)), ("xy", (True, True)), ("none", (False, False)),
])
def test_parse_inputs(text, want):
    assert cli.parse_inputs(text) == want


def test_stride_must_be_positive():
    with pytest.raises(ConfigurationError):
        cli.RunManifest(config=None, geometry="P2", inputs=(0, 1), out_dir=".", stride=0)


def test_gray_scaling():
    f = np.array([[0.0, 1.0], [2.0, 4.0]])
    px, scale = to_gray(f, np.array([[True, True], [True, False]]))
    assert scale == 255 / 2 and px.tolist() == [[0, 128], [255, 0]]
