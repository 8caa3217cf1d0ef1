import csv
import math
import subprocess
import sys

import numpy as np
import pytest

from fracops.cli import COMPARE_NORMS, FIGURE_MANIFEST, RunConfig, main, run_figures
from fracops.kernels import OperatorSpec
from fracops.quadrature import TimeGrid, apply_operator, preset_function


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def test_eval_writes_csv(tmp_path):
    out = tmp_path / "ds.csv"
    assert main(["eval", "--op", "ds", "--norm", str(1 / 3), "--preset", "cube", "--tmax", "2", "--dt", "0.01", "--out", str(out)]) == 0
    text = out.read_text()
    assert text.splitlines()[:2] == ["t,value", "0,0"]
    assert text.endswith("\n") and "\r" not in text
    header, data = read_csv(out)
    assert data.shape == (201, 2)


def test_eval_round_trip_is_exact(tmp_path):
    out = tmp_path / "sin.csv"
    main(["eval", "--op", "ds", "--norm", str(1 / 3), "--preset", "sin", "--out", str(out)])
    _, data = read_csv(out)
    grid = TimeGrid.from_span(10.0, 1e-3)
    values = apply_operator(OperatorSpec("DS", 2 / 3, 1 / 3), preset_function("sin"), grid).values
    assert np.array_equal(data[:, 1], values)
    assert np.array_equal(data[:, 0], grid.nodes)
    i = grid.index_of(math.pi)
    t = grid.nodes[i]
    assert data[i, 1] == pytest.approx(2 / 3 * (math.cos(t) - math.cos(2 * t)), abs=1e-6)


def test_eval_to_stdout(capsys):
    assert main(["eval", "--op", "c", "--alpha", "0.5", "--tmax", "0.05", "--dt", "0.01"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t,value" and len(lines) == 7


def test_default_normalization_is_one_minus_alpha():
    cfg = RunConfig(ops=("DS",))
    assert cfg.normalization_for(cfg.ops[0]) == pytest.approx(1 / 3)


@pytest.mark.parametrize(
    "argv",
    [
        ["eval", "--alpha", "1.5"],
        ["eval", "--op", "ds", "--alpha", "1.0"],
        ["eval", "--dt", "0"],
        ["eval", "--norm", "-1"],
        ["eval", "--out", "/nonexistent-dir/x.csv", "--tmax", "0.1", "--dt", "0.01"],
        ["laplace-check", "--preset", "exp", "--s", "1"],
        ["laplace-check", "--preset", "sin", "--s", "1", "--tmax", "10"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--preset", "tan"])
    assert exc.value.code == 2


def test_compare_uses_panel_norms(tmp_path):
    out = tmp_path / "cmp.csv"
    assert main(["compare", "--preset", "sin", "--tmax", "3", "--dt", "0.01", "--out", str(out)]) == 0
    header, data = read_csv(out)
    assert header == ["t", "ds", "dc", "caputo"]
    assert np.all(data[0] == 0)
    grid = TimeGrid.from_span(3.0, 0.01)
    ds = apply_operator(OperatorSpec("DS", 2 / 3, 0.3), preset_function("sin"), grid).values
    dc = apply_operator(OperatorSpec("DC", 2 / 3, 0.5), preset_function("sin"), grid).values
    assert np.array_equal(data[:, 1], ds) and np.array_equal(data[:, 2], dc)
    assert COMPARE_NORMS["cube"] == (0.9, 4.0)


def test_laplace_check_passes(capsys):
    assert main(["laplace-check", "--preset", "cube", "--op", "ds", "--s", "1"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 1 and out[0].endswith("PASS")


def test_laplace_check_reports_failure(capsys):
    # a coarse grid cannot meet the 1e-4 relative tolerance at s = 5
    assert main(["laplace-check", "--preset", "sin", "--op", "dc", "--s", "5", "--dt", "0.2"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_memristor_outputs(tmp_path, capsys):
    assert main(["memristor", "--out", str(tmp_path)]) == 0
    report = capsys.readouterr().out
    fields = dict(line.split("=", 1) for line in report.splitlines() if line.startswith(("eq8", "linearization")))
    assert float(fields["eq8_max_error"]) <= 1e-6
    assert fields["linearization_status"] == "PASS"
    assert report.count("kernel_gap=") == 2
    loop = (tmp_path / "memristor_loop.csv").read_text().splitlines()
    assert loop[:2] == ["i,v", "0,0"]
    header, windows = read_csv(tmp_path / "memristor_windows.csv")
    assert header == ["t", "red", "blue", "green"]
    row = windows[np.argmin(np.abs(windows[:, 0] - 4.0))]
    assert row[0] == 4.0
    # mpmath: 4 ** (-8/9)
    assert row[2] == pytest.approx(0.29163225989402914522, rel=1e-15)
    assert windows[0, 0] == 3.0 and windows[-1, 0] == 8.0


def test_memristor_span_error(tmp_path):
    assert main(["memristor", "--out", str(tmp_path), "--tmax", "5"]) == 2


def test_memristor_coarse_grid_fails_verification(tmp_path):
    assert main(["memristor", "--out", str(tmp_path), "--dt", "0.01"]) == 1


def test_figures_manifest_small(tmp_path):
    paths = run_figures(tmp_path, t_max=2.0, dt=0.01)
    assert [p.name for p in paths] == list(FIGURE_MANIFEST)
    assert sorted(p.name for p in tmp_path.iterdir()) == sorted(FIGURE_MANIFEST)
    header, data = read_csv(tmp_path / "fig5_cube.csv")
    grid = TimeGrid.from_span(2.0, 0.01)
    dc = apply_operator(OperatorSpec("DC", 2 / 3, 4.0), preset_function("cube"), grid).values
    assert np.array_equal(data[:, 2], dc)
    header, data = read_csv(tmp_path / "fig1_ds.csv")
    ds = apply_operator(OperatorSpec("DS", 2 / 3, 1 - 2 / 3), preset_function("cube"), grid).values
    assert np.array_equal(data[:, 1], ds)
    # loop data always spans at least one period
    _, loop = read_csv(tmp_path / "fig7_loop.csv")
    assert loop.shape[0] >= 2 * math.pi / 0.01


def test_figures_env_dir(tmp_path, monkeypatch):
    target = tmp_path / "envfigs"
    monkeypatch.setenv("FRACOPS_FIG_DIR", str(target))
    assert main(["figures", "--tmax", "1", "--dt", "0.05"]) == 0
    assert len(list(target.iterdir())) == 14


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "fracops", "eval", "--tmax", "0.02", "--dt", "0.01"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "t,value"
    proc = subprocess.run([sys.executable, "-m", "fracops", "eval", "--alpha", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 2
