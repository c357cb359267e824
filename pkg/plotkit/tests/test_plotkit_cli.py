"""Tests for the plotkit command line: exit codes, messages, artifacts."""

import csv
import math

import numpy as np
import pytest

from plotkit.cli import EXIT_INPUT, EXIT_OK, main

METRICS_HEADER = ["episode", "accumulated_reward", "mean_critic_loss",
                  "mean_actor_objective", "qos_violation_rate"]
SWEEP_HEADER = ["axis_value", "mean_sum_rate", "baseline_sum_rate"]


def write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def write_metrics(path, episodes=30, seed=0):
    rng = np.random.default_rng(seed)
    rows = [[ep, 100.0 * (1.0 - math.exp(-ep / 8.0)) + rng.standard_normal(),
             abs(rng.standard_normal()), rng.standard_normal(),
             rng.uniform(0.0, 0.5)] for ep in range(episodes)]
    write_rows(path, METRICS_HEADER, rows)


def write_sweep(path, axis=(4, 8, 16)):
    rows = [[v, 1.5 + 0.8 * math.log2(v), 0.9 + 0.25 * math.log2(v)]
            for v in axis]
    write_rows(path, SWEEP_HEADER, rows)


def test_cli_convergence_writes_figure(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    write_metrics(a, seed=1)
    write_metrics(b, seed=2)
    out = tmp_path / "fig.png"
    code = main(["convergence", "--csv", str(a), str(b),
                 "--labels", "four", "eight", "--out", str(out)])
    assert code == EXIT_OK
    assert out.exists()
    stdout = capsys.readouterr().out
    assert f"wrote {out}" in stdout
    assert "2 series" in stdout


def test_cli_convergence_smooth_flag(tmp_path):
    a = tmp_path / "a.csv"
    write_metrics(a)
    out = tmp_path / "fig.png"
    assert main(["convergence", "--csv", str(a), "--out", str(out),
                 "--smooth", "10"]) == EXIT_OK
    assert out.exists()


def test_cli_missing_column_exits_input_error(tmp_path, capsys):
    a = tmp_path / "a.csv"
    write_rows(a, ["episode", "other"], [[0, 1.0]])
    out = tmp_path / "fig.png"
    code = main(["convergence", "--csv", str(a), "--out", str(out)])
    assert code == EXIT_INPUT
    stderr = capsys.readouterr().err
    assert "missing column" in stderr
    assert str(a) in stderr
    assert not out.exists()


def test_cli_empty_body_exits_input_error(tmp_path, capsys):
    a = tmp_path / "a.csv"
    write_rows(a, METRICS_HEADER, [])
    out = tmp_path / "fig.png"
    assert main(["convergence", "--csv", str(a),
                 "--out", str(out)]) == EXIT_INPUT
    assert "no data rows" in capsys.readouterr().err
    assert not out.exists()


def test_cli_label_mismatch_exits_input_error(tmp_path, capsys):
    a = tmp_path / "a.csv"
    write_metrics(a)
    code = main(["convergence", "--csv", str(a), "--labels", "x", "y",
                 "--out", str(tmp_path / "fig.png")])
    assert code == EXIT_INPUT
    assert "labels" in capsys.readouterr().err


def test_cli_bad_smooth_exits_input_error(tmp_path, capsys):
    a = tmp_path / "a.csv"
    write_metrics(a)
    code = main(["convergence", "--csv", str(a),
                 "--out", str(tmp_path / "fig.png"), "--smooth", "0"])
    assert code == EXIT_INPUT
    assert "smooth_window" in capsys.readouterr().err


def test_cli_sweep_writes_figure(tmp_path, capsys):
    s = tmp_path / "sweep.csv"
    write_sweep(s)
    out = tmp_path / "fig.png"
    assert main(["sweep", "--csv", str(s), "--out", str(out)]) == EXIT_OK
    assert out.exists()
    assert "2 series" in capsys.readouterr().out


def test_cli_sweep_mismatched_files_exit_input_error(tmp_path, capsys):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    write_sweep(a, axis=(4, 8, 16))
    write_sweep(b, axis=(4, 8))
    code = main(["sweep", "--csv", str(a), str(b),
                 "--out", str(tmp_path / "fig.png")])
    assert code == EXIT_INPUT
    assert "lengths differ" in capsys.readouterr().err


def test_cli_requires_subcommand():
    with pytest.raises(SystemExit) as excinfo:
        main([])
    assert excinfo.value.code == 2


def test_cli_rejects_unknown_option(tmp_path):
    with pytest.raises(SystemExit) as excinfo:
        main(["convergence", "--csv", str(tmp_path / "a.csv"),
              "--out", str(tmp_path / "fig.png"), "--dashboard"])
    assert excinfo.value.code == 2


def test_cli_rerender_to_same_path_succeeds(tmp_path):
    a = tmp_path / "a.csv"
    write_metrics(a)
    out = tmp_path / "fig.png"
    argv = ["convergence", "--csv", str(a), "--out", str(out)]
    assert main(argv) == EXIT_OK
    assert main(argv) == EXIT_OK
    assert out.exists()
