"""Command-line behavior: config handling, artifacts, exit codes, determinism."""

import re
from pathlib import Path

import numpy as np
import pytest

from fosid.cli import main
from fosid.config import ConfigError, ExperimentConfig, load_config

FAST = ["--profile", "fast"]


def run(args, tmp_path, extra_sets=()):
    sets = []
    for kv in (f"out.dir={tmp_path}", *extra_sets):
        sets += ["-s", kv]
    return main(FAST + sets + args)


class TestConfig:
    def test_defaults_are_the_reference_experiment(self):
        cfg = ExperimentConfig()
        assert (cfg.grid_t, cfg.grid_l) == (0.001, 10.0)
        assert cfg.model_alpha == 2.23 and cfg.model_beta == 0.88
        assert cfg.search_schedule == ((4, 4, 4), (5, 5, 3), (5, 5, 3))

    def test_file_round_trip(self, tmp_path):
        cfg = ExperimentConfig(grid_t=0.01, noise_seed=7, search_early_abandon=True)
        path = tmp_path / "exp.cfg"
        path.write_text(cfg.to_text())
        assert load_config(path) == cfg

    def test_overrides_win(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("grid.T = 0.01\nnoise.seed = 1\n")
        cfg = load_config(path, ["noise.seed=2", "search.m=5"])
        assert cfg.grid_t == 0.01 and cfg.noise_seed == 2 and cfg.search_m == 5

    def test_comments_and_blank_lines_ignored(self, tmp_path):
        path = tmp_path / "exp.cfg"
        path.write_text("# a comment\n\ngrid.L = 5.0\n")
        assert load_config(path).grid_l == 5.0

    @pytest.mark.parametrize(
        "override",
        ["nope.key=1", "grid.T=abc", "search.schedule=4,4", "search.early_abandon=maybe"],
    )
    def test_bad_values_raise(self, override):
        with pytest.raises(ConfigError):
            load_config(None, [override])

    def test_schedule_parsing(self):
        cfg = load_config(None, ["search.schedule=2,3,4;5,6,7"])
        assert cfg.search_schedule == ((2, 3, 4), (5, 6, 7))


def read_rows(path: Path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# fosid")
    columns = lines[1].split(",")
    rows = [line.split(",") for line in lines[2:]]
    return columns, rows


class TestSimulateCommand:
    def test_writes_clean_and_corrupted(self, tmp_path, capsys):
        assert run(["simulate"], tmp_path) == 0
        columns, rows = read_rows(tmp_path / "response_clean.csv")
        assert columns == ["time", "value"]
        assert len(rows) == 1001
        assert (tmp_path / "response_corrupted.csv").exists()
        assert "dc gain" in capsys.readouterr().out

    def test_zero_amplitude_omits_corrupted_file(self, tmp_path):
        assert run(["simulate"], tmp_path, ["noise.amplitude=0"]) == 0
        assert not (tmp_path / "response_corrupted.csv").exists()

    def test_nonpositive_period_exits_2(self, tmp_path):
        assert run(["simulate"], tmp_path, ["grid.T=-0.01"]) == 2

    def test_csv_values_reparse_exactly(self, tmp_path):
        from fosid import simulate_response, unit_step
        from fosid.config import load_config as load

        assert run(["simulate"], tmp_path, ["noise.amplitude=0"]) == 0
        cfg = load(None, ["grid.T=0.01"])
        expected = simulate_response(cfg.model(), unit_step(cfg.grid()))
        _, rows = read_rows(tmp_path / "response_clean.csv")
        parsed = np.array([float(v) for _, v in rows])
        assert np.array_equal(parsed, expected.values)


class TestIdentifyCommand:
    def test_ideal_identification_report(self, tmp_path, capsys):
        assert run(["identify", "2.23", "0.88"], tmp_path, ["noise.amplitude=0"]) == 0
        out = capsys.readouterr().out
        errors = [float(m) for m in re.findall(r"error (\d+\.\d+)%", out)]
        assert len(errors) == 3
        assert max(errors) <= 0.15

    def test_noisy_identification_report(self, tmp_path, capsys):
        assert run(["identify", "2.23", "0.88"], tmp_path, ["noise.seed=1000"]) == 0
        out = capsys.readouterr().out
        errors = [float(m) for m in re.findall(r"error (\d+\.\d+)%", out)]
        assert max(errors) <= 1.5

    def test_singular_system_exits_3(self, tmp_path):
        beta = repr(2.23 - 1e-12)
        assert run(["identify", "2.23", beta], tmp_path, ["noise.amplitude=0"]) == 3


class TestSearchCommand:
    def test_algorithm1_artifacts(self, tmp_path, capsys):
        assert (
            run(["search"], tmp_path, ["search.m=3", "search.n=3", "noise.seed=1000"])
            == 0
        )
        columns, rows = read_rows(tmp_path / "models_stage1.csv")
        assert columns == ["rank", "alpha", "beta", "a1", "a2", "a3", "fitness"]
        assert len(rows) == 9
        assert [int(r[0]) for r in rows] == list(range(1, 10))
        fits = [float(r[-1]) for r in rows]
        assert fits == sorted(fits)
        assert "evaluated 9 models" in capsys.readouterr().out

    def test_algorithm2_artifacts(self, tmp_path, capsys):
        assert (
            run(
                ["search"],
                tmp_path,
                ["search.algorithm=2", "search.schedule=3,3,2;3,3,1", "noise.seed=1000"],
            )
            == 0
        )
        assert (tmp_path / "models_stage1.csv").exists()
        assert (tmp_path / "models_stage2.csv").exists()
        out = capsys.readouterr().out
        assert "totals: grid 27, unique 27, evaluated 27" in out

    def test_early_abandon_reports_savings(self, tmp_path, capsys):
        assert (
            run(
                ["search"],
                tmp_path,
                [
                    "search.algorithm=2",
                    "search.schedule=4,4,2;3,3,1",
                    "search.early_abandon=true",
                    "noise.seed=1000",
                ],
            )
            == 0
        )
        out = capsys.readouterr().out
        assert "early-abandon savings factor" in out

    def test_empty_schedule_exits_2(self, tmp_path):
        code = run(
            ["search"], tmp_path, ["search.algorithm=2", "search.schedule=;"]
        )
        assert code == 2

    def test_search_csv_reparses_to_library_result(self, tmp_path):
        from fosid import algorithm1, corrupt, simulate_response, uniform_noise, unit_step
        from fosid.config import load_config as load

        sets = ["search.m=3", "search.n=3", "noise.seed=1000"]
        assert run(["search"], tmp_path, sets) == 0
        cfg = load(None, ["grid.T=0.01"] + [s for s in sets])
        clean = simulate_response(cfg.model(), unit_step(cfg.grid()))
        record = corrupt(clean, uniform_noise(cfg.noise_spec(), cfg.grid()))
        ranked = algorithm1(
            cfg.power_range(), 3, 3, record, fitness_reference=clean
        )
        _, rows = read_rows(tmp_path / "models_stage1.csv")
        for cand, row in zip(ranked, rows):
            assert float(row[1]) == cand.model.alpha
            assert float(row[4]) == cand.model.a2
            assert float(row[6]) == cand.fitness


class TestNoiseTableCommand:
    def test_default_shape(self, tmp_path):
        assert run(["noise-table"], tmp_path, ["noise.amplitude=0.01"]) == 0
        columns, rows = read_rows(tmp_path / "noise_table.csv")
        assert len(columns) == 11  # record seed + 10 orders
        assert len(rows) == 10

    def test_zero_amplitude_zero_table(self, tmp_path):
        assert run(["noise-table"], tmp_path, ["noise.amplitude=0"]) == 0
        _, rows = read_rows(tmp_path / "noise_table.csv")
        assert all(float(v) == 0.0 for row in rows for v in row[1:])

    def test_custom_orders_honored(self, tmp_path):
        assert (
            run(["noise-table", "--orders", "0.5,-0.5"], tmp_path) == 0
        )
        columns, rows = read_rows(tmp_path / "noise_table.csv")
        assert columns[1:] == ["0.5", "-0.5"]
        assert len(rows) == 10


def strip_timestamp(text: str) -> str:
    return re.sub(r" created=\S+", "", text)


class TestDeterminism:
    def test_reruns_are_byte_identical_apart_from_timestamp(self, tmp_path):
        sets = ["search.m=4", "search.n=4", "noise.seed=1000"]
        for sub in ("a", "b"):
            assert run(["search"], tmp_path / sub, sets) == 0
        a = strip_timestamp((tmp_path / "a" / "models_stage1.csv").read_text())
        b = strip_timestamp((tmp_path / "b" / "models_stage1.csv").read_text())
        assert a == b

    def test_parallelism_does_not_change_output(self, tmp_path):
        sets = ["search.algorithm=2", "search.schedule=3,3,2;3,3,1", "noise.seed=1000"]
        assert run(["search"], tmp_path / "serial", sets) == 0
        assert run(["--workers", "4", "search"], tmp_path / "par", sets) == 0
        for name in ("models_stage1.csv", "models_stage2.csv"):
            a = strip_timestamp((tmp_path / "serial" / name).read_text())
            b = strip_timestamp((tmp_path / "par" / name).read_text())
            assert a == b
