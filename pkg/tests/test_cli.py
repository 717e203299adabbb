"""Command-line harness: subcommands, determinism, exit codes."""

from pathlib import Path

from incidence4.cli import (
    EXIT_INVARIANT,
    EXIT_OK,
    EXIT_STRICT_HYPOTHESIS,
    ExperimentSpec,
    log_spaced_s,
    main,
    run_experiment,
)
from incidence4.configs import GeneratorKind, GeneratorSpec
from incidence4.partition import PartitionParams

FIXTURE = str(Path(__file__).resolve().parent.parent / "fixtures" / "sample_config.json")


def test_gen_and_count_round_trip(tmp_path, capsys):
    cfg_path = tmp_path / "c.json"
    assert main(["gen", "--kind", "star", "--L", "3", "--S", "2", "--seed", "5",
                 "--out", str(cfg_path)]) == EXIT_OK
    assert main(["count", "--config", str(cfg_path), "--out", "-"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "point_incidences: 6" in out


def test_count_sample_fixture(capsys):
    assert main(["count", "--config", FIXTURE, "--out", "-"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "point_incidences: 0" in out
    assert "containments: 1" in out


def test_partition_subcommand(tmp_path, capsys):
    cfg_path = tmp_path / "c.json"
    main(["gen", "--kind", "star", "--L", "4", "--S", "3", "--seed", "2",
          "--out", str(cfg_path)])
    assert main(["partition", "--config", str(cfg_path), "--J", "1",
                 "--delta", "0", "--out", "-"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "rounds: 1" in out
    assert "per_cell" in out or "zero_set_count" in out


def test_degeneracy_subcommand(capsys):
    assert main(["degeneracy", "--config", FIXTURE, "--out", "-"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "rich_flats: 0" in out


def test_bounds_subcommand(capsys):
    assert main(["bounds", "--L", "10000", "--S", "1000", "--D", "2",
                 "--epsilon", "1/2", "--out", "-"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "main_bound: 2e+07" in out
    assert "ratio:" in out


def test_grid_subcommand(capsys):
    assert main(["grid", "--L-list", "10000", "--D-list", "2",
                 "--epsilon-list", "1/2", "--out", "-"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "max_in_regime_ratio" in out
    assert "cell_sum_below_main_everywhere: True" in out


def test_grid_empty(capsys):
    assert main(["grid", "--L-list", "1000", "--S-list", "auto",
                 "--D-list", "2", "--epsilon-list", "1/2", "--out", "-"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "no rows" in out


def test_log_spaced_s_band():
    values = log_spaced_s(10**6)
    assert values[0] >= 10**4
    assert values[-1] <= 10**5
    assert values == sorted(values)
    assert log_spaced_s(1000) == []


def test_verify_exit_codes(tmp_path):
    # generic small config: out of regime, strict -> 3, default -> 0
    args = ["verify", "--kind", "generic", "--L", "12", "--S", "6", "--seed", "1",
            "--out", str(tmp_path / "r.txt")]
    assert main(args) == EXIT_OK
    assert main(args + ["--strict"]) == EXIT_STRICT_HYPOTHESIS


def test_verify_bad_config(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["verify", "--config", str(bad)]) == EXIT_INVARIANT


def test_byte_determinism(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    argv = ["verify", "--kind", "generic", "--L", "15", "--S", "8", "--seed", "3"]
    assert main(argv + ["--out", str(a)]) == EXIT_OK
    assert main(argv + ["--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()


def test_out_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("INCIDENCE4_OUT_DIR", str(tmp_path))
    assert main(["gen", "--kind", "generic", "--L", "3", "--S", "2", "--seed", "1"]) == EXIT_OK
    capsys.readouterr()
    assert (tmp_path / "config_generic_1.json").exists()


def test_run_experiment_star_report():
    spec = ExperimentSpec(
        GeneratorSpec(GeneratorKind.STAR, num_lines=3, num_planes=2),
        seed=5,
    )
    report = run_experiment(spec)
    assert report.exit_code == EXIT_OK
    assert "point_incidences: 6" in report.text
    assert "## verdicts" in report.text


def test_run_experiment_planted_lists_flat():
    spec = ExperimentSpec(
        GeneratorSpec(
            GeneratorKind.PLANTED_RICH_FLAT,
            num_lines=12,
            num_planes=3,
            planted_line_count=5,
        ),
        seed=9,
    )
    report = run_experiment(spec)
    assert "planted_flat_recovered: True" in report.text
    assert "multiplicity 5" in report.text


def test_run_experiment_with_partition_reconciles():
    spec = ExperimentSpec(
        GeneratorSpec(GeneratorKind.STAR, num_lines=4, num_planes=3),
        seed=8,
        partition=PartitionParams(2, 0),
    )
    report = run_experiment(spec)
    assert report.exit_code == EXIT_OK
    assert "zero_set_count:" in report.text
