"""Тесты командной строки: загрузка плагинов, коды выхода и файлы результатов."""

import json
import math

import pytest

from core.runner import EXIT_INPUT, EXIT_OK, DfluxRunner
from services.io_service import read_frame, read_json

QUAD = {"f": {"kind": "quadratic", "a": 0.5}, "g": {"kind": "quadratic", "a": 1.0}}


def write_problem(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def run_cli(cfg, argv):
    runner = DfluxRunner(cfg)
    assert runner.load_default_plugins() == []
    return runner.run(argv)


@pytest.fixture
def stationary_problem(tmp_path):
    return write_problem(
        tmp_path,
        "stationary.json",
        {
            "fluxes": QUAD,
            "T": 1.0,
            "seed": 7,
            "initial": {"constant": 0.0},
            "grid": {"x_min": -1.0, "x_max": 1.0, "nx": 21, "nt": 3},
        },
    )


def test_all_commands_are_registered(tmp_config):
    runner = DfluxRunner(tmp_config)
    assert runner.load_default_plugins() == []
    assert runner.plugin_manager.get_command_names() == ["backward", "forward", "optimize", "oracle", "reach"]


def test_forward_writes_profile_and_sidecar(tmp_config, tmp_path, stationary_problem):
    out = tmp_path / "run"
    assert run_cli(tmp_config, ["forward", "--config", str(stationary_problem), "--out", str(out)]) == EXIT_OK
    frame = read_frame(out / "forward" / "profile.csv")
    assert list(frame.columns) == ["x", "u"]
    assert len(frame) == 21
    assert (frame["u"].abs() <= 1e-9).all()
    sidecar = read_json(out / "forward" / "interface.json")
    assert sidecar["command"] == "forward"
    assert sidecar["seed"] == 7
    assert sidecar["R1"] == 0.0
    assert sidecar["interface"]["rh_violation_measure"] == 0.0


def test_common_flags_before_the_subcommand(tmp_config, tmp_path, stationary_problem):
    out = tmp_path / "before"
    code = run_cli(tmp_config, ["--out", str(out), "--seed", "11", "forward", "--config", str(stationary_problem)])
    assert code == EXIT_OK
    # --seed важнее seed из файла задачи
    assert read_json(out / "forward" / "interface.json")["seed"] == 11


def test_outputs_are_byte_identical_across_runs(tmp_config, tmp_path, stationary_problem):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert run_cli(tmp_config, ["forward", "--config", str(stationary_problem), "--out", str(out)]) == EXIT_OK
    for name in ("profile.csv", "interface.json"):
        assert (a / "forward" / name).read_bytes() == (b / "forward" / name).read_bytes()


def test_input_errors_exit_with_code_2(tmp_config, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    assert run_cli(tmp_config, ["forward", "--config", str(broken)]) == EXIT_INPUT
    assert run_cli(tmp_config, ["forward"]) == EXIT_INPUT
    assert run_cli(tmp_config, ["forward", "--config", str(tmp_path / "missing.json")]) == EXIT_INPUT

    # тождественное y слева при R > 0 противоречит ρ(0) < 0
    inconsistent = write_problem(
        tmp_path,
        "inconsistent.json",
        {
            "fluxes": QUAD,
            "T": 1.0,
            "backward": {"R": 1.0, "rho": {"breakpoints": [], "values": [-math.sqrt(2.0)]}, "y": "identity"},
        },
    )
    assert run_cli(tmp_config, ["backward", "--config", str(inconsistent)]) == EXIT_INPUT

    with pytest.raises(SystemExit) as exc:
        run_cli(tmp_config, ["unknown"])
    assert exc.value.code == 2


def test_backward_round_trip(tmp_config, tmp_path):
    rho0 = -math.sqrt(2.0)
    problem = write_problem(
        tmp_path,
        "block.json",
        {
            "fluxes": QUAD,
            "T": 1.0,
            "backward": {
                "R": 1.0,
                "rho": {"breakpoints": [], "values": [rho0]},
                "y": {"pieces": [{"lo": rho0, "hi": 0.0, "kind": "const", "value": rho0}]},
                "N": 1,
                "nx": 51,
            },
        },
    )
    out = tmp_path / "bw"
    assert run_cli(tmp_config, ["backward", "--config", str(problem), "--out", str(out)]) == EXIT_OK
    summary = read_json(out / "backward" / "roundtrip.json")
    assert summary["l1"] <= 1e-4
    assert summary["tmap_decreasing"] is True
    assert summary["bv_ok"] is True
    u0 = read_json(out / "backward" / "u0.json")
    assert u0["values"][0] == 0.0
    assert list(read_frame(out / "backward" / "u0_pieces.csv").columns) == ["lo", "hi", "value"]


def test_oracle_with_comparison(tmp_config, tmp_path, stationary_problem):
    out = tmp_path / "or"
    argv = ["oracle", "--config", str(stationary_problem), "--dx", "0.05", "--compare", "--out", str(out)]
    assert run_cli(tmp_config, argv) == EXIT_OK
    assert list(read_frame(out / "oracle" / "profile.csv").columns) == ["x", "u"]
    report = read_json(out / "oracle" / "report.json")
    assert report["dx"] == 0.05
    assert report["rh_residual"] == 0.0
    assert report["l1_vs_forward"] <= 1e-9


def test_optimize_on_a_stationary_target(tmp_config, tmp_path):
    problem = write_problem(
        tmp_path,
        "opt.json",
        {
            "fluxes": QUAD,
            "T": 1.0,
            "target": {"C": 1.0},
            "disc": {"n_R": 9, "n_levels": 40, "max_refine": 0},
        },
    )
    out = tmp_path / "opt"
    assert run_cli(tmp_config, ["optimize", "--config", str(problem), "--no-forward", "--out", str(out)]) == EXIT_OK
    cost = read_json(out / "optimize" / "cost.json")
    assert cost["Jtilde"] <= 1e-10
    assert cost["R"] == 0.0
    assert cost["J"] is None
    assert read_json(out / "optimize" / "triple.json")["R"] == 0.0
    assert list(read_frame(out / "optimize" / "candidates.csv").columns) == ["R", "Jtilde"]


def test_reach_check_of_the_stationary_profile(tmp_config, tmp_path):
    problem = write_problem(
        tmp_path,
        "reach.json",
        {
            "fluxes": QUAD,
            "T": 1.0,
            "reach": {"C1": -2.0, "C2": 3.0, "B1": -4.0, "B2": 4.0, "grid": 50, "target": {"x": [-2.0, 3.0], "w": [0.0, 0.0]}},
        },
    )
    out = tmp_path / "rc"
    assert run_cli(tmp_config, ["reach", "check", "--config", str(problem), "--out", str(out)]) == EXIT_OK
    membership = read_json(out / "reach_check" / "membership.json")
    assert membership["member"] is True
    assert membership["R"] == 0.0
    assert not (out / "reach_check" / "witness.csv").exists()
