import json
import math
from pathlib import Path

import pytest
from click.testing import CliRunner

from crlab.cli import main

REPO = Path(__file__).resolve().parent.parent
CONFIGS = REPO / "configs"
GOLDEN = REPO / "tests" / "golden"


@pytest.fixture()
def runner():
    return CliRunner()


def _run(runner, args):
    result = runner.invoke(main, args, catch_exceptions=False)
    return result


def test_help_lists_subcommands(runner):
    result = _run(runner, ["--help"])
    assert result.exit_code == 0
    for cmd in ("sweep-rotary", "heat", "unitarity", "purity-rb", "fit", "qv", "zeros"):
        assert cmd in result.output


def test_every_subcommand_has_help(runner):
    for cmd in ("sweep-rotary", "heat", "unitarity", "purity-rb", "fit", "qv", "zeros", "synth"):
        result = _run(runner, [cmd, "--help"])
        assert result.exit_code == 0
        assert "--help" in result.output


def test_sweep_rotary_matches_golden(tmp_path, runner):
    result = _run(
        runner,
        ["sweep-rotary", "--config", str(CONFIGS / "sweep_table_ct.json"),
         "--out-dir", str(tmp_path)],
    )
    assert result.exit_code == 0
    produced = (tmp_path / "sweep_rotary.csv").read_bytes()
    assert produced == (GOLDEN / "sweep_rotary_reference.csv").read_bytes()


def test_sweep_rotary_bit_identical_across_runs(tmp_path, runner):
    for sub in ("a", "b"):
        out = tmp_path / sub
        out.mkdir()
        result = _run(
            runner,
            ["sweep-rotary", "--config", str(CONFIGS / "sweep_table_ct.json"),
             "--out-dir", str(out)],
        )
        assert result.exit_code == 0
    assert (tmp_path / "a" / "sweep_rotary.csv").read_bytes() == (
        tmp_path / "b" / "sweep_rotary.csv"
    ).read_bytes()


def test_csv_provenance_header(tmp_path, runner):
    _run(
        runner,
        ["sweep-rotary", "--config", str(CONFIGS / "sweep_table_ct.json"),
         "--out-dir", str(tmp_path)],
    )
    text = (tmp_path / "sweep_rotary.csv").read_text()
    first = text.splitlines()[0]
    assert first.startswith("# crlab ")
    assert "config_sha256=" in first and "seed=" in first
    assert "\r" not in text


def test_synth_matches_goldens(tmp_path, runner):
    for config, golden in (
        ("synth_table_ct.json", "sweep_dataset_reference_2q.csv"),
        ("synth_table_cts.json", "sweep_dataset_reference_3q.csv"),
    ):
        out = tmp_path / config
        out.mkdir()
        result = _run(
            runner,
            ["synth", "--config", str(CONFIGS / config), "--out-dir", str(out)],
        )
        assert result.exit_code == 0
        assert (out / "sweep_dataset.csv").read_bytes() == (GOLDEN / golden).read_bytes()


def test_zeros_command(tmp_path, runner):
    result = _run(
        runner,
        ["zeros", "--config", str(CONFIGS / "zeros_table_ct.json"),
         "--out-dir", str(tmp_path)],
    )
    assert result.exit_code == 0
    payload = json.loads((tmp_path / "zeros.json").read_text())
    assert payload["roots"]
    assert all(r["kind"] in ("chi0", "chi1", "chi2") for r in payload["roots"])


def test_heat_command_and_shots_flag(tmp_path, runner):
    result = _run(
        runner,
        ["heat", "--config", str(CONFIGS / "heat_table_ct.json"),
         "--out-dir", str(tmp_path), "--shots", "256"],
    )
    assert result.exit_code == 0
    lines = (tmp_path / "heat_record.csv").read_text().splitlines()
    assert lines[1] == "kind,prep,N,y_err,z_err,shots,seed"
    assert all(",256," in line for line in lines[2:])
    recon = json.loads((tmp_path / "heat_reconstruction.json").read_text())
    assert "nu_tilde_khz" in recon


def test_heat_command_exact_flag_overrides(tmp_path, runner):
    cfg = json.loads((CONFIGS / "heat_table_ct.json").read_text())
    cfg["shots"] = 128
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    result = _run(
        runner,
        ["heat", "--config", str(cfg_path), "--out-dir", str(tmp_path), "--exact"],
    )
    assert result.exit_code == 0
    lines = (tmp_path / "heat_record.csv").read_text().splitlines()
    assert all(line.endswith(",,") for line in lines[2:])


def test_purity_rb_command(tmp_path, runner):
    result = _run(
        runner,
        ["purity-rb", "--config", str(CONFIGS / "purity_rb_1q.json"),
         "--out-dir", str(tmp_path)],
    )
    assert result.exit_code == 0
    report = json.loads((tmp_path / "purity_rb.json").read_text())
    assert abs(report["u_hat"] - report["u_ptm"]) < 0.005 * report["u_ptm"]
    lines = (tmp_path / "purity_rb.csv").read_text().splitlines()
    assert lines[1] == "m,mean_purity,std_purity"


def test_qv_command_flags(tmp_path, runner):
    result = _run(
        runner,
        ["qv", "--width", "3", "--circuits", "25", "--seed", "3",
         "--out-dir", str(tmp_path)],
    )
    assert result.exit_code == 0
    payload = json.loads((tmp_path / "qv_result.json").read_text())
    assert payload["width"] == 3 and payload["n_circuits"] == 25
    assert payload["passed"] is True  # noiseless small width
    per = (tmp_path / "qv_per_circuit.csv").read_text().splitlines()
    assert per[1] == "circuit_index,hop"
    assert len(per) == 2 + 25


def test_qv_command_with_noise_file(tmp_path, runner):
    result = _run(
        runner,
        ["qv", "--width", "2", "--circuits", "10", "--seed", "1",
         "--noise", str(CONFIGS / "qv_noise_depol.json"), "--out-dir", str(tmp_path)],
    )
    assert result.exit_code == 0
    payload = json.loads((tmp_path / "qv_result.json").read_text())
    assert payload["mean_hop"] < 1.0


def test_fit_command_recovers_single_parameter(tmp_path, runner):
    cfg = {
        "schema_version": 1,
        "init_model": json.loads((CONFIGS / "synth_table_ct.json").read_text())["model"],
        "free_mask": {"IY": {"theta0": True}},
        "data_csv": "",
        "restarts": 1,
        "max_iterations": 500,
        "seed": 0,
    }
    cfg["init_model"]["terms"]["IY"]["theta0"] = 0.0
    cfg_path = tmp_path / "fit.json"
    cfg_path.write_text(json.dumps(cfg))
    result = _run(
        runner,
        ["fit", "--config", str(cfg_path),
         "--data", str(GOLDEN / "sweep_dataset_reference_2q.csv"),
         "--out-dir", str(tmp_path)],
    )
    assert result.exit_code == 0
    model = json.loads((tmp_path / "fit_model.json").read_text())
    assert abs(model["terms"]["IY"]["theta0"] - 7.98e-3) < 0.05 * 7.98e-3


def test_missing_config_errors(tmp_path, runner):
    result = runner.invoke(
        main, ["sweep-rotary", "--config", str(tmp_path / "nope.json")]
    )
    assert result.exit_code != 0


def test_invalid_config_key_rejected(tmp_path, runner):
    cfg = json.loads((CONFIGS / "sweep_table_ct.json").read_text())
    cfg["mystery_knob"] = 3
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(cfg))
    result = runner.invoke(main, ["sweep-rotary", "--config", str(path)])
    assert result.exit_code != 0


def test_seed_override_changes_hash(tmp_path, runner):
    outs = []
    for seed in ("11", "12"):
        out = tmp_path / seed
        out.mkdir()
        _run(
            runner,
            ["heat", "--config", str(CONFIGS / "heat_table_ct.json"),
             "--out-dir", str(out), "--seed", seed, "--shots", "64"],
        )
        outs.append((out / "heat_record.csv").read_text().splitlines()[0])
    assert outs[0] != outs[1]
    assert "seed=11" in outs[0] and "seed=12" in outs[1]


def test_spectator_command(tmp_path, runner):
    result = _run(
        runner,
        ["spectator", "--config", str(CONFIGS / "spectator_sweep.json"),
         "--out-dir", str(tmp_path)],
    )
    assert result.exit_code == 0
    lines = (tmp_path / "spectator_sweep.csv").read_text().splitlines()
    assert lines[1] == (
        "omega_khz,nu_yz_analytic_khz,nu_zz_analytic_khz,"
        "nu_yz_numeric_khz,nu_zz_numeric_khz"
    )
    assert len(lines) == 2 + 60


def test_unitarity_command(tmp_path, runner):
    cfg = json.loads((CONFIGS / "unitarity_table_cts.json").read_text())
    cfg["x_grid"] = {"start": 0.0, "stop": 0.5, "num": 2}
    cfg["n_sequences"] = 40
    path = tmp_path / "u.json"
    path.write_text(json.dumps(cfg))
    result = _run(
        runner, ["unitarity", "--config", str(path), "--out-dir", str(tmp_path)]
    )
    assert result.exit_code == 0
    lines = (tmp_path / "unitarity.csv").read_text().splitlines()
    assert lines[1].startswith("x_amplitude,u_2q,u_1q,u_product,u_full,e_entanglement")
    assert len(lines) == 2 + 2
    payload = json.loads((tmp_path / "unitarity.json").read_text())
    assert len(payload["rows"]) == 2
