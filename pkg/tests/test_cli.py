import json
import math
import subprocess
import sys

import numpy as np
import pytest

from cavitywalk.cli import main


def write_config(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def read_meta(path):
    meta = {}
    for line in path.read_text().splitlines():
        if not line.startswith("# "):
            break
        key, _, value = line[2:].partition(" = ")
        meta[key] = value
    return meta


def read_rows(path):
    lines = [ln for ln in path.read_text().splitlines() if not ln.startswith("# ")]
    header = lines[0].split(",")
    return header, [ln.split(",") for ln in lines[1:]]


SMALL_WALK = {"alpha0": 0.0, "l": 0.1, "theta": 0.5, "phi": 0.3, "N": 2}


class TestExitCodes:
    def test_no_command_is_usage_error(self):
        assert main([]) == 2

    def test_unknown_top_level_key(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {"walk": SMALL_WALK, "probe": {}})
        assert main(["walk", "--config", cfg, "--out", str(tmp_path)]) == 2

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["walk", "--config", str(path), "--out", str(tmp_path)]) == 2

    def test_missing_config_file(self, tmp_path):
        assert main(["walk", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 2

    def test_single_point_probe_grid(self, tmp_path):
        cfg = write_config(
            tmp_path, "c.json", {"walk": SMALL_WALK, "probe": {"points": 1}}
        )
        assert main(["homodyne", "--config", cfg, "--out", str(tmp_path)]) == 2

    def test_degenerate_theta_is_contract_failure(self, tmp_path):
        cfg = write_config(
            tmp_path, "c.json", {"walk": dict(SMALL_WALK, theta=math.pi / 2)}
        )
        assert main(["walk", "--config", cfg, "--out", str(tmp_path)]) == 3

    def test_clipped_momentum_window_is_resolution_failure(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "c.json",
            {
                "walk": SMALL_WALK,
                "phase_grid": {"p_min": -0.4, "p_max": 0.4, "p_points": 8},
            },
        )
        assert main(["wigner", "--config", cfg, "--out", str(tmp_path)]) == 4

    def test_inconsistent_drive_triple(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "c.json",
            {"walk": dict(SMALL_WALK, E_abs=1.0, g=1.0, t=0.2, phi=5.0)},
        )
        assert main(["walk", "--config", cfg, "--out", str(tmp_path)]) == 2

    def test_partial_drive_triple(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {"walk": dict(SMALL_WALK, g=1.0)})
        assert main(["walk", "--config", cfg, "--out", str(tmp_path)]) == 2


class TestWalkCommand:
    def test_byte_determinism(self, tmp_path):
        doc = {"walk": SMALL_WALK, "grid": {"points": 256}}
        cfg = write_config(tmp_path, "c.json", doc)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["walk", "--config", cfg, "--out", str(out_a)]) == 0
        assert main(["walk", "--config", cfg, "--out", str(out_b)]) == 0
        assert (out_a / "walk_px.csv").read_bytes() == (out_b / "walk_px.csv").read_bytes()
        assert (out_a / "walk_state.json").read_bytes() == (out_b / "walk_state.json").read_bytes()

    def test_vacuum_packet_variance(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {"walk": dict(SMALL_WALK, N=0)})
        assert main(["walk", "--config", cfg, "--out", str(tmp_path)]) == 0
        meta = read_meta(tmp_path / "walk_px.csv")
        assert abs(float(meta["result.variance_x"]) - 0.5) < 1e-4
        assert abs(float(meta["result.mean_x"])) < 1e-6

    def test_csv_layout(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {"walk": SMALL_WALK, "grid": {"points": 64}})
        assert main(["walk", "--config", cfg, "--out", str(tmp_path)]) == 0
        header, rows = read_rows(tmp_path / "walk_px.csv")
        assert header == ["x", "P"]
        assert len(rows) == 64
        meta = read_meta(tmp_path / "walk_px.csv")
        assert meta["command"] == "walk"
        assert meta["walk.N"] == "2"

    def test_state_json_round_trips(self, tmp_path):
        from cavitywalk.walker import WalkerState

        cfg = write_config(tmp_path, "c.json", {"walk": SMALL_WALK})
        assert main(["walk", "--config", cfg, "--out", str(tmp_path)]) == 0
        doc = json.loads((tmp_path / "walk_state.json").read_text())
        state = WalkerState.from_json_dict(doc["state"])
        assert state.normalized
        assert state.n_components == SMALL_WALK["N"] + 1
        assert doc["params"]["N"] == SMALL_WALK["N"]

    def test_ndjson_meta_first(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {"walk": SMALL_WALK, "grid": {"points": 32}})
        assert main(["walk", "--config", cfg, "--out", str(tmp_path), "--format", "ndjson"]) == 0
        lines = (tmp_path / "walk_px.ndjson").read_text().splitlines()
        first = json.loads(lines[0])
        assert set(first) == {"meta"}
        assert first["meta"]["command"] == "walk"
        record = json.loads(lines[1])
        assert set(record) == {"x", "P"}
        assert len(lines) == 33


class TestWignerCommand:
    def test_meta_reports_unit_integral(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "c.json",
            {
                "walk": SMALL_WALK,
                "phase_grid": {"x_points": 256, "p_points": 64},
            },
        )
        assert main(["wigner", "--config", cfg, "--out", str(tmp_path)]) == 0
        meta = read_meta(tmp_path / "wigner.csv")
        assert abs(float(meta["result.integral"]) - 1.0) < 1e-6
        header, rows = read_rows(tmp_path / "wigner.csv")
        assert header == ["x", "p", "W"]
        assert len(rows) == 256 * 64


class TestClassicalCommand:
    def test_reports_l1_distance(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {"walk": SMALL_WALK, "grid": {"points": 512}})
        assert main(["classical", "--config", cfg, "--out", str(tmp_path)]) == 0
        header, rows = read_rows(tmp_path / "classical_px.csv")
        assert header == ["x", "P_classical", "P_quantum"]
        meta = read_meta(tmp_path / "classical_px.csv")
        distance = float(meta["result.l1_distance"])
        assert 0.0 <= distance <= 2.0


class TestHomodyneCommand:
    def test_probe_coupling_flag_override(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "c.json",
            {
                "walk": dict(SMALL_WALK, N=0),
                "probe": {"gt_p_pi": 0.5, "delta_min": -1.0, "delta_max": 1.0, "points": 21},
            },
        )
        assert main(
            ["homodyne", "--config", cfg, "--out", str(tmp_path), "--gtp-pi", "2.0"]
        ) == 0
        meta = read_meta(tmp_path / "homodyne_scan.csv")
        assert abs(float(meta["probe.gt_p"]) - 2.0 * math.pi) < 1e-12

    def test_conflicting_probe_couplings(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "c.json",
            {"walk": dict(SMALL_WALK, N=0), "probe": {"gt_p": 1.0, "gt_p_pi": 0.5}},
        )
        assert main(["homodyne", "--config", cfg, "--out", str(tmp_path)]) == 2

    def test_seeded_detections_are_deterministic(self, tmp_path):
        doc = {
            "walk": dict(SMALL_WALK, N=0),
            "probe": {"delta_min": -1.0, "delta_max": 1.0, "points": 21, "shots": 100},
        }
        cfg = write_config(tmp_path, "c.json", doc)
        out_a, out_b, out_c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
        for out, seed in ((out_a, "5"), (out_b, "5"), (out_c, "6")):
            assert main(
                ["homodyne", "--config", cfg, "--out", str(out), "--seed", seed]
            ) == 0
        same = (out_a / "homodyne_detections.csv").read_bytes()
        assert same == (out_b / "homodyne_detections.csv").read_bytes()
        assert same != (out_c / "homodyne_detections.csv").read_bytes()
        header, rows = read_rows(out_a / "homodyne_detections.csv")
        assert header == ["delta", "shots", "n_ground"]
        counts = np.array([int(r[2]) for r in rows])
        assert np.all(counts >= 0) and np.all(counts <= 100)


class TestDecohereCommand:
    def test_constant_schedule_gives_identical_surfaces(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "c.json",
            {
                "walk": SMALL_WALK,
                "damping": {"kt_schedule": [0.0, 0.0]},
                "phase_grid": {"x_points": 128, "p_points": 48},
            },
        )
        assert main(["decohere", "--config", cfg, "--out", str(tmp_path)]) == 0
        a = (tmp_path / "decohere_wigner_0.csv").read_bytes()
        b = (tmp_path / "decohere_wigner_1.csv").read_bytes()
        assert a == b

    def test_purity_column_decays_at_early_times(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "c.json",
            {
                "walk": dict(SMALL_WALK, N=4),
                "damping": {"kt_schedule": [0.0, 0.05, 0.1, 0.2]},
                "phase_grid": {"x_points": 256, "p_points": 64},
            },
        )
        assert main(["decohere", "--config", cfg, "--out", str(tmp_path)]) == 0
        header, rows = read_rows(tmp_path / "decohere_diagnostics.csv")
        assert header == ["kt", "purity", "min_wigner", "peak_x", "variance_x"]
        purity = [float(r[1]) for r in rows]
        assert all(a >= b - 1e-12 for a, b in zip(purity, purity[1:]))
        assert abs(purity[0] - 1.0) < 1e-6

    def test_negative_kt_rejected(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "c.json",
            {"walk": SMALL_WALK, "damping": {"kt_schedule": [-0.1]}},
        )
        assert main(["decohere", "--config", cfg, "--out", str(tmp_path)]) == 2


class TestValidateCommand:
    def test_all_checks_pass(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {"validate": {"draws": 5}})
        assert main(["validate", "--config", cfg, "--out", str(tmp_path)]) == 0
        header, rows = read_rows(tmp_path / "validate_report.csv")
        assert header == ["check", "value", "threshold", "passed"]
        assert all(r[3] == "true" for r in rows)
        names = [r[0] for r in rows]
        assert "damp_vs_lindblad_residual" in names
        assert "spin_transform_residual" in names

    def test_rwa_subset_skips_damping_check(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {"validate": {"draws": 5}})
        assert main(["validate-rwa", "--config", cfg, "--out", str(tmp_path)]) == 0
        _, rows = read_rows(tmp_path / "validate_report.csv")
        names = [r[0] for r in rows]
        assert "damp_vs_lindblad_residual" not in names
        assert any(n.startswith("rwa_fidelity_ratio_") for n in names)

    def test_bad_ratio_ordering(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {"validate": {"ratios": [50.0, 5.0]}})
        assert main(["validate", "--config", cfg, "--out", str(tmp_path)]) == 2


class TestConventionFlag:
    def test_flag_overrides_config(self, tmp_path):
        cfg = write_config(
            tmp_path, "c.json", {"walk": SMALL_WALK, "convention": "amplitude"}
        )
        assert main(
            ["walk", "--config", cfg, "--out", str(tmp_path), "--convention", "quadrature"]
        ) == 0
        meta = read_meta(tmp_path / "walk_px.csv")
        assert meta["convention"] == "quadrature"

    def test_bad_convention_in_config(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {"walk": SMALL_WALK, "convention": "x"})
        assert main(["walk", "--config", cfg, "--out", str(tmp_path)]) == 2


class TestModuleEntryPoint:
    def test_runs_as_module(self, tmp_path):
        cfg = write_config(tmp_path, "c.json", {"walk": dict(SMALL_WALK, N=0)})
        proc = subprocess.run(
            [sys.executable, "-m", "cavitywalk", "walk", "--config", cfg, "--out", str(tmp_path)],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert (tmp_path / "walk_px.csv").exists()

    def test_error_record_on_stderr(self, tmp_path):
        proc = subprocess.run(
            [
                sys.executable, "-m", "cavitywalk", "walk",
                "--config", str(tmp_path / "missing.json"), "--out", str(tmp_path),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2
        record = json.loads(proc.stderr.strip().splitlines()[-1])
        assert record["error"] == "ConfigError"
