"""CLI contract: formats, exit codes, determinism, round trips."""

import json
import warnings
from pathlib import Path

import numpy as np
import pytest

from warpband import io
from warpband.cli import main
from warpband.paley_wiener import BandlimitedSignal, default_grid
from warpband.truncation import warp_signal
from warpband.warps import cubic_warp


def run(argv):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return main(argv)


def write_warp_file(path, coefficients, kind="polynomial"):
    io.write_json(path, {"format": io.WARP_FORMAT, "kind": kind, "coefficients": list(coefficients)})


def tree_bytes(root: Path) -> dict:
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


class TestGen:
    def test_sinc_synthesizes_to_one_at_zero(self, tmp_path):
        out = tmp_path / "o"
        assert run(["gen", "sinc", "--band", "3.14159", "--out", str(out)]) == 0
        loaded = io.load_signal(out / "signal.json")
        from warpband.paley_wiener import synthesize

        assert abs(synthesize(loaded.spectrum, 0.0) - 1.0) < 1e-4  # band ~ pi

    def test_negative_band_is_validation_error(self, tmp_path):
        assert run(["gen", "sinc", "--band", "-1", "--out", str(tmp_path / "o")]) == 2

    def test_random_spectrum_deterministic(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        assert run(["gen", "random-spectrum", "--band", "1", "--seed", "7", "--out", str(a)]) == 0
        assert run(["gen", "random-spectrum", "--band", "1", "--seed", "7", "--out", str(b)]) == 0
        assert (a / "signal.json").read_bytes() == (b / "signal.json").read_bytes()

    def test_manifest_written(self, tmp_path):
        out = tmp_path / "o"
        run(["gen", "sinc", "--band", "1", "--out", str(out)])
        doc = json.loads((out / "manifest.json").read_text())
        assert doc["format"] == io.MANIFEST_FORMAT
        assert "signal.json" in doc["outputs"]
        assert doc["config"]["seed"] == 0


class TestWarpCommand:
    def test_identity_round_trip_matches_library(self, tmp_path, capsys):
        out = tmp_path / "o"
        run(["gen", "sinc", "--band", "1", "--out", str(out)])
        wpath = tmp_path / "w.json"
        write_warp_file(wpath, [0.0, 1.0, 0.0, 1.0])  # x^3 + x
        code = run([
            "warp", "--signal", str(out / "signal.json"), "--warp", str(wpath),
            "--t-max", "50", "--out", str(out),
        ])
        assert code == 0
        loaded = io.load_signal(out / "warped.json")
        assert loaded.kind == io.KIND_TIME_SAMPLES
        assert loaded.meta["hypothesis_ok"] is True
        assert loaded.meta["measure_report"]["bound_c"] == pytest.approx(1.0)
        # byte-level agreement with the direct library call
        sig = BandlimitedSignal(io.load_signal(out / "signal.json").spectrum)
        direct = warp_signal(sig, cubic_warp(), default_grid(t_max=50.0))
        assert np.array_equal(direct.samples.values, loaded.samples.values)

    def test_malformed_json_is_format_error(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        out = tmp_path / "o"
        run(["gen", "sinc", "--band", "1", "--out", str(out)])
        assert run(["warp", "--signal", str(out / "signal.json"), "--warp", str(bad), "--out", str(out)]) == 2

    def test_time_samples_input_rejected(self, tmp_path):
        out = tmp_path / "o"
        run(["gen", "sinc", "--band", "1", "--out", str(out)])
        wpath = tmp_path / "w.json"
        write_warp_file(wpath, [0.0, 1.0], kind="affine")
        run(["warp", "--signal", str(out / "signal.json"), "--warp", str(wpath), "--t-max", "50", "--out", str(out)])
        code = run(["warp", "--signal", str(out / "warped.json"), "--warp", str(wpath), "--out", str(out)])
        assert code == 2


class TestTruncateCommand:
    @pytest.fixture()
    def warped_file(self, tmp_path):
        out = tmp_path / "o"
        run(["gen", "sinc", "--band", "1", "--out", str(out)])
        wpath = tmp_path / "w.json"
        write_warp_file(wpath, [0.0, 1.0, 0.0, 1.0])
        run(["warp", "--signal", str(out / "signal.json"), "--warp", str(wpath), "--t-max", "100", "--out", str(out)])
        return out

    def test_curve_monotone_and_csv_schema(self, warped_file):
        code = run(["truncate", "--signal", str(warped_file / "warped.json"), "--A", "1,2,4", "--out", str(warped_file)])
        assert code == 0
        lines = (warped_file / "error_curve.csv").read_text().strip().splitlines()
        assert lines[0] == "A,l2_error,tail_mass"
        errs = [float(line.split(",")[1]) for line in lines[1:]]
        assert errs == sorted(errs, reverse=True)
        assert (warped_file / "h_A1.json").exists()
        assert (warped_file / "h_A4.json").exists()

    def test_empty_cutoff_list_is_usage_error(self, warped_file):
        assert run(["truncate", "--signal", str(warped_file / "warped.json"), "--A", ",", "--out", str(warped_file)]) == 1

    def test_unsorted_cutoffs_usage_error(self, warped_file):
        assert run(["truncate", "--signal", str(warped_file / "warped.json"), "--A", "4,1", "--out", str(warped_file)]) == 1

    def test_undecayed_window_is_numerical_error_with_no_partial_files(self, tmp_path):
        # band-1 cardinal signal decays like 1/t: at t_max=20 the window-end
        # check fails hard inside the transform, after the output dir is known
        # but before any artifact is produced
        out = tmp_path / "o"
        run(["gen", "sinc", "--band", "1", "--out", str(out)])
        wpath = tmp_path / "w.json"
        write_warp_file(wpath, [0.0, 1.0], kind="affine")
        run(["warp", "--signal", str(out / "signal.json"), "--warp", str(wpath), "--t-max", "20", "--out", str(out)])
        code = run(["truncate", "--signal", str(out / "warped.json"), "--A", "1,2", "--out", str(out)])
        assert code == 3
        assert not (out / "error_curve.csv").exists()
        assert not (out / "h_A1.json").exists()


class TestClassifyCommand:
    def test_contractive_affine_prints_preserves(self, tmp_path, capsys):
        wpath = tmp_path / "w.json"
        write_warp_file(wpath, [3.0, 0.5], kind="affine")
        assert run(["classify", "--warp", str(wpath), "--out", str(tmp_path / "o")]) == 0
        out = capsys.readouterr().out
        assert "preserves: true" in out

    def test_cubic_prints_non_affine(self, tmp_path, capsys):
        wpath = tmp_path / "w.json"
        write_warp_file(wpath, [0.0, 1.0, 0.0, 1.0])
        run(["classify", "--warp", str(wpath), "--out", str(tmp_path / "o")])
        out = capsys.readouterr().out
        assert "preserves: false" in out
        assert "non_affine" in out

    def test_weighted_band(self, tmp_path, capsys):
        wpath = tmp_path / "w.json"
        write_warp_file(wpath, [0.0, 1.0], kind="affine")
        run(["classify", "--warp", str(wpath), "--band", "1", "--support=-1,1", "--out", str(tmp_path / "o")])
        assert "weighted_band: 2" in capsys.readouterr().out

    def test_constant_warp_validation_error(self, tmp_path):
        wpath = tmp_path / "w.json"
        write_warp_file(wpath, [3.0])
        assert run(["classify", "--warp", str(wpath), "--out", str(tmp_path / "o")]) == 2


class TestGramProject:
    def test_identity_gram_is_identity_matrix(self, tmp_path):
        wpath = tmp_path / "w.json"
        write_warp_file(wpath, [0.0, 1.0], kind="affine")
        out = tmp_path / "o"
        assert run(["gram", "--warp", str(wpath), "--band", str(np.pi), "--N", "10", "--out", str(out)]) == 0
        gram = io.load_gram(out / "gram.json")
        assert np.max(np.abs(gram.matrix - np.eye(21))) < 1e-12

    def test_project_round_trip(self, tmp_path, capsys):
        wpath = tmp_path / "w.json"
        write_warp_file(wpath, [0.0, 1.0], kind="affine")
        out = tmp_path / "o"
        run(["gen", "sinc", "--band", str(np.pi), "--out", str(out)])
        run(["gram", "--warp", str(wpath), "--band", str(np.pi), "--N", "8", "--out", str(out)])
        code = run([
            "project", "--gram", str(out / "gram.json"), "--signal", str(out / "signal.json"),
            "--warp", str(wpath), "--out", str(out),
        ])
        assert code == 0
        coeffs = io.load_coeffs(out / "coeffs.json")
        # identity gram at band pi: coefficients equal the node samples;
        # the sinc signal samples at integer nodes are delta at 0
        want = np.zeros(17)
        want[8] = 1.0
        assert np.max(np.abs(coeffs.coeffs - want)) < 1e-6


class TestDbrCommands:
    def test_kernel_check_reports_tiny_error(self, tmp_path, capsys):
        out = tmp_path / "o"
        code = run(["dbr", "kernel-check", "--exp-rate", "1", "--out", str(out)])
        assert code == 0
        doc = json.loads((out / "dbr_kernel_check.json").read_text())
        assert doc["max_relative_error"] < 1e-12

    def test_affine_bound_exponential(self, tmp_path, capsys):
        out = tmp_path / "o"
        code = run(["dbr", "affine-bound", "--exp-rate", "1", "--a", "0.5", "--b", "1", "--out", str(out)])
        assert code == 0
        assert "bounded: true" in capsys.readouterr().out

    def test_affine_bound_hypothesis_violation(self, tmp_path):
        assert run(["dbr", "affine-bound", "--exp-rate", "1", "--a", "1.5", "--out", str(tmp_path / "o")]) == 2

    def test_measure_check_cauchy(self, tmp_path, capsys):
        spath = tmp_path / "s.json"
        io.write_json(spath, {"format": io.STRUCTURE_FORMAT, "kind": "poly-exp", "a": 0.0, "poly": [[0.0, 1.0], [1.0, 0.0]]})
        wpath = tmp_path / "w.json"
        write_warp_file(wpath, [0.0, 1.0], kind="affine")
        out = tmp_path / "o"
        code = run([
            "dbr", "measure-check", "--structure", str(spath), "--warp", str(wpath),
            "--count", "10", "--out", str(out),
        ])
        assert code == 0
        doc = json.loads((out / "dbr_measure_check.json").read_text())
        assert doc["c_estimate"] == pytest.approx(1.0, rel=1e-9)

    def test_custom_structure_file_rejected(self, tmp_path):
        spath = tmp_path / "s.json"
        io.write_json(spath, {"format": io.STRUCTURE_FORMAT, "kind": "custom-unsupported"})
        wpath = tmp_path / "w.json"
        write_warp_file(wpath, [0.0, 1.0], kind="affine")
        assert run(["dbr", "measure-check", "--structure", str(spath), "--warp", str(wpath), "--out", str(tmp_path / "o")]) == 2


class TestDeterminism:
    def test_full_pipeline_byte_identical(self, tmp_path):
        wpath = tmp_path / "w.json"
        write_warp_file(wpath, [0.0, 1.0, 0.0, 1.0])
        trees = []
        for name in ("run1", "run2"):
            out = tmp_path / name
            assert run(["gen", "random-spectrum", "--band", "1", "--seed", "11", "--out", str(out)]) == 0
            assert run(["warp", "--signal", str(out / "signal.json"), "--warp", str(wpath), "--t-max", "50", "--out", str(out)]) == 0
            assert run(["truncate", "--signal", str(out / "warped.json"), "--A", "2,4", "--out", str(out)]) == 0
            assert run(["dbr", "kernel-check", "--exp-rate", "1", "--seed", "11", "--out", str(out)]) == 0
            trees.append(tree_bytes(out))
        assert trees[0].keys() == trees[1].keys()
        for name in trees[0]:
            assert trees[0][name] == trees[1][name], f"{name} differs between runs"


class TestConfigPrecedence:
    def test_config_file_applies_and_flags_win(self, tmp_path):
        cfg_path = tmp_path / "cfg.json"
        io.write_json(cfg_path, {"format": io.CONFIG_FORMAT, "seed": 3, "t_max": 50.0})
        out1 = tmp_path / "o1"
        out2 = tmp_path / "o2"
        run(["gen", "random-spectrum", "--band", "1", "--config", str(cfg_path), "--out", str(out1)])
        doc1 = json.loads((out1 / "manifest.json").read_text())
        assert doc1["config"]["seed"] == 3
        assert doc1["config"]["t_max"] == 50.0
        run(["gen", "random-spectrum", "--band", "1", "--config", str(cfg_path), "--seed", "9", "--out", str(out2)])
        doc2 = json.loads((out2 / "manifest.json").read_text())
        assert doc2["config"]["seed"] == 9

    def test_env_var_fallback(self, tmp_path, monkeypatch):
        cfg_path = tmp_path / "cfg.json"
        io.write_json(cfg_path, {"format": io.CONFIG_FORMAT, "seed": 5})
        monkeypatch.setenv("WARPBAND_CONFIG", str(cfg_path))
        out = tmp_path / "o"
        run(["gen", "random-spectrum", "--band", "1", "--out", str(out)])
        doc = json.loads((out / "manifest.json").read_text())
        assert doc["config"]["seed"] == 5


class TestJsonRendering:
    def test_seventeen_digit_round_trip(self):
        vals = [0.05, 1.0 / 3.0, np.pi, 2.0 ** -52, 1e300]
        for v in vals:
            assert float(io.format_float(v)) == v

    def test_usage_error_exit_code(self):
        assert run(["frobnicate"]) == 1
