import json
import math

import pytest

from clext.cli import main


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestVerifyCommand:
    def test_worked_spec_passes(self, capsys):
        code, out, _ = run_cli(
            ["verify", "--lambda", "3", "--alpha", "1,-0.5,-0.5", "--dim", "30"], capsys
        )
        assert code == 0
        report = json.loads(out)
        assert report["header"]["command"] == "verify"
        assert report["header"]["lambda"] == 3
        assert report["header"]["seed"] == 42
        assert report["body"]["all_pass"] is True
        ids = {r["id"] for r in report["body"]["defining_relations"]["relations"]}
        assert {"commutator_T", "commutator_P", "quommutation_a"} <= ids

    def test_kappa_input(self, capsys):
        code, out, _ = run_cli(["verify", "--lambda", "2", "--kappa", "0.5"], capsys)
        assert code == 0
        assert json.loads(out)["header"]["alpha"] == [0.5, -0.5]

    def test_bad_sum_is_validation_error(self, capsys):
        code, _, err = run_cli(["verify", "--lambda", "3", "--alpha", "1,-0.5,-0.4"], capsys)
        assert code == 2
        assert "sum" in err
        assert "0.09999999999999998" in err

    def test_alpha_and_kappa_conflict(self, capsys):
        code, _, err = run_cli(
            ["verify", "--lambda", "2", "--alpha", "0,0", "--kappa", "0"], capsys
        )
        assert code == 2
        assert "not both" in err

    def test_lambda_cap(self, capsys):
        code, _, err = run_cli(["verify", "--lambda", "65", "--alpha", "0"], capsys)
        assert code == 2
        assert "capped" in err

    def test_missing_parameters(self, capsys):
        code, _, err = run_cli(["verify", "--lambda", "3"], capsys)
        assert code == 2
        assert "--alpha or --kappa" in err

    def test_csv_not_available(self, capsys):
        code, _, err = run_cli(
            ["verify", "--lambda", "2", "--alpha", "0,0", "--format", "csv"], capsys
        )
        assert code == 2


class TestConfigFile:
    def test_config_supplies_values(self, capsys, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"lambda": 3, "alpha": [1, -0.5, -0.5], "dim": 15}))
        code, out, _ = run_cli(["verify", "--config", str(path)], capsys)
        assert code == 0
        assert json.loads(out)["header"]["dim"] == 15

    def test_flags_override_config(self, capsys, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"lambda": 3, "alpha": [1, -0.5, -0.5], "dim": 15}))
        code, out, _ = run_cli(["verify", "--config", str(path), "--dim", "18"], capsys)
        assert code == 0
        assert json.loads(out)["header"]["dim"] == 18

    def test_bad_sum_in_config(self, capsys, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"lambda": 3, "alpha": [1, -0.5, -0.4]}))
        code, _, err = run_cli(["verify", "--config", str(path)], capsys)
        assert code == 2
        assert "sum" in err

    def test_unknown_key_rejected(self, capsys, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"lambda": 2, "alpha": [0, 0], "dimension": 5}))
        code, _, err = run_cli(["verify", "--config", str(path)], capsys)
        assert code == 2
        assert "dimension" in err

    def test_command_mismatch(self, capsys, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps({"command": "spectrum", "lambda": 2, "alpha": [0, 0]}))
        code, _, err = run_cli(["verify", "--config", str(path)], capsys)
        assert code == 2

    def test_malformed_json(self, capsys, tmp_path):
        path = tmp_path / "run.json"
        path.write_text("{not json")
        code, _, err = run_cli(["verify", "--config", str(path)], capsys)
        assert code == 2
        assert "JSON" in err


class TestSpectrumCommand:
    def test_csv_rows(self, capsys):
        code, out, _ = run_cli(
            ["spectrum", "--lambda", "3", "--alpha", "1,-0.5,-0.5", "--dim", "4",
             "--format", "csv"],
            capsys,
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "n,energy,sector"
        assert lines[1] == "0,1.0,0"
        assert lines[2] == "1,2.25,1"
        assert lines[4] == "3,4.0,0"

    def test_tsv_rows(self, capsys):
        code, out, _ = run_cli(
            ["spectrum", "--lambda", "2", "--alpha", "0,0", "--dim", "3",
             "--format", "tsv"],
            capsys,
        )
        assert code == 0
        assert out.splitlines()[1] == "0\t0.5\t0"

    def test_json_report_is_deterministic(self, capsys, tmp_path):
        first = tmp_path / "a.json"
        second = tmp_path / "b.json"
        for target in (first, second):
            code, _, _ = run_cli(
                ["spectrum", "--lambda", "3", "--alpha", "1,-0.5,-0.5",
                 "--out", str(target)],
                capsys,
            )
            assert code == 0
        assert first.read_bytes() == second.read_bytes()


class TestClassifyCommand:
    def test_finite_dimensional(self, capsys):
        code, out, _ = run_cli(["classify", "--lambda", "2", "--alpha", "-1,1"], capsys)
        assert code == 0
        body = json.loads(out)["body"]
        assert body["kind"] == "finite-dimensional"
        assert body["dim"] == 1

    def test_non_unitary_is_an_outcome(self, capsys):
        code, out, _ = run_cli(
            ["classify", "--lambda", "3", "--alpha", "-1.5,0.5,1"], capsys
        )
        assert code == 0
        assert json.loads(out)["body"]["kind"] == "non-unitary"


class TestPssqmCommands:
    def test_solve_worked_example(self, capsys):
        code, out, _ = run_cli(
            ["pssqm-solve", "--p", "2", "--mu", "0", "--alpha", "1,-0.5,-0.5"], capsys
        )
        assert code == 0
        body = json.loads(out)["body"]
        assert body["p"] == 2
        assert abs(body["r"][0] - (-2.5)) < 1e-12
        assert abs(body["r"][1] - 1.0) < 1e-12
        assert abs(body["r"][2]) < 1e-12
        assert abs(body["ground_energy"] - (-0.25)) < 1e-12

    def test_check_passes_end_to_end(self, capsys):
        code, out, _ = run_cli(
            ["pssqm-check", "--p", "2", "--mu", "0", "--alpha", "1,-0.5,-0.5"], capsys
        )
        assert code == 0
        body = json.loads(out)["body"]
        assert body["pass"] is True
        assert body["breaking"]["breaking"] == "unbroken"
        assert body["relations"]["nonvanishing_witness"] > 0.1

    def test_tampered_shifts_fail(self, capsys):
        code, _, _ = run_cli(
            ["pssqm-check", "--p", "2", "--mu", "0", "--alpha", "1,-0.5,-0.5",
             "--r", "-2.4,1,0"],
            capsys,
        )
        assert code == 1

    def test_order_lambda_mismatch(self, capsys):
        code, _, err = run_cli(
            ["pssqm-check", "--p", "2", "--lambda", "4", "--alpha", "0,0,0,0"], capsys
        )
        assert code == 2
        assert "p + 1" in err

    def test_eta_override(self, capsys):
        eta = f"{math.sqrt(3)},1"  # norms 3 + 1 = 2p for p = 2
        code, out, _ = run_cli(
            ["pssqm-check", "--p", "2", "--mu", "1", "--alpha", "1,-0.5,-0.5",
             "--eta", eta],
            capsys,
        )
        assert code == 0
        assert json.loads(out)["body"]["breaking"]["ground_multiplicity"] == 2

    def test_bad_eta_norm(self, capsys):
        code, _, err = run_cli(
            ["pssqm-check", "--p", "2", "--mu", "0", "--alpha", "1,-0.5,-0.5",
             "--eta", "1,1"],
            capsys,
        )
        assert code == 2

    def test_sampling_mode(self, capsys):
        code, out, _ = run_cli(
            ["pssqm-check", "--p", "2", "--mu", "1", "--samples", "4", "--seed", "7"],
            capsys,
        )
        assert code == 0
        body = json.loads(out)["body"]
        assert body["samples"] == 4
        assert len(body["rows"]) == 4
        assert body["all_pass"] is True
        assert sum(body["sign_counts"].values()) == 4


class TestSsqmCommand:
    def test_both_variants_pass(self, capsys):
        code, out, _ = run_cli(["ssqm", "--lambda", "2", "--alpha", "0,0"], capsys)
        assert code == 0
        body = json.loads(out)["body"]
        assert [v["variant"] for v in body["variants"]] == ["unbroken", "broken"]
        assert body["all_pass"] is True

    def test_single_variant(self, capsys):
        code, out, _ = run_cli(
            ["ssqm", "--lambda", "2", "--alpha", "0.4,-0.4", "--variant", "broken"],
            capsys,
        )
        assert code == 0
        body = json.loads(out)["body"]
        assert len(body["variants"]) == 1
        assert abs(body["variants"][0]["ground_energy"] - 1.4) < 1e-12

    def test_needs_lambda_two(self, capsys):
        code, _, err = run_cli(["ssqm", "--lambda", "3", "--alpha", "0,0,0"], capsys)
        assert code == 2


class TestBdScanCommand:
    def test_small_scan(self, capsys):
        code, out, _ = run_cli(
            ["bd-scan", "--mu", "0", "--scan-points", "5", "--dim", "18"], capsys
        )
        assert code == 0
        body = json.loads(out)["body"]
        assert len(body["rows"]) == 5
        assert body["compatible_parameters"] == [-1.0]

    def test_csv_rows(self, capsys):
        code, out, _ = run_cli(
            ["bd-scan", "--mu", "0", "--scan-points", "3", "--dim", "18",
             "--format", "csv"],
            capsys,
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "parameter,residual"
        assert len(lines) == 4

    def test_requires_order_two(self, capsys):
        code, _, err = run_cli(
            ["bd-scan", "--lambda", "4", "--alpha", "0,0,0,0"], capsys
        )
        assert code == 2


class TestDumpCommand:
    def test_column_major_entries(self, capsys):
        code, out, _ = run_cli(
            ["dump", "--lambda", "2", "--alpha", "0,0", "--dim", "3", "--matrix", "a"],
            capsys,
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 9
        # a[0,1] = 1 sits at column-major position 3; a[1,2] = sqrt(2) at 7
        assert lines[3] == "1.0,0.0"
        assert lines[7] == f"{math.sqrt(2.0)!r},0.0"
        assert lines[0] == "0.0,0.0"

    def test_projector_dump(self, capsys):
        code, out, _ = run_cli(
            ["dump", "--lambda", "2", "--alpha", "0,0", "--dim", "2", "--matrix", "p1"],
            capsys,
        )
        assert code == 0
        assert out.strip().splitlines() == ["0.0,0.0", "0.0,0.0", "0.0,0.0", "1.0,0.0"]

    def test_unknown_matrix(self, capsys):
        code, _, err = run_cli(
            ["dump", "--lambda", "2", "--alpha", "0,0", "--matrix", "z"], capsys
        )
        assert code == 2

    def test_atomic_write_to_file(self, capsys, tmp_path):
        target = tmp_path / "matrix.txt"
        code, out, _ = run_cli(
            ["dump", "--lambda", "2", "--alpha", "0,0", "--dim", "2",
             "--matrix", "num", "--out", str(target)],
            capsys,
        )
        assert code == 0
        assert target.read_text().splitlines() == ["0.0,0.0", "0.0,0.0", "0.0,0.0", "1.0,0.0"]
        assert "written" in out
