import json

import numpy as np
import pytest

from pfkit.cli import main, parse_matrix_literal, ParseFailure


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestMatrixLiteral:
    def test_real_entries(self):
        m = parse_matrix_literal("0,1;1,0")
        assert np.array_equal(m, np.array([[0, 1], [1, 0]], dtype=complex))

    def test_complex_entries(self):
        m = parse_matrix_literal("0.5+0.866i,1;1,-0.5-0.866i")
        assert m[0, 0] == 0.5 + 0.866j
        assert m[1, 1] == -0.5 - 0.866j

    def test_pure_imaginary(self):
        assert parse_matrix_literal("2i,1;1,-2i")[0, 0] == 2j

    def test_bad_entry_position(self):
        with pytest.raises(ParseFailure) as exc:
            parse_matrix_literal("1,2;x,4")
        assert exc.value.row == 2 and exc.value.col == 1

    def test_bad_shape(self):
        with pytest.raises(ParseFailure):
            parse_matrix_literal("1,2,3;4,5,6")
        with pytest.raises(ParseFailure):
            parse_matrix_literal("1,2")


class TestAnalyze:
    def test_pauli_x(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", "--matrix", "0,1;1,0")
        assert code == 0
        doc = json.loads(out)
        assert doc["phase"] == "unbroken"
        assert doc["decomposition"]["rho"] == [-1.0, 0.0]
        assert doc["residuals"]["h_hermiticity"] < 1e-9
        assert doc["pt"]["pt_symmetric"] is True

    def test_defective_exit_2(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", "--matrix", "1,1;0,1")
        assert code == 2
        doc = json.loads(out)
        assert doc["phase"] == "ep"
        assert doc["error"] == "ExceptionalPoint"

    def test_parse_error_exit_1(self, capsys):
        code, _, err = run_cli(capsys, "analyze", "--matrix", "1,zz;0,1")
        assert code == 1
        doc = json.loads(err)
        assert doc["row"] == 1 and doc["col"] == 2

    def test_dg_model_worked_example(self, capsys, tmp_path):
        path = tmp_path / "dg.json"
        path.write_text(json.dumps({
            "model": "DG",
            "params": {"r": 1, "s": 0.5, "t_c": 1,
                       "theta": np.pi / 6, "phi": np.pi / 6}}))
        code, out, _ = run_cli(capsys, "analyze", "--model", str(path),
                               "--branch", "minus")
        assert code == 0
        doc = json.loads(out)
        assert abs(doc["decomposition"]["rho"][0] - 1.366) < 1e-3
        assert abs(doc["decomposition"]["omega"][0] + 1.0) < 1e-3
        h = doc["fermionic"]["h"]
        assert abs(h[0][0][0] - 0.832) < 5e-3
        assert abs(h[0][1][0] - 0.393) < 5e-3
        assert abs(h[0][1][1] - 0.306) < 5e-3
        assert abs(h[1][1][0] - 0.9) < 5e-3

    def test_rel_no_pf_exit_2(self, capsys, tmp_path):
        path = tmp_path / "rel.json"
        path.write_text(json.dumps({
            "model": "Rel", "params": {"m": 1, "c": 1, "px": -1, "v": 1}}))
        code, out, _ = run_cli(capsys, "analyze", "--model", str(path))
        assert code == 2
        doc = json.loads(out)
        assert doc["error"] == "NoPseudoFermions"
        assert doc["phase"] == "unbroken"

    def test_jsm_at_coalescence_exit_2(self, capsys, tmp_path):
        path = tmp_path / "jsm.json"
        path.write_text(json.dumps({"model": "JSM",
                                    "params": {"a_r": 1, "b_r": 1}}))
        code, out, _ = run_cli(capsys, "analyze", "--model", str(path))
        assert code == 2
        doc = json.loads(out)
        assert doc["phase"] == "ep"
        assert doc["error"] == "ExceptionalPoint"

    def test_bad_model_json_exit_1(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _, err = run_cli(capsys, "analyze", "--model", str(path))
        assert code == 1
        assert "line" in json.loads(err)


class TestVerify:
    def test_single_draw_passes_with_full_table(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--count", "1", "--seed", "7")
        assert code == 0
        lines = [l for l in out.splitlines() if "gate" in l]
        assert len(lines) >= 12
        assert out.strip().endswith("result: PASS")

    def test_bit_reproducible(self, capsys):
        _, out1, _ = run_cli(capsys, "verify", "--count", "25", "--seed", "3")
        _, out2, _ = run_cli(capsys, "verify", "--count", "25", "--seed", "3")
        assert out1 == out2

    def test_fault_injection_fails(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "--count", "2", "--seed", "1",
                               "--inject-fault")
        assert code != 0
        assert "FAIL" in out


class TestSweepCommand:
    def config(self, tmp_path, **extra):
        doc = {"model": "DG",
               "params": {"r": 1, "s": 1, "t_c": 1, "phi": 0,
                          "theta": {"from": 0, "to": np.pi, "steps": 201}}}
        doc.update(extra)
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(doc))
        return path

    def test_writes_csv(self, capsys, tmp_path):
        cfg = self.config(tmp_path)
        out_path = tmp_path / "rows.csv"
        code, _, _ = run_cli(capsys, "sweep", "--config", str(cfg),
                             "--out", str(out_path))
        assert code == 0
        lines = out_path.read_text().strip().split("\n")
        assert len(lines) == 202
        assert lines[0].startswith("p1,p2,re_e0")

    def test_stdout_identical_to_file(self, capsys, tmp_path):
        cfg = self.config(tmp_path)
        out_path = tmp_path / "rows.csv"
        run_cli(capsys, "sweep", "--config", str(cfg), "--out", str(out_path))
        code, out, _ = run_cli(capsys, "sweep", "--config", str(cfg))
        assert code == 0
        assert out == out_path.read_text()

    def test_worker_override_identical(self, capsys, tmp_path):
        cfg = self.config(tmp_path)
        _, out1, _ = run_cli(capsys, "sweep", "--config", str(cfg))
        _, out2, _ = run_cli(capsys, "sweep", "--config", str(cfg),
                             "--workers", "3")
        assert out1 == out2

    def test_json_output_flag(self, capsys, tmp_path):
        cfg = self.config(tmp_path)
        code, out, _ = run_cli(capsys, "sweep", "--config", str(cfg),
                               "--output", "json")
        assert code == 0
        doc = json.loads(out)
        assert len(doc["rows"]) == 201

    def test_invalid_grid_exit_1(self, capsys, tmp_path):
        cfg = self.config(tmp_path, params={"r": 1})
        code, _, err = run_cli(capsys, "sweep", "--config", str(cfg))
        assert code == 1
        assert "error" in json.loads(err)

    def test_missing_config_exit_1(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "sweep", "--config",
                               str(tmp_path / "nope.json"))
        assert code == 1
