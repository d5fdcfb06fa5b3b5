from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from incompat.cli import main
from incompat.errors import ParseError, ValidationError
from incompat.families import make_noisy_mub, make_noisy_pauli
from incompat.io import (
    REPORT_JSON_SCHEMA,
    assemblage_to_document,
    emit_report,
    parse_povm_document,
    parse_povm_file,
)


@pytest.fixture
def mub_file(tmp_path: Path) -> Path:
    doc = assemblage_to_document(make_noisy_mub(3, ("computational", "fourier"), 0.7))
    path = tmp_path / "mub.json"
    path.write_text(json.dumps(doc))
    return path


@pytest.fixture
def pauli_file(tmp_path: Path) -> Path:
    doc = assemblage_to_document(make_noisy_pauli(0.85, 0.85, 0.85))
    path = tmp_path / "pauli.json"
    path.write_text(json.dumps(doc))
    return path


class TestParse:
    def test_round_trip(self, mub_file):
        a = parse_povm_file(mub_file)
        b = make_noisy_mub(3, ("computational", "fourier"), 0.7)
        for x in range(2):
            for z in range(3):
                assert np.allclose(a.effect(z, x), b.effect(z, x), atol=1e-12)

    def test_completeness_violation_named(self):
        doc = assemblage_to_document(make_noisy_mub(3, ("computational",), 1.0))
        for eff in doc["measurements"][0]["effects"]:
            for row in eff:
                for cell in row:
                    cell[0] *= 0.9
        with pytest.raises(ValidationError, match="completeness"):
            parse_povm_document(doc)

    def test_truncated_file_position(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"dim": 3, "measurements": [')
        with pytest.raises(ParseError, match="line 1"):
            parse_povm_file(path)

    def test_missing_field(self):
        with pytest.raises(ParseError, match="dim"):
            parse_povm_document({"measurements": []})

    def test_non_pair_complex_entry(self):
        doc = {"dim": 1, "measurements": [{"effects": [[[1.0]]]}]}
        with pytest.raises(ParseError):
            parse_povm_document(doc)


class TestEmit:
    def test_byte_identical(self):
        rows = [{"a": 1.23456789, "b": "x"}, {"a": 2.0, "b": "y"}]
        for fmt in ("table", "csv", "json"):
            one = emit_report("demo", ["a", "b"], rows, fmt)
            two = emit_report("demo", ["a", "b"], rows, fmt)
            assert one == two

    def test_csv_six_decimals(self):
        out = emit_report("demo", ["v"], [{"v": 1 / 3}], "csv").decode()
        assert out.splitlines()[1] == "0.333333"

    def test_json_schema_valid(self):
        import jsonschema

        payload = json.loads(emit_report("demo", ["v"], [{"v": 0.5}], "json"))
        jsonschema.validate(payload, REPORT_JSON_SCHEMA)


class TestCli:
    def test_validate_ok(self, mub_file, capsys):
        assert main(["validate", str(mub_file)]) == 0
        assert "ok" in capsys.readouterr().out

    def test_usage_error_exit_code(self):
        assert main(["validate", "/nonexistent/file.json"]) == 1

    def test_jm_json_contains_parent(self, mub_file, tmp_path):
        out = tmp_path / "report.json"
        assert main(["--format", "json", "--output", str(out), "jm", str(mub_file)]) == 0
        payload = json.loads(out.read_text())
        assert payload["schema"] == "incompat-report/1"
        assert payload["rows"][0]["status"] == "incompatible"
        assert len(payload["extra"]["parent"]) == 9  # one block per strategy

    def test_jm_compatible_reports_nonnegative_mu(self, tmp_path):
        doc = assemblage_to_document(make_noisy_mub(3, ("computational", "fourier"), 0.5))
        path = tmp_path / "compat.json"
        path.write_text(json.dumps(doc))
        out = tmp_path / "report.json"
        assert main(["--format", "json", "--output", str(out), "jm", str(path)]) == 0
        payload = json.loads(out.read_text())
        assert payload["rows"][0]["status"] == "compatible"
        assert payload["rows"][0]["mu_star"] >= 0

    def test_classify_cg(self, mub_file, capsys):
        # global flags live before the subcommand; trailing ones are a usage error
        assert main(["classify", "cg", "--k", "2", str(mub_file), "--format", "csv"]) == 1
        assert main(["--format", "csv", "classify", "cg", "--k", "2", str(mub_file)]) == 0
        out = capsys.readouterr().out
        assert "compatible_plan_found" in out or "incompatible" in out

    def test_classify_dcm(self, pauli_file, capsys):
        assert main(["--format", "csv", "classify", "dcm", "--k", "2", "--grid", "13",
                     str(pauli_file)]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0].startswith("k,verdict")
        assert "incompatible" in out[1]

    def test_witness_rac(self, mub_file, capsys):
        assert main(["--format", "csv", "witness", "rac", str(mub_file)]) == 0
        header, row = capsys.readouterr().out.splitlines()
        assert header == "success,bound,advantage"

    def test_witness_bell_row(self, capsys):
        assert main(["--format", "csv", "witness", "bell", "--row", "01,01"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("a1_club,a2_club,delta_s_theory")
        assert float(lines[1].split(",")[2]) == pytest.approx(0.126, abs=0.002)

    def test_witness_chsh(self, capsys):
        assert main(["witness", "chsh", "--bloch-a", "1,0,0", "--bloch-b", "0,1,0"]) == 0
        assert "2.828427" in capsys.readouterr().out

    def test_determinism_same_job_twice(self, mub_file, tmp_path):
        outs = []
        for name in ("one", "two"):
            path = tmp_path / f"{name}.json"
            main(["--format", "json", "--output", str(path), "jm", str(mub_file)])
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]

    def test_dcm_rac_witness(self, pauli_file, capsys):
        assert main(["--format", "csv", "witness", "dcm-rac", "--grid", "41",
                     str(pauli_file)]) == 0
        header, row = capsys.readouterr().out.splitlines()
        assert header == "witnessed,min_success,bound"
        assert row.startswith("true")
