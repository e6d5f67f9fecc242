import json
import subprocess
import sys

import jsonschema
import pytest

from quadricbundles import reports
from quadricbundles.cli import main


def run_cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "quadricbundles", *argv],
        capture_output=True,
        text=True,
    )


class TestExitCodes:
    def test_pass_suite(self, capsys):
        assert main(["run", "normal-forms"]) == 0
        out = capsys.readouterr().out
        assert "normal-forms: pass" in out

    def test_attention_suite_exits_zero(self, capsys):
        assert main(["run", "appendix", "--gamma-exp", "auto"]) == 0
        assert "attention" in capsys.readouterr().out

    def test_forced_printed_exponent_fails(self, capsys):
        assert main(["run", "appendix", "--gamma-exp", "-1"]) == 1
        assert "fail" in capsys.readouterr().out

    def test_usage_error_on_bad_entry(self):
        result = run_cli("run", "section5", "--entry", "9")
        assert result.returncode == 2
        assert "2..8" in result.stderr

    def test_usage_error_on_unknown_suite(self):
        result = run_cli("run", "everything")
        assert result.returncode == 2

    def test_usage_error_on_small_window(self):
        result = run_cli("run", "appendix", "--window", "2")
        assert result.returncode == 2

    def test_single_entry_runs(self, capsys):
        assert main(["run", "section5", "--entry", "4"]) == 0
        assert main(["run", "normal-forms", "--entry", "7"]) == 0
        capsys.readouterr()


class TestSingleCommands:
    def test_verify_normal_forms_payload(self, capsys):
        assert main(["verify-normal-forms", "--entry", "4"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["entry"] == 4
        assert payload["equation"] == "t1*t2*K^2 - t2*L^2 + M^2 - N^2"
        assert payload["discriminant"] == "t1*t2^2"
        assert payload["certificate"]["index"] == 2
        assert {"zeroset": [2], "rank": 2} in payload["strata"]

    def test_verify_section5_payload(self, capsys):
        assert main(["verify-section5", "--entry", "8"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["monomial"] == "s1^2*s2^2*s3^2"
        assert payload["map"]["projective"] == [
            "s3*A",
            "s1*B",
            "s1*s2*C",
            "s1*s2*s3*D",
        ]

    def test_verify_appendix_payload(self, capsys):
        assert main(["verify-appendix"]) == 0
        payload = json.loads(capsys.readouterr().out)
        checks = {item["check"]: item for item in payload["items"]}
        assert len(checks["containment"]["certificates"]) == 27
        assert checks["freeness"]["determinant"] == "64*r^13*s^12*t^12"
        assert checks["graded-equality"]["checked"] == 125
        assert checks["nonflatness"]["gamma_exp_used"] == -2

    def test_brauer_hilbert(self, capsys):
        assert main(["brauer", "hilbert", "--a", "-1", "--b", "-1", "--place", "real"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["symbol"] == -1
        assert payload["agree"]

    def test_brauer_hilbert_rejects_composite_place(self):
        result = run_cli("brauer", "hilbert", "--a", "2", "--b", "3", "--place", "6")
        assert result.returncode == 2

    def test_brauer_albert(self, capsys):
        assert main(["brauer", "albert", "--p", "3", "--q", "5", "--r", "7", "--d", "2"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["albert_pair_form"] == "<3, 2, -6, -30, -42, 35>"
        assert payload["invariants"]["isotropy_form"]["disc"] == -1
        assert payload["consistent"]

    def test_brauer_albert_rejects_square_d(self):
        result = run_cli("brauer", "albert", "--p", "3", "--q", "5", "--r", "7", "--d", "4")
        assert result.returncode == 2


class TestReports:
    def test_every_suite_validates_against_schema(self):
        for name in reports.SUITES:
            payload = reports.run_suite(name, seed=3)
            jsonschema.validate(payload, reports.REPORT_SCHEMA)

    def test_aggregate_validates_against_schema(self):
        payload = reports.run_all(seed=3)
        jsonschema.validate(payload, reports.REPORT_SCHEMA)

    def test_brauer_report_is_seed_deterministic(self):
        a = reports.run_brauer(seed=11, symbol_samples=40, product_samples=20,
                               doubling_samples=10, descent_samples=5)
        b = reports.run_brauer(seed=11, symbol_samples=40, product_samples=20,
                               doubling_samples=10, descent_samples=5)
        assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
        c = reports.run_brauer(seed=12, symbol_samples=40, product_samples=20,
                               doubling_samples=10, descent_samples=5)
        assert json.dumps(a, sort_keys=True) != json.dumps(c, sort_keys=True)

    def test_json_file_roundtrip(self, tmp_path, capsys):
        path = tmp_path / "report.json"
        assert main(["run", "normal-forms", "--json", str(path)]) == 0
        capsys.readouterr()
        payload = json.loads(path.read_text())
        assert payload["suite"] == "normal-forms"
        assert payload["status"] == "pass"
        assert len(payload["items"]) == 8

    def test_reports_embed_canonical_polynomials(self):
        payload = reports.run_normal_forms()
        equations = [item["equation"] for item in payload["items"]]
        assert "K^2 - L^2 + M^2 - N^2" in equations
        # canonical order sorts terms by exponent vector, so the t-bearing
        # terms of entry 7 come before the constant-coefficient M^2 term
        assert "t1*t2*t3*K^2 - t2*L^2 - t3*N^2 + M^2" in equations
