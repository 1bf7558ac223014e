"""Tests for the command-line front end."""

import json

import pytest

from src.forms.isotropy import SearchBudget
from src.main import USAGE_ERROR, VERIFY_FAILURE, main
from src.services import selftest

FAST = ["--budget-degree", "2", "--budget-trials", "300", "--seed", "0"]


def _stdout_json(capsys):
    return json.loads(capsys.readouterr().out)


class TestSymbolCommands:
    """Tests for the one-symbol subcommands."""

    def test_split_division(self, capsys):
        """Test that [t1, t2) is reported as a division algebra."""
        code = main(["split", "--field", "F2(t1,t2)", "--a", "t1", "--b", "t2", *FAST])
        assert code == 0
        payload = _stdout_json(capsys)
        assert payload["verdict"] == "division"
        assert "certificate" in payload

    def test_split_artin_schreier(self, capsys):
        """Test that [t^2 + t, t) is reported split with a witness."""
        code = main(["split", "--field", "F2(t)", "--a", "t^2 + t", "--b", "t", *FAST])
        assert code == 0
        payload = _stdout_json(capsys)
        assert payload["verdict"] == "split"
        assert set(payload["witness"]) == {"lam", "mu"}

    def test_norm_form(self, capsys):
        """Test that the norm form of [a,b) is <<b; a]]."""
        assert main(["norm-form", "--field", "F2(t1,t2)", "--a", "t1", "--b", "t2"]) == 0
        payload = _stdout_json(capsys)
        assert payload["pfister"]["bilinear_slots"] == ["t2"]
        assert payload["pfister"]["as_slot"] == "t1"

    def test_isomorphic_by_shift(self, capsys):
        """Test that an Artin-Schreier shift is recognised from the command line."""
        argv = ["isomorphic", "--field", "F2(t1,t2)", "--a", "t1", "--b", "t2", "--a2", "t1 + t2^2 + t2", "--b2", "t2"]
        assert main(argv + FAST) == 0
        assert _stdout_json(capsys)["verdict"] == "true"


class TestErrors:
    """Tests for exit codes on bad input."""

    def test_bad_element(self, capsys):
        """Test that an element outside the grammar exits with 1."""
        assert main(["split", "--field", "F2(t)", "--a", "t $ 1", "--b", "t"]) == USAGE_ERROR

    def test_zero_right_slot(self, capsys):
        """Test that [a, 0) is rejected as unsupported input."""
        assert main(["split", "--field", "F2(t)", "--a", "t", "--b", "0"]) == USAGE_ERROR

    def test_missing_symbol(self, capsys):
        """Test that a symbol command without input exits with 1."""
        assert main(["split", "--field", "F2(t)"]) == USAGE_ERROR

    def test_unknown_subcommand(self, capsys):
        """Test that argparse usage errors exit with 1."""
        with pytest.raises(SystemExit) as excinfo:
            main(["no-such-command"])
        assert excinfo.value.code == USAGE_ERROR

    def test_missing_instance_file(self, tmp_path, capsys):
        """Test that a missing instance file exits with 1."""
        assert main(["descend", "triple", "--in", str(tmp_path / "missing.json")]) == USAGE_ERROR

    def test_unknown_fixture(self, capsys):
        """Test that an unknown fixture kind exits with 1."""
        assert main(["fixtures", "--kind", "no_such_family"]) == USAGE_ERROR


class TestDescentRoundTrip:
    """Tests for fixtures, descend and verify chained through files."""

    def test_triple_round_trip(self, tmp_path, capsys):
        """Test that a generic triple descends and its report verifies."""
        instance, report = tmp_path / "triple.json", tmp_path / "report.json"
        assert main(["fixtures", "--kind", "generic_triple", "--n", "2", "--out", str(instance)]) == 0
        assert main(["descend", "triple", "--in", str(instance), "--out", str(report), *FAST]) == 0
        document = json.loads(report.read_text())
        assert document["status"] == "success"
        assert len(document["generators"]) == 3

        assert main(["verify", "--report", str(report), "--in", str(instance)]) == 0
        assert _stdout_json(capsys)["verified"] is True

    def test_tampered_report_fails(self, tmp_path, capsys):
        """Test that a report with a generator removed exits with 2."""
        instance, report = tmp_path / "triple.json", tmp_path / "report.json"
        main(["fixtures", "--kind", "generic_triple", "--n", "2", "--out", str(instance)])
        main(["descend", "triple", "--in", str(instance), "--out", str(report), *FAST])
        document = json.loads(report.read_text())
        document["generators"] = document["generators"][:-1]
        report.write_text(json.dumps(document))

        capsys.readouterr()
        assert main(["verify", "--report", str(report), "--in", str(instance)]) == VERIFY_FAILURE
        payload = _stdout_json(capsys)
        assert payload["verified"] is False
        assert payload["problems"]

    def test_quad_round_trip(self, tmp_path, capsys):
        """Test that case A goes through the quad pipeline from files."""
        instance, report = tmp_path / "quad.json", tmp_path / "report.json"
        assert main(["fixtures", "--kind", "quad_case_a", "--out", str(instance)]) == 0
        assert main(["descend", "quad", "--in", str(instance), "--out", str(report), *FAST]) == 0
        assert json.loads(report.read_text())["case"] == "A"
        assert main(["verify", "--report", str(report), "--in", str(instance)]) == 0

    def test_target_must_match_instance(self, tmp_path, capsys):
        """Test that descending a triple file as a quadruple exits with 1."""
        instance = tmp_path / "triple.json"
        main(["fixtures", "--kind", "generic_triple", "--out", str(instance)])
        assert main(["descend", "quad", "--in", str(instance)]) == USAGE_ERROR


class TestSelftest:
    """Tests for the selftest subcommand."""

    def test_single_suite(self, capsys):
        """Test that a selected suite runs and prints its table to stderr."""
        code = main(["selftest", "--only", "determinism", "--scale", "0.1"])
        captured = capsys.readouterr()
        payload = json.loads(captured.out)
        assert [s["name"] for s in payload["suites"]] == ["determinism"]
        assert "determinism" in captured.err
        assert code == (0 if payload["passed"] else VERIFY_FAILURE)

    def test_linkage_suite_needs_a_witness_for_hyperbolic_sums(self, monkeypatch):
        """Test that the linkage suite fails when the sum is hyperbolic but no common right slot is found."""
        monkeypatch.setattr(selftest, "inseparably_linked", lambda symbols, budget: None)
        monkeypatch.setattr(selftest, "sigma_criterion", lambda symbols, budget: True)
        result = selftest.linkage(SearchBudget(1 << 16, 1, 10, 0), 0.0)
        assert not result.passed
        assert "no common right slot" in result.detail
