"""Tests for the JSON documents and their repository."""

import json

import pytest
from pydantic import ValidationError

from src.descent import triple_descend, verify_descent
from src.descent.fixtures import generic_triple, quad_case_a
from src.exceptions import InstanceFormatError
from src.forms.isotropy import SearchBudget
from src.models.codec import decode_budget, decode_report, encode_report
from src.models.schemas import BudgetModel, DescentReportModel, InstanceFile
from src.repositories.instance_repository import InstanceRepository, dump_json
from src.services.algebra_service import AlgebraService

BUDGET = SearchBudget(exhaustive_limit=1 << 16, degree_bound=2, trials=500, seed=0)


class TestInstanceFile:
    """Tests for instance validation."""

    def test_unknown_keys_rejected(self):
        """Test that extra keys are a validation error."""
        with pytest.raises(ValidationError):
            InstanceFile.model_validate(
                {"field": "F2(t)", "kind": "symbol", "symbol": {"a": "t", "b": "t"}, "colour": "red"}
            )

    def test_quad_needs_four_symbols(self):
        """Test that a quad payload with three symbols is rejected."""
        with pytest.raises(ValidationError):
            InstanceFile.model_validate(
                {"field": "F2(t)", "kind": "quad", "quad": {"symbols": [{"a": "t", "b": "t"}] * 3}}
            )

    def test_missing_payload(self):
        """Test that a kind without its payload is an instance format error."""
        instance = InstanceFile(field="F2(t)", kind="triple")
        with pytest.raises(InstanceFormatError):
            AlgebraService(BUDGET).decode_instance(instance)

    def test_budget_block(self):
        """Test that a budget block becomes a SearchBudget."""
        budget = decode_budget(BudgetModel(degree_bound=3, trials=10, seed=5))
        assert (budget.degree_bound, budget.trials, budget.seed) == (3, 10, 5)
        assert decode_budget(None) == SearchBudget.default()


class TestInstanceRepository:
    """Tests for reading and writing documents."""

    def test_fixture_round_trip(self, tmp_path):
        """Test that a written fixture reads back to the same object."""
        service = AlgebraService(BUDGET)
        path = tmp_path / "quad.json"
        InstanceRepository().write(service.fixture("quad_case_a", {}), path)
        _, instance = service.decode_instance(InstanceRepository().load_instance(path))
        assert instance == quad_case_a()

    def test_invalid_json(self, tmp_path):
        """Test that unreadable and malformed files raise InstanceFormatError."""
        repository = InstanceRepository()
        with pytest.raises(InstanceFormatError):
            repository.load_instance(tmp_path / "missing.json")
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(InstanceFormatError):
            repository.load_instance(path)

    def test_canonical_json(self):
        """Test that dumps are indented and key-sorted."""
        assert dump_json({"b": 1, "a": [1]}) == '{\n  "a": [\n    1\n  ],\n  "b": 1\n}\n'


class TestReportCodec:
    """Tests for descent reports on the wire."""

    def test_report_survives_json(self):
        """Test that a report re-verifies after a JSON round trip."""
        triple = generic_triple(2)
        report = triple_descend(triple, BUDGET)
        text = encode_report(report).model_dump_json(exclude_none=True)
        restored = decode_report(DescentReportModel.model_validate(json.loads(text)))
        assert restored.generators == report.generators
        assert verify_descent(restored, triple)

    def test_triple_report_with_symbols_rejected(self):
        """Test that a triple report may not carry descended symbols."""
        model = DescentReportModel(
            kind="triple",
            case="anisotropic",
            status="success",
            field="F2(t)",
            descended_field="F2(u1)",
            generators=["t"],
            descended_symbols=[{"a": "u1", "b": "u1"}],
        )
        with pytest.raises(InstanceFormatError):
            decode_report(model)
