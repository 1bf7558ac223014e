"""Algebra service orchestrating parsing, solving and report assembly."""

import logging
from typing import Any, Optional

from src.brauer.linkage import inseparably_linked, sigma_criterion
from src.brauer.slots import common_left_slot
from src.brauer.splitting import Division, Split, is_isomorphic, split_test
from src.brauer.symbols import QSymbol, norm_form
from src.config import settings
from src.descent.base import DescentReport, LinkedTriple, QuadInstance
from src.descent.fixtures import build_fixture
from src.descent.quad import quad_descend
from src.descent.triple import triple_descend
from src.descent.verify import descent_problems
from src.exceptions import InstanceFormatError
from src.fields.rational import FunctionField
from src.forms.isotropy import SearchBudget
from src.forms.quadform import PfisterDesc, QuadForm, expand_pfister
from src.forms.witt import is_hyperbolic, witt_decompose
from src.models.codec import (
    decode_form,
    decode_pfister,
    decode_quad,
    decode_report,
    decode_symbol,
    decode_triple,
    encode_aniso_cert,
    encode_budget,
    encode_certificate,
    encode_form,
    encode_pfister,
    encode_quad,
    encode_report,
    encode_symbol,
    encode_triple,
    encode_witt_certificate,
)
from src.models.schemas import DescentReportModel, InstanceFile

logger = logging.getLogger(__name__)

VERDICTS = {True: "true", False: "false", None: "unknown"}


def _document(**payload: Any) -> dict[str, Any]:
    return {"schema_version": settings.SCHEMA_VERSION, **payload}


def _dump(model) -> Any:
    return model.model_dump(mode="json", exclude_none=True)


class AlgebraService:
    """Service for the operations behind every subcommand."""

    def __init__(self, budget: Optional[SearchBudget] = None):
        """Initialize the service.

        Args:
            budget: Default search limits; instance files may carry their own
        """
        self.budget = budget or SearchBudget.default()

    # -- instance decoding ----------------------------------------------------

    def decode_instance(self, instance: InstanceFile) -> tuple[FunctionField, Any]:
        """Parse the field and the object an instance file describes.

        Raises:
            InstanceFormatError: If the payload for the declared kind is missing
            ElementParseError: If an element string is malformed
        """
        field = FunctionField.parse_declaration(instance.field)
        payload = getattr(instance, instance.kind)
        if payload is None:
            raise InstanceFormatError(f"instance of kind {instance.kind!r} has no {instance.kind!r} payload")
        if instance.kind == "form":
            return field, decode_form(field, payload)
        if instance.kind == "symbol":
            return field, decode_symbol(field, payload)
        if instance.kind == "symbols":
            return field, [decode_symbol(field, q) for q in payload]
        if instance.kind == "pfister_list":
            return field, [decode_pfister(field, d) for d in payload]
        if instance.kind == "triple":
            return field, decode_triple(field, payload)
        return field, decode_quad(field, payload)

    def encode_instance(self, obj: Any, budget: Optional[SearchBudget] = None) -> InstanceFile:
        """Wrap a fixture object in an instance file."""
        extra = {"budget": encode_budget(budget)} if budget is not None else {}
        if isinstance(obj, LinkedTriple):
            return InstanceFile(field=obj.field.declaration(), kind="triple", triple=encode_triple(obj), **extra)
        if isinstance(obj, QuadInstance):
            return InstanceFile(field=obj.field.declaration(), kind="quad", quad=encode_quad(obj), **extra)
        if isinstance(obj, QuadForm):
            return InstanceFile(field=obj.field.declaration(), kind="form", form=encode_form(obj), **extra)
        if isinstance(obj, QSymbol):
            return InstanceFile(field=obj.field.declaration(), kind="symbol", symbol=encode_symbol(obj), **extra)
        if isinstance(obj, list) and obj and all(isinstance(q, QSymbol) for q in obj):
            return InstanceFile(
                field=obj[0].field.declaration(), kind="symbols", symbols=[encode_symbol(q) for q in obj], **extra
            )
        if isinstance(obj, list) and obj and all(isinstance(d, PfisterDesc) for d in obj):
            return InstanceFile(
                field=obj[0].field.declaration(),
                kind="pfister_list",
                pfister_list=[encode_pfister(d) for d in obj],
                **extra,
            )
        raise InstanceFormatError(f"cannot write a {type(obj).__name__} as an instance")

    # -- symbols --------------------------------------------------------------

    def split(self, q: QSymbol) -> dict[str, Any]:
        result = split_test(q, self.budget)
        if isinstance(result, Split):
            return _document(verdict="split", symbol=_dump(encode_symbol(q)), witness={"lam": str(result.lam), "mu": str(result.mu)})
        if isinstance(result, Division):
            return _document(
                verdict="division",
                symbol=_dump(encode_symbol(q)),
                certificate=_dump(encode_aniso_cert(result.certificate)),
            )
        return _document(verdict="unknown", symbol=_dump(encode_symbol(q)), reason=result.reason)

    def isomorphic(self, q1: QSymbol, q2: QSymbol) -> dict[str, Any]:
        result = is_isomorphic(q1, q2, self.budget)
        payload = _document(verdict=VERDICTS[result.verdict], reason=result.reason)
        if result.certificate is not None:
            payload["certificate"] = _dump(encode_certificate(result.certificate))
        return payload

    def norm_form(self, q: QSymbol) -> dict[str, Any]:
        d = norm_form(q)
        return _document(pfister=_dump(encode_pfister(d)), form=_dump(encode_form(expand_pfister(d))))

    def common_slot(self, symbols: list[QSymbol]) -> dict[str, Any]:
        common = common_left_slot(symbols, self.budget)
        if common is None:
            return _document(verdict="unknown", reason="budget exhausted before a common left slot was found")
        return _document(
            verdict="found",
            slot=str(common.slot),
            certificates=[_dump(encode_certificate(c)) for c in common.certificates],
        )

    def linkage(self, symbols: list[QSymbol]) -> dict[str, Any]:
        """Inseparable linkage witness next to the hyperbolicity of the sum of norm forms."""
        linkage = inseparably_linked(symbols, self.budget)
        payload = _document(sigma_hyperbolic=VERDICTS[sigma_criterion(symbols, self.budget)])
        if linkage is not None:
            payload["right_slot"] = str(linkage.b)
            payload["certificates"] = [_dump(encode_certificate(c)) for c in linkage.certificates]
        return payload

    # -- forms ----------------------------------------------------------------

    def _as_form(self, obj: Any) -> QuadForm:
        if isinstance(obj, QuadForm):
            return obj
        if isinstance(obj, QSymbol):
            return expand_pfister(norm_form(obj))
        raise InstanceFormatError(f"expected a form, got a {type(obj).__name__}")

    def witt(self, obj: Any) -> dict[str, Any]:
        q = self._as_form(obj)
        decomposition = witt_decompose(q, self.budget)
        payload = _document(
            index=decomposition.index,
            status=decomposition.status,
            aniso_part=_dump(encode_form(decomposition.aniso_part)),
            certificate=_dump(encode_witt_certificate(decomposition.certificate)),
        )
        if decomposition.aniso_certificate is not None:
            payload["aniso_certificate"] = _dump(encode_aniso_cert(decomposition.aniso_certificate))
        return payload

    def hyperbolic(self, obj: Any) -> dict[str, Any]:
        q = self._as_form(obj)
        return _document(verdict=VERDICTS[is_hyperbolic(q, self.budget)], dim=q.dim)

    # -- descent --------------------------------------------------------------

    def descend(self, obj: Any) -> DescentReport:
        if isinstance(obj, LinkedTriple):
            return triple_descend(obj, self.budget)
        if isinstance(obj, QuadInstance):
            return quad_descend(obj, self.budget)
        raise InstanceFormatError(f"descend needs a triple or a quad instance, got a {type(obj).__name__}")

    def report_document(self, report: DescentReport) -> dict[str, Any]:
        return _dump(encode_report(report))

    def verify(self, report_model: DescentReportModel, original: Any) -> list[str]:
        """Problems found when replaying a serialized report against its instance."""
        report = decode_report(report_model)
        return descent_problems(report, original)

    def fixture(self, kind: str, params: dict[str, Any]) -> InstanceFile:
        obj = build_fixture(kind, **params)
        logger.info(f"Fixture {kind} over {obj[0].field if isinstance(obj, list) else obj.field}")
        return self.encode_instance(obj)
