"""Conversion between the pydantic wire models and the algebra objects.

Elements travel as canonical strings of the element grammar and are parsed back
in the field the enclosing document declares.
"""

from typing import Optional, Sequence

from src.brauer.symbols import Certificate, ProductSplitCertificate, QSymbol, RewriteMove
from src.descent.base import DescentReport, LinkedTriple, QuadInstance
from src.exceptions import InstanceFormatError
from src.fields.rational import FieldElem, FunctionField
from src.forms.isotropy import SearchBudget
from src.forms.pfister_moves import PfisterCertificate, PfisterMove
from src.forms.quadform import BinaryBlock, PfisterDesc, QuadForm, ScaledBlock, Vector
from src.forms.residue import AnisoCert, BlockNormalization
from src.forms.witt import WittCertificate
from src.models.schemas import (
    AnisoCertModel,
    BlockModel,
    BudgetModel,
    CertificateModel,
    DescentReportModel,
    FormModel,
    MoveModel,
    NormalizationModel,
    PfisterCertificateModel,
    PfisterModel,
    PfisterMoveModel,
    ProductSplitModel,
    QuadModel,
    SymbolModel,
    TripleModel,
    WitnessModel,
    WittCertificateModel,
    WittStepModel,
)


def _opt(field: FunctionField, text: Optional[str]) -> Optional[FieldElem]:
    return None if text is None else field.parse(text)


def _str(value: Optional[FieldElem]) -> Optional[str]:
    return None if value is None else str(value)


def encode_vector(v: Sequence[FieldElem]) -> list[str]:
    return [str(x) for x in v]


def decode_vector(field: FunctionField, v: Sequence[str]) -> Vector:
    return tuple(field.parse(x) for x in v)


# -- budget -------------------------------------------------------------------


def decode_budget(model: Optional[BudgetModel]) -> SearchBudget:
    if model is None:
        return SearchBudget.default()
    return SearchBudget(model.exhaustive_limit, model.degree_bound, model.trials, model.seed)


def encode_budget(budget: SearchBudget) -> BudgetModel:
    return BudgetModel(
        exhaustive_limit=budget.exhaustive_limit,
        degree_bound=budget.degree_bound,
        trials=budget.trials,
        seed=budget.seed,
    )


# -- forms --------------------------------------------------------------------


def encode_form(q: QuadForm) -> FormModel:
    return FormModel(
        blocks=[BlockModel(scale=str(s), a=str(block.a), b=str(block.b)) for s, block in q.blocks]
    )


def decode_form(field: FunctionField, model: FormModel) -> QuadForm:
    return QuadForm(
        field,
        tuple(
            ScaledBlock(field.parse(b.scale), BinaryBlock(field.parse(b.a), field.parse(b.b)))
            for b in model.blocks
        ),
    )


def encode_pfister(d: PfisterDesc) -> PfisterModel:
    return PfisterModel(bilinear_slots=[str(s) for s in d.bilinear_slots], as_slot=str(d.as_slot))


def decode_pfister(field: FunctionField, model: PfisterModel) -> PfisterDesc:
    return PfisterDesc(tuple(field.parse(s) for s in model.bilinear_slots), field.parse(model.as_slot))


def encode_aniso_cert(cert: AnisoCert) -> AnisoCertModel:
    return AnisoCertModel(
        kind=cert.kind,
        field=cert.form.field.declaration(),
        form=encode_form(cert.form),
        variable=cert.variable,
        normalization=[NormalizationModel(square=str(n.square), shift=str(n.shift)) for n in cert.normalization],
        children=[encode_aniso_cert(child) for child in cert.children],
        shift_by=cert.shift_by,
    )


def decode_aniso_cert(model: AnisoCertModel) -> AnisoCert:
    field = FunctionField.parse_declaration(model.field)
    return AnisoCert(
        kind=model.kind,
        form=decode_form(field, model.form),
        variable=model.variable,
        normalization=tuple(
            BlockNormalization(field.parse(n.square), field.parse(n.shift)) for n in model.normalization
        ),
        children=tuple(decode_aniso_cert(child) for child in model.children),
        shift_by=model.shift_by,
    )


def encode_witt_certificate(cert: WittCertificate) -> WittCertificateModel:
    return WittCertificateModel(
        start=encode_form(cert.start),
        steps=[
            WittStepModel(kind=step.kind, indices=list(step.indices), vector=encode_vector(step.vector))
            for step in cert.steps
        ],
        end=encode_form(cert.end),
    )


def encode_pfister_move(move: PfisterMove) -> PfisterMoveModel:
    return PfisterMoveModel(
        kind=move.kind,
        slot=move.slot,
        other=move.other,
        value=_str(move.value),
        vector=encode_vector(move.vector),
    )


def decode_pfister_move(field: FunctionField, model: PfisterMoveModel) -> PfisterMove:
    return PfisterMove(
        kind=model.kind,
        slot=model.slot,
        other=model.other,
        value=_opt(field, model.value),
        vector=decode_vector(field, model.vector),
    )


def encode_pfister_certificate(cert: PfisterCertificate) -> PfisterCertificateModel:
    return PfisterCertificateModel(
        start=encode_pfister(cert.start),
        moves=[encode_pfister_move(m) for m in cert.moves],
        end=encode_pfister(cert.end),
    )


def decode_pfister_certificate(field: FunctionField, model: PfisterCertificateModel) -> PfisterCertificate:
    return PfisterCertificate(
        start=decode_pfister(field, model.start),
        moves=tuple(decode_pfister_move(field, m) for m in model.moves),
        end=decode_pfister(field, model.end),
    )


# -- symbols ------------------------------------------------------------------


def encode_symbol(q: QSymbol) -> SymbolModel:
    return SymbolModel(a=str(q.a), b=str(q.b))


def decode_symbol(field: FunctionField, model: SymbolModel) -> QSymbol:
    return QSymbol(field.parse(model.a), field.parse(model.b))


def encode_certificate(cert: Certificate) -> CertificateModel:
    return CertificateModel(
        start=[encode_symbol(q) for q in cert.start],
        moves=[
            MoveModel(pos=pos, kind=m.kind, x=_str(m.x), y=_str(m.y), other=m.other) for pos, m in cert.moves
        ],
        end=[encode_symbol(q) for q in cert.end],
        preserves=cert.preserves,
    )


def decode_certificate(field: FunctionField, model: CertificateModel) -> Certificate:
    return Certificate(
        start=tuple(decode_symbol(field, q) for q in model.start),
        moves=tuple(
            (m.pos, RewriteMove(kind=m.kind, x=_opt(field, m.x), y=_opt(field, m.y), other=m.other))
            for m in model.moves
        ),
        end=tuple(decode_symbol(field, q) for q in model.end),
        preserves=model.preserves,
    )


def encode_product_split(cert: ProductSplitCertificate) -> ProductSplitModel:
    return ProductSplitModel(
        certificate=encode_certificate(cert.certificate),
        witnesses=[WitnessModel(lam=str(lam), mu=str(mu)) for lam, mu in cert.witnesses],
    )


def decode_product_split(field: FunctionField, model: ProductSplitModel) -> ProductSplitCertificate:
    return ProductSplitCertificate(
        certificate=decode_certificate(field, model.certificate),
        witnesses=tuple((field.parse(w.lam), field.parse(w.mu)) for w in model.witnesses),
    )


# -- instances ----------------------------------------------------------------


def encode_triple(triple: LinkedTriple) -> TripleModel:
    return TripleModel(slots=[str(s) for s in triple.slots], b1=str(triple.b1), b2=str(triple.b2))


def decode_triple(field: FunctionField, model: TripleModel) -> LinkedTriple:
    return LinkedTriple(tuple(field.parse(s) for s in model.slots), field.parse(model.b1), field.parse(model.b2))


def encode_quad(instance: QuadInstance) -> QuadModel:
    witness = instance.split_witness
    return QuadModel(
        symbols=[encode_symbol(q) for q in instance.symbols],
        split_witness=encode_product_split(witness) if witness is not None else None,
    )


def decode_quad(field: FunctionField, model: QuadModel) -> QuadInstance:
    witness = decode_product_split(field, model.split_witness) if model.split_witness is not None else None
    return QuadInstance(tuple(decode_symbol(field, q) for q in model.symbols), witness)


# -- reports ------------------------------------------------------------------


def encode_report(report: DescentReport) -> DescentReportModel:
    triple = report.kind == "triple"
    return DescentReportModel(
        kind=report.kind,
        case=report.case,
        status=report.status,
        field=report.field.declaration(),
        descended_field=report.descended_field.declaration() if report.descended_field is not None else None,
        generators=[str(g) for g in report.generators],
        descended_forms=[encode_pfister(d) for d in report.descended] if triple else [],
        descended_symbols=[] if triple else [encode_symbol(h) for h in report.descended],
        pfister_certificates=[encode_pfister_certificate(c) for c in report.certificates] if triple else [],
        symbol_certificates=[] if triple else [encode_certificate(c) for c in report.certificates],
        product_certificate=(
            encode_product_split(report.product_certificate) if report.product_certificate is not None else None
        ),
        rho=encode_pfister(report.rho) if report.rho is not None else None,
        rho_vector=encode_vector(report.rho_vector) if report.rho_vector is not None else None,
        rho_certificate=encode_aniso_cert(report.rho_certificate) if report.rho_certificate is not None else None,
        permutation=list(report.permutation),
        wp_identity_verified=report.wp_identity_verified,
        notes=list(report.notes),
    )


def decode_report(model: DescentReportModel) -> DescentReport:
    """
    Rebuild a report from its wire form.

    Raises:
        InstanceFormatError: If the embedded objects do not fit the declared kind
    """
    F = FunctionField.parse_declaration(model.field)
    L = FunctionField.parse_declaration(model.descended_field) if model.descended_field is not None else None
    if model.kind == "triple":
        if model.descended_symbols or model.symbol_certificates:
            raise InstanceFormatError("a triple report cannot carry symbols")
        descended = tuple(decode_pfister(L, d) for d in model.descended_forms) if L is not None else ()
        certificates = tuple(decode_pfister_certificate(F, c) for c in model.pfister_certificates)
    else:
        if model.descended_forms or model.pfister_certificates:
            raise InstanceFormatError("a quad report cannot carry Pfister forms")
        descended = tuple(decode_symbol(L, h) for h in model.descended_symbols) if L is not None else ()
        certificates = tuple(decode_certificate(F, c) for c in model.symbol_certificates)
    product = None
    if model.product_certificate is not None:
        if L is None:
            raise InstanceFormatError("a product certificate needs the descended field")
        product = decode_product_split(L, model.product_certificate)
    return DescentReport(
        kind=model.kind,
        case=model.case,
        status=model.status,
        field=F,
        generators=tuple(F.parse(g) for g in model.generators),
        descended_field=L,
        descended=descended,
        certificates=certificates,
        product_certificate=product,
        rho=decode_pfister(F, model.rho) if model.rho is not None else None,
        rho_vector=decode_vector(F, model.rho_vector) if model.rho_vector is not None else None,
        rho_certificate=decode_aniso_cert(model.rho_certificate) if model.rho_certificate is not None else None,
        permutation=tuple(model.permutation),
        wp_identity_verified=model.wp_identity_verified,
        notes=tuple(model.notes),
    )
