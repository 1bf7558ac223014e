"""Pydantic models for instance files, reports and certificates."""

from typing import Literal, Optional

from pydantic import BaseModel, Field

from src.config import settings

InstanceKind = Literal["form", "symbol", "symbols", "pfister_list", "triple", "quad"]


class BudgetModel(BaseModel):
    """Search limits shared by every bounded search."""

    exhaustive_limit: int = Field(settings.EXHAUSTIVE_LIMIT, ge=0, description="Largest value space enumerated over a finite field")
    degree_bound: int = Field(settings.BUDGET_DEGREE, ge=0, description="Total degree bound of candidate witnesses")
    trials: int = Field(settings.BUDGET_TRIALS, ge=1, description="Number of candidate witnesses tried per search")
    seed: int = Field(settings.SEED, description="Seed of the randomized search stage")

    class Config:
        extra = "forbid"
        json_schema_extra = {"example": {"exhaustive_limit": 16777216, "degree_bound": 2, "trials": 2000, "seed": 0}}


class BlockModel(BaseModel):
    """The scaled binary block scale*[a,b]."""

    scale: str = Field("1", description="Nonzero scale factor")
    a: str = Field(..., description="Coefficient of X^2")
    b: str = Field(..., description="Coefficient of Y^2")

    class Config:
        extra = "forbid"


class FormModel(BaseModel):
    """Orthogonal sum of scaled binary blocks."""

    blocks: list[BlockModel] = Field(default_factory=list, description="Blocks in order")

    class Config:
        extra = "forbid"
        json_schema_extra = {"example": {"blocks": [{"scale": "1", "a": "1", "b": "t"}, {"scale": "t", "a": "1", "b": "t"}]}}


class SymbolModel(BaseModel):
    """The quaternion symbol [a,b)."""

    a: str = Field(..., description="Left (Artin-Schreier) slot")
    b: str = Field(..., description="Right slot, nonzero")

    class Config:
        extra = "forbid"
        json_schema_extra = {"example": {"a": "t1", "b": "t2"}}


class PfisterModel(BaseModel):
    """The Pfister form <<b1,...,b_{n-1}; a]]."""

    bilinear_slots: list[str] = Field(default_factory=list, description="Nonzero bilinear slots")
    as_slot: str = Field(..., description="Artin-Schreier slot")

    class Config:
        extra = "forbid"


class TripleModel(BaseModel):
    """Linked triple (<<b1; pi]], <<b2; pi]], <<b1*b2; pi]])."""

    slots: list[str] = Field(..., min_length=1, description="Slots of pi; the last one is the Artin-Schreier slot")
    b1: str = Field(..., description="First right slot")
    b2: str = Field(..., description="Second right slot")

    class Config:
        extra = "forbid"
        json_schema_extra = {"example": {"slots": ["X1"], "b1": "Y1", "b2": "Y2"}}


class MoveModel(BaseModel):
    """One rewrite move of a symbol list."""

    pos: int = Field(..., ge=0, description="Position the move acts on")
    kind: Literal["as_shift", "norm_scale", "slot_push", "exchange", "swap"]
    x: Optional[str] = Field(None, description="Shift parameter, or first etale coordinate")
    y: Optional[str] = Field(None, description="Second etale coordinate")
    other: int = Field(0, ge=0, description="Partner position of exchange and swap")

    class Config:
        extra = "forbid"


class CertificateModel(BaseModel):
    """Replayable rewrite chain between symbol lists."""

    start: list[SymbolModel]
    moves: list[MoveModel] = Field(default_factory=list)
    end: list[SymbolModel]
    preserves: Literal["each", "product"] = Field("each", description="What the moves keep: every class, or the product")

    class Config:
        extra = "forbid"


class WitnessModel(BaseModel):
    """(lam, mu) with a = lam^2 + lam + mu^2*b."""

    lam: str
    mu: str

    class Config:
        extra = "forbid"


class ProductSplitModel(BaseModel):
    """Product certificate whose end symbols each carry a split witness."""

    certificate: CertificateModel
    witnesses: list[WitnessModel]

    class Config:
        extra = "forbid"


class QuadModel(BaseModel):
    """Four quaternion symbols with split tensor product."""

    symbols: list[SymbolModel] = Field(..., min_length=4, max_length=4)
    split_witness: Optional[ProductSplitModel] = Field(None, description="Certificate that the product is split")

    class Config:
        extra = "forbid"


class PfisterMoveModel(BaseModel):
    """One rewrite move of a Pfister form."""

    kind: Literal["as_shift", "value_scale", "hyperbolic", "swap"]
    slot: int = Field(0, ge=0)
    other: int = Field(0, ge=0)
    value: Optional[str] = None
    vector: list[str] = Field(default_factory=list)

    class Config:
        extra = "forbid"


class PfisterCertificateModel(BaseModel):
    """Replayable chain of Pfister moves."""

    start: PfisterModel
    moves: list[PfisterMoveModel] = Field(default_factory=list)
    end: PfisterModel

    class Config:
        extra = "forbid"


class NormalizationModel(BaseModel):
    square: str
    shift: str

    class Config:
        extra = "forbid"


class AnisoCertModel(BaseModel):
    """Node of an anisotropy proof; children live over residue fields."""

    kind: Literal["empty", "exhaustion", "arf", "no_root", "residue", "invert", "shift"]
    field: str = Field(..., description="Declaration of the field the node's form lives over")
    form: FormModel
    variable: Optional[str] = None
    normalization: list[NormalizationModel] = Field(default_factory=list)
    children: list["AnisoCertModel"] = Field(default_factory=list)
    shift_by: int = Field(0, ge=0, description="Packed constant c of t -> t + c")

    class Config:
        extra = "forbid"


class WittStepModel(BaseModel):
    kind: Literal["hyperbolic_block", "cancel_pair", "split"]
    indices: list[int] = Field(default_factory=list)
    vector: list[str] = Field(default_factory=list)

    class Config:
        extra = "forbid"


class WittCertificateModel(BaseModel):
    start: FormModel
    steps: list[WittStepModel] = Field(default_factory=list)
    end: FormModel

    class Config:
        extra = "forbid"


class InstanceFile(BaseModel):
    """Input document of the command-line tool."""

    schema_version: Literal[1] = Field(1, description="Version of this JSON layout")
    field: str = Field(..., description="Field declaration, e.g. F2(t1,t2)")
    kind: InstanceKind
    form: Optional[FormModel] = None
    symbol: Optional[SymbolModel] = None
    symbols: Optional[list[SymbolModel]] = None
    pfister_list: Optional[list[PfisterModel]] = None
    triple: Optional[TripleModel] = None
    quad: Optional[QuadModel] = None
    budget: Optional[BudgetModel] = None

    class Config:
        extra = "forbid"
        json_schema_extra = {
            "example": {
                "schema_version": 1,
                "field": "F2(X1,Y1,Y2)",
                "kind": "triple",
                "triple": {"slots": ["X1"], "b1": "Y1", "b2": "Y2"},
            }
        }


class DescentReportModel(BaseModel):
    """Serialized descent report; certificates are embedded so the report re-verifies alone."""

    schema_version: Literal[1] = 1
    kind: Literal["triple", "quad"]
    case: str
    status: Literal["success", "budget_exhausted"]
    field: str = Field(..., description="Declaration of the input field F")
    descended_field: Optional[str] = Field(None, description="Declaration of L = k(u1,...,ur)")
    generators: list[str] = Field(default_factory=list, description="Images in F of u1,...,ur")
    descended_forms: list[PfisterModel] = Field(default_factory=list)
    descended_symbols: list[SymbolModel] = Field(default_factory=list)
    pfister_certificates: list[PfisterCertificateModel] = Field(default_factory=list)
    symbol_certificates: list[CertificateModel] = Field(default_factory=list)
    product_certificate: Optional[ProductSplitModel] = None
    rho: Optional[PfisterModel] = None
    rho_vector: Optional[list[str]] = None
    rho_certificate: Optional[AnisoCertModel] = None
    permutation: list[int] = Field(default_factory=list)
    wp_identity_verified: bool = False
    notes: list[str] = Field(default_factory=list)

    class Config:
        extra = "forbid"
        json_schema_extra = {
            "example": {
                "schema_version": 1,
                "kind": "triple",
                "case": "anisotropic",
                "status": "success",
                "field": "F2(X1,Y1,Y2)",
                "descended_field": "F2(u1,u2,u3)",
                "generators": ["X1", "Y1", "Y2"],
            }
        }


AnisoCertModel.model_rebuild()
