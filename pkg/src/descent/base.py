"""Instances and reports of the descent pipelines."""

from dataclasses import dataclass
from typing import Optional, Union

from src.brauer.symbols import ProductSplitCertificate, QSymbol
from src.exceptions import FieldMismatchError, UnsupportedInputError
from src.fields.rational import FieldElem, FunctionField
from src.forms.quadform import PfisterDesc, Vector
from src.forms.residue import AnisoCert

SUCCESS = "success"
BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class LinkedTriple:
    """
    (<<b1; pi]], <<b2; pi]], <<b1*b2; pi]]) with pi = <<a_1,...,a_{n-2}; a_{n-1}]].

    `slots` holds a_1..a_{n-1}; the last one is the Artin-Schreier slot.
    """

    slots: tuple[FieldElem, ...]
    b1: FieldElem
    b2: FieldElem

    def __post_init__(self):
        if not self.slots:
            raise UnsupportedInputError("a linked triple needs at least the Artin-Schreier slot")
        for value in self.slots + (self.b2,):
            if value.field != self.b1.field:
                raise FieldMismatchError("linked triple entries live in different fields")
        if self.b1.is_zero() or self.b2.is_zero():
            raise UnsupportedInputError("b1 and b2 must be nonzero")
        if any(s.is_zero() for s in self.slots[:-1]):
            raise UnsupportedInputError("bilinear slots must be nonzero")

    @property
    def field(self) -> FunctionField:
        return self.b1.field

    @property
    def n(self) -> int:
        return len(self.slots) + 1

    @property
    def pi(self) -> PfisterDesc:
        return PfisterDesc(self.slots[:-1], self.slots[-1])

    def forms(self) -> tuple[PfisterDesc, PfisterDesc, PfisterDesc]:
        pi = self.pi
        return tuple(
            PfisterDesc((b,) + pi.bilinear_slots, pi.as_slot)
            for b in (self.b1, self.b2, self.b1 * self.b2)
        )

    @property
    def rho(self) -> PfisterDesc:
        """<<b1, b2; pi]], the Witt class of the sum of the three forms."""
        pi = self.pi
        return PfisterDesc((self.b1, self.b2) + pi.bilinear_slots, pi.as_slot)


@dataclass(frozen=True)
class QuadInstance:
    """Four quaternion symbols whose tensor product is split."""

    symbols: tuple[QSymbol, QSymbol, QSymbol, QSymbol]
    split_witness: Optional[ProductSplitCertificate] = None

    def __post_init__(self):
        if len(self.symbols) != 4:
            raise UnsupportedInputError(f"a quadruple needs four symbols, got {len(self.symbols)}")
        if any(q.field != self.symbols[0].field for q in self.symbols):
            raise FieldMismatchError("the four symbols live in different fields")

    @property
    def field(self) -> FunctionField:
        return self.symbols[0].field


Original = Union[LinkedTriple, QuadInstance]


@dataclass(frozen=True)
class DescentReport:
    """
    Result of a descent: generators of L, objects over L and certificates.

    `descended_field` is k(u1,...,ur) with u_j mapping to generators[j].
    Triple reports carry PfisterDesc objects and PfisterCertificates; quad
    reports carry QSymbols, per-symbol Certificates and a product certificate.
    """

    kind: str
    case: str
    status: str
    field: FunctionField
    generators: tuple[FieldElem, ...] = ()
    descended_field: Optional[FunctionField] = None
    descended: tuple = ()
    certificates: tuple = ()
    product_certificate: Optional[ProductSplitCertificate] = None
    rho: Optional[PfisterDesc] = None
    rho_vector: Optional[Vector] = None
    rho_certificate: Optional[AnisoCert] = None
    permutation: tuple[int, ...] = ()
    wp_identity_verified: bool = False
    notes: tuple[str, ...] = ()

    @property
    def succeeded(self) -> bool:
        return self.status == SUCCESS

    def images(self) -> dict[str, FieldElem]:
        if self.descended_field is None:
            return {}
        return dict(zip(self.descended_field.variables, self.generators))

