"""Quaternion symbols [a,b) and certified rewrites between presentations."""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from src.exceptions import FieldMismatchError, SideConditionError, UnsupportedInputError
from src.fields.rational import EtaleElem, FieldElem, FunctionField, norm_sep
from src.forms.quadform import PfisterDesc

logger = logging.getLogger(__name__)

EACH = "each"
PRODUCT = "product"

PER_SYMBOL_KINDS = ("as_shift", "norm_scale", "slot_push")
PRODUCT_KINDS = ("exchange", "swap")


@dataclass(frozen=True)
class QSymbol:
    """The quaternion algebra [a,b): u^2 + u = a, v^2 = b, vu = (u + 1)v."""

    a: FieldElem
    b: FieldElem

    def __post_init__(self):
        if self.a.field != self.b.field:
            raise FieldMismatchError(f"symbol entries {self.a} and {self.b} live in different fields")
        if self.b.is_zero():
            raise UnsupportedInputError("the right slot of a quaternion symbol must be nonzero")

    @property
    def field(self) -> FunctionField:
        return self.a.field

    def norm_form(self) -> PfisterDesc:
        return norm_form(self)

    def map_entries(self, target: FunctionField, images: dict) -> "QSymbol":
        source = self.field
        return QSymbol(source.substitute(self.a, target, images), source.substitute(self.b, target, images))

    def __str__(self) -> str:
        return f"[{self.a}, {self.b})"


def norm_form(q: QSymbol) -> PfisterDesc:
    """The reduced norm form <<b; a]] = [1,a] + b[1,a]."""
    return PfisterDesc((q.b,), q.a)


def symbol_norm(q: QSymbol, x: FieldElem, y: FieldElem) -> FieldElem:
    """N_a(x + y*theta) for the left slot a of q."""
    return norm_sep(q.a, EtaleElem(q.a, x, y))


@dataclass(frozen=True)
class RewriteMove:
    """
    One elementary rewrite of a symbol list.

    as_shift(lam):      [a,b) -> [a + lam^2 + lam, b)
    norm_scale(x, y):   [a,B) -> [a, B / N_a(x + y*theta)]
    slot_push(x, y):    [a,b) -> [a + b*N, b*N] with N = N_a(x + y*theta)
    exchange(j):        ([a_i,b_i), [a_j,b_j)) -> ([a_i, b_i*b_j), [a_i + a_j, b_j))
    swap(j):            reorder positions i and j
    """

    kind: str
    x: Optional[FieldElem] = None
    y: Optional[FieldElem] = None
    other: int = 0

    @classmethod
    def as_shift(cls, lam: FieldElem) -> "RewriteMove":
        return cls(kind="as_shift", x=lam)

    @classmethod
    def norm_scale(cls, x: FieldElem, y: FieldElem) -> "RewriteMove":
        return cls(kind="norm_scale", x=x, y=y)

    @classmethod
    def slot_push(cls, x: FieldElem, y: FieldElem) -> "RewriteMove":
        return cls(kind="slot_push", x=x, y=y)

    @classmethod
    def exchange(cls, other: int) -> "RewriteMove":
        return cls(kind="exchange", other=other)

    @classmethod
    def swap(cls, other: int) -> "RewriteMove":
        return cls(kind="swap", other=other)

    @property
    def per_symbol(self) -> bool:
        return self.kind in PER_SYMBOL_KINDS


def _element_parameter(value: Optional[FieldElem], field: FunctionField, kind: str) -> FieldElem:
    if value is None or value.field != field:
        raise SideConditionError(f"{kind} needs parameters in {field}")
    return value


def _nonzero_norm(symbol: QSymbol, move: RewriteMove) -> FieldElem:
    x = _element_parameter(move.x, symbol.field, move.kind)
    y = _element_parameter(move.y, symbol.field, move.kind)
    norm = symbol_norm(symbol, x, y)
    if norm.is_zero():
        raise SideConditionError(f"{move.kind} needs an element of nonzero norm")
    return norm


def apply_move(symbols: Sequence[QSymbol], pos: int, move: RewriteMove) -> tuple[QSymbol, ...]:
    """
    Rewrite the symbol at `pos` (and its partner for exchange/swap).

    Raises:
        SideConditionError: If the move does not apply
    """
    out = list(symbols)
    if not 0 <= pos < len(out):
        raise SideConditionError(f"no symbol at position {pos}")
    symbol = out[pos]

    if move.kind == "as_shift":
        lam = _element_parameter(move.x, symbol.field, move.kind)
        out[pos] = QSymbol(symbol.a + lam.wp(), symbol.b)
    elif move.kind == "norm_scale":
        norm = _nonzero_norm(symbol, move)
        out[pos] = QSymbol(symbol.a, symbol.b / norm)
    elif move.kind == "slot_push":
        pushed = symbol.b * _nonzero_norm(symbol, move)
        out[pos] = QSymbol(symbol.a + pushed, pushed)
    elif move.kind in PRODUCT_KINDS:
        j = move.other
        if not 0 <= j < len(out) or j == pos:
            raise SideConditionError(f"{move.kind} needs a partner different from {pos}, got {j}")
        partner = out[j]
        if move.kind == "exchange":
            out[pos] = QSymbol(symbol.a, symbol.b * partner.b)
            out[j] = QSymbol(symbol.a + partner.a, partner.b)
        else:
            out[pos], out[j] = partner, symbol
    else:
        raise SideConditionError(f"unknown rewrite move {move.kind!r}")
    return tuple(out)


@dataclass(frozen=True)
class Certificate:
    """
    Replayable rewrite chain from `start` to `end`.

    With preserves="each" every symbol keeps its isomorphism class; with
    "product" only the class of the tensor product is kept.
    """

    start: tuple[QSymbol, ...]
    moves: tuple[tuple[int, RewriteMove], ...]
    end: tuple[QSymbol, ...]
    preserves: str = EACH

    @classmethod
    def build(
        cls,
        start: Sequence[QSymbol],
        moves: Sequence[tuple[int, RewriteMove]],
        preserves: str = EACH,
    ) -> "Certificate":
        current = tuple(start)
        for pos, move in moves:
            current = apply_move(current, pos, move)
        return cls(start=tuple(start), moves=tuple(moves), end=current, preserves=preserves)

    @classmethod
    def identity(cls, symbols: Sequence[QSymbol], preserves: str = EACH) -> "Certificate":
        return cls(start=tuple(symbols), moves=(), end=tuple(symbols), preserves=preserves)

    def then(self, other: "Certificate") -> "Certificate":
        """Compose with a certificate starting where this one ends."""
        if other.start != self.end:
            raise SideConditionError("certificates do not compose: end and start differ")
        preserves = EACH if self.preserves == EACH and other.preserves == EACH else PRODUCT
        return Certificate(self.start, self.moves + other.moves, other.end, preserves)

    def at(self, pos: int, total: Sequence[QSymbol]) -> "Certificate":
        """Lift a one-symbol certificate to position `pos` of a longer list."""
        if len(self.start) != 1 or total[pos] != self.start[0]:
            raise SideConditionError("only a one-symbol certificate for total[pos] can be lifted")
        return Certificate.build(total, [(pos, move) for _, move in self.moves], self.preserves)


def verify_certificate(cert: Certificate) -> bool:
    """True iff every move applies, respects `preserves`, and the replay ends at `end`."""
    if cert.preserves not in (EACH, PRODUCT):
        return False
    current = cert.start
    try:
        for pos, move in cert.moves:
            if cert.preserves == EACH and not move.per_symbol:
                return False
            current = apply_move(current, pos, move)
    except (SideConditionError, UnsupportedInputError, FieldMismatchError, ArithmeticError) as e:
        logger.debug(f"Certificate replay failed: {e}")
        return False
    return current == cert.end


def is_split_witness(q: QSymbol, lam: FieldElem, mu: FieldElem) -> bool:
    """a = lam^2 + lam + mu^2 * b."""
    if lam.field != q.field or mu.field != q.field:
        return False
    return q.a == lam.wp() + mu.square() * q.b


@dataclass(frozen=True)
class ProductSplitCertificate:
    """A product-preserving chain whose end symbols are each split by an explicit witness."""

    certificate: Certificate
    witnesses: tuple[tuple[FieldElem, FieldElem], ...]


def verify_product_split(cert: ProductSplitCertificate) -> bool:
    if not verify_certificate(cert.certificate):
        return False
    end = cert.certificate.end
    if len(cert.witnesses) != len(end):
        return False
    return all(is_split_witness(q, lam, mu) for q, (lam, mu) in zip(end, cert.witnesses))
