"""Anisotropy certificates built from residue forms at a variable.

If every block of q can be rescaled (by squares and by the isometry
[a,b] ~ [a*s^2, b/s^2]) so that its entries are t-integral with scale of
t-valuation 0 or 1, then q = q0 + t*q1 and q is anisotropic as soon as the
reductions of q0 and q1 modulo t are anisotropic over the residue field.
Certificates record every rescaling factor and every residue form, so they
replay with exact arithmetic only.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from src.config import settings
from src.fields.rational import FieldElem, FunctionField, leading_data
from src.forms.quadform import BinaryBlock, QuadForm, ScaledBlock, first_zero
from src.forms.roots import solve_quadratic

logger = logging.getLogger(__name__)

LEAF_KINDS = ("empty", "exhaustion", "arf", "no_root")
MAP_KINDS = ("invert", "shift")


@dataclass(frozen=True)
class BlockNormalization:
    """c -> c*square^2 and [a,b] -> [a*shift^2, b/shift^2]."""

    square: FieldElem
    shift: FieldElem


@dataclass(frozen=True)
class AnisoCert:
    """
    Node of an anisotropy proof tree.

    Leaves: "empty", "exhaustion" (finite field enumeration), "arf" (binary form
    over a finite field with Arf invariant of trace one), "no_root" (binary form
    whose defining quadratic has no root). Inner nodes: "residue" at a variable
    with children for q0 and q1, or a field automorphism "invert" (t -> 1/t) or
    "shift" (t -> t + c) with one child.
    """

    kind: str
    form: QuadForm
    variable: Optional[str] = None
    normalization: tuple[BlockNormalization, ...] = ()
    children: tuple["AnisoCert", ...] = ()
    shift_by: int = 0

    @property
    def variable_chain(self) -> list[str]:
        """Variables met along the first branch of the tree."""
        chain = []
        node: Optional[AnisoCert] = self
        while node is not None:
            if node.kind == "residue" and node.variable:
                chain.append(node.variable)
            node = node.children[0] if node.children else None
        return chain

    def leaves(self) -> list["AnisoCert"]:
        if not self.children:
            return [self]
        return [leaf for child in self.children for leaf in child.leaves()]

    def node_count(self) -> int:
        return 1 + sum(child.node_count() for child in self.children)


# -- leaves -----------------------------------------------------------------

_ISOTROPIC = object()


def _leaf(q: QuadForm, exhaustive_limit: int):
    """Decide small cases: a leaf certificate, _ISOTROPIC, or None to recurse."""
    if q.dim == 0:
        return AnisoCert(kind="empty", form=q)
    if q.field.is_finite:
        if q.dim > 2:
            # Nonsingular forms of dimension >= 3 over finite fields are isotropic.
            return _ISOTROPIC
        if _exhaustion_allowed(q, exhaustive_limit):
            return _ISOTROPIC if first_zero(q) is not None else AnisoCert(kind="exhaustion", form=q)
        return AnisoCert(kind="arf", form=q) if _arf_leaf_holds(q) else _ISOTROPIC
    if q.dim == 2:
        return AnisoCert(kind="no_root", form=q) if _no_root_holds(q) else _ISOTROPIC
    return None


def _exhaustion_allowed(q: QuadForm, exhaustive_limit: int) -> bool:
    return q.field.order ** q.dim <= exhaustive_limit


def _arf_leaf_holds(q: QuadForm) -> bool:
    (scale, block), = q.blocks
    a, b = scale * block.a, block.b / scale
    if a.is_zero() or b.is_zero():
        return False
    return q.field.base.trace((a * b).constant_value()) == 1


def _no_root_holds(q: QuadForm) -> bool:
    (_, block), = q.blocks
    if block.a.is_zero() or block.b.is_zero():
        return False
    # A zero (x, y) needs y != 0; scale to y = 1 and solve a*x^2 + x + b = 0.
    return not solve_quadratic(block.a, q.field.one(), block.b)


# -- residue steps ----------------------------------------------------------


def _valuation(value: FieldElem, name: str) -> int:
    return leading_data(value, name)[0]


def _reduce(value: FieldElem, name: str, residue_field: FunctionField) -> FieldElem:
    """Value at t = 0 of a t-integral element."""
    if value.is_zero():
        return residue_field.zero()
    v, residue = leading_data(value, name)
    return residue if v == 0 else residue_field.zero()


def _choose_normalization(block: ScaledBlock, name: str) -> Optional[BlockNormalization]:
    scale, inner = block
    if inner.a.is_zero() or inner.b.is_zero():
        return None
    field = scale.field
    t = field.var(name)
    e = _valuation(scale, name)
    square = t ** (-(e // 2))

    va = _valuation(inner.a, name)
    vb = _valuation(inner.b, name)
    low = -(va // 2)
    high = vb // 2
    if low > high:
        return None
    j = 0 if low <= 0 <= high else (low if low > 0 else high)
    return BlockNormalization(square=square, shift=t ** j)


def _apply_normalization(block: ScaledBlock, norm: BlockNormalization) -> ScaledBlock:
    scale, inner = block
    shift_sq = norm.shift.square()
    return ScaledBlock(
        scale * norm.square.square(),
        BinaryBlock(inner.a * shift_sq, inner.b / shift_sq),
    )


def _split_at(
    q: QuadForm, name: str, normalization: Sequence[BlockNormalization]
) -> Optional[tuple[QuadForm, QuadForm]]:
    """Residue forms (q0, q1) for given normalizations, or None when the shape is wrong."""
    residue_field = q.field.drop(name)
    unit_blocks = []
    uniformizer_blocks = []
    for block, norm in zip(q.blocks, normalization):
        if norm.square.is_zero() or norm.shift.is_zero():
            return None
        scale, inner = _apply_normalization(block, norm)
        if inner.a.is_zero() or inner.b.is_zero():
            return None
        e = _valuation(scale, name)
        if e not in (0, 1):
            return None
        if _valuation(inner.a, name) < 0 or _valuation(inner.b, name) < 0:
            return None
        reduced = ScaledBlock(
            leading_data(scale, name)[1],
            BinaryBlock(_reduce(inner.a, name, residue_field), _reduce(inner.b, name, residue_field)),
        )
        (unit_blocks if e == 0 else uniformizer_blocks).append(reduced)
    return QuadForm(residue_field, tuple(unit_blocks)), QuadForm(residue_field, tuple(uniformizer_blocks))


def _field_map(q: QuadForm, kind: str, name: str, shift_by: int) -> QuadForm:
    t = q.field.var(name)
    image = t.inverse() if kind == "invert" else t + q.field.const(shift_by)
    return q.map_entries(q.field, {name: image})


class _Search:
    """Depth-first certificate search with a node budget."""

    def __init__(self, exhaustive_limit: int, node_limit: int):
        self.exhaustive_limit = exhaustive_limit
        self.node_limit = node_limit
        self.nodes = 0

    def certify(self, q: QuadForm, chain: Optional[Sequence[str]]) -> Optional[AnisoCert]:
        leaf = _leaf(q, self.exhaustive_limit)
        if leaf is _ISOTROPIC:
            return None
        if leaf is not None:
            return leaf

        if chain is not None:
            if not chain or chain[0] not in q.field.variables:
                return None
            return self._residue(q, chain[0], chain[1:])

        used = set()
        for scale, block in q.blocks:
            for value in (scale, block.a, block.b):
                used |= value.used_variables()
        for name in [v for v in q.field.variables if v in used]:
            cert = self._residue(q, name, None)
            if cert is not None:
                return cert
            for kind, shift_by in self._maps(q.field):
                if self.nodes >= self.node_limit:
                    return None
                mapped = _field_map(q, kind, name, shift_by)
                inner = self._residue(mapped, name, None)
                if inner is not None:
                    return AnisoCert(kind=kind, form=q, variable=name, children=(inner,), shift_by=shift_by)
        return None

    @staticmethod
    def _maps(field: FunctionField) -> list[tuple[str, int]]:
        maps = [("shift", 1)]
        if field.k > 1:
            maps.append(("shift", field.base.generator))
        maps.append(("invert", 0))
        return maps

    def _residue(self, q: QuadForm, name: str, chain: Optional[Sequence[str]]) -> Optional[AnisoCert]:
        self.nodes += 1
        if self.nodes > self.node_limit:
            return None
        normalization = []
        for block in q.blocks:
            norm = _choose_normalization(block, name)
            if norm is None:
                return None
            normalization.append(norm)
        parts = _split_at(q, name, normalization)
        if parts is None:
            return None
        q0, q1 = parts
        cert0 = self.certify(q0, chain)
        if cert0 is None:
            return None
        cert1 = self.certify(q1, chain)
        if cert1 is None:
            return None
        return AnisoCert(
            kind="residue",
            form=q,
            variable=name,
            normalization=tuple(normalization),
            children=(cert0, cert1),
        )


def residue_anisotropy_cert(
    q: QuadForm,
    chain: Sequence[str],
    exhaustive_limit: Optional[int] = None,
) -> Optional[AnisoCert]:
    """
    Certificate following a fixed variable chain, or None when inapplicable.

    Leaves are used as soon as a residue form is decidable directly, so unused
    chain entries are ignored.
    """
    limit = exhaustive_limit if exhaustive_limit is not None else settings.EXHAUSTIVE_LIMIT
    return _Search(limit, settings.RESIDUE_NODE_LIMIT).certify(q, list(chain))


def find_residue_cert(
    q: QuadForm,
    exhaustive_limit: Optional[int] = None,
    node_limit: Optional[int] = None,
) -> Optional[AnisoCert]:
    """Search variable chains (and simple field automorphisms) for a certificate."""
    limit = exhaustive_limit if exhaustive_limit is not None else settings.EXHAUSTIVE_LIMIT
    search = _Search(limit, node_limit or settings.RESIDUE_NODE_LIMIT)
    cert = search.certify(q, None)
    logger.debug(f"Residue certificate search on dim {q.dim}: {search.nodes} nodes, found={cert is not None}")
    return cert


def validate(cert: AnisoCert, exhaustive_limit: Optional[int] = None) -> bool:
    """Replay a certificate from scratch; False on any mismatch."""
    limit = exhaustive_limit if exhaustive_limit is not None else settings.EXHAUSTIVE_LIMIT
    try:
        return _validate(cert, limit)
    except (ArithmeticError, ValueError) as e:
        logger.debug(f"Certificate replay failed: {e}")
        return False


def _validate(cert: AnisoCert, limit: int) -> bool:
    q = cert.form
    if cert.kind == "empty":
        return q.dim == 0 and not cert.children
    if cert.kind == "exhaustion":
        return (
            q.field.is_finite
            and q.dim == 2
            and _exhaustion_allowed(q, limit)
            and first_zero(q) is None
        )
    if cert.kind == "arf":
        return q.field.is_finite and q.dim == 2 and _arf_leaf_holds(q)
    if cert.kind == "no_root":
        return q.dim == 2 and _no_root_holds(q)
    if cert.kind == "residue":
        if cert.variable not in q.field.variables or len(cert.children) != 2:
            return False
        if len(cert.normalization) != len(q.blocks):
            return False
        for norm in cert.normalization:
            if norm.square.field != q.field or norm.shift.field != q.field:
                return False
        parts = _split_at(q, cert.variable, cert.normalization)
        if parts is None:
            return False
        q0, q1 = parts
        if cert.children[0].form != q0 or cert.children[1].form != q1:
            return False
        return all(_validate(child, limit) for child in cert.children)
    if cert.kind in MAP_KINDS:
        if cert.variable not in q.field.variables or len(cert.children) != 1:
            return False
        if cert.kind == "shift" and not 0 < cert.shift_by < q.field.base.order:
            return False
        mapped = _field_map(q, cert.kind, cert.variable, cert.shift_by)
        return cert.children[0].form == mapped and _validate(cert.children[0], limit)
    return False
