"""Certified rewrites of quadratic Pfister forms.

Moves:
    as_shift(lam)     <<b; a]]  -> <<b; a + lam^2 + lam]]
    value_scale(i, w) slot i -> slot i * p(w), p the Pfister form without slot i
    hyperbolic(v)     an isotropic Pfister form -> <<1,...,1; 0]]
    swap(i, j)        exchange two bilinear slots

Each move keeps the isometry class; the first two because Pfister forms are
round, the third because isotropic Pfister forms are hyperbolic.
"""

import logging
from dataclasses import dataclass
from typing import Optional

from src.exceptions import DimensionMismatchError, SideConditionError
from src.fields.rational import FieldElem
from src.forms.quadform import PfisterDesc, Vector, expand_pfister, is_zero_vector

logger = logging.getLogger(__name__)

PFISTER_MOVE_KINDS = ("as_shift", "value_scale", "hyperbolic", "swap")


@dataclass(frozen=True)
class PfisterMove:
    kind: str
    slot: int = 0
    other: int = 0
    value: Optional[FieldElem] = None
    vector: Vector = ()

    @classmethod
    def as_shift(cls, lam: FieldElem) -> "PfisterMove":
        return cls(kind="as_shift", value=lam)

    @classmethod
    def value_scale(cls, slot: int, vector: Vector) -> "PfisterMove":
        return cls(kind="value_scale", slot=slot, vector=tuple(vector))

    @classmethod
    def hyperbolic(cls, vector: Vector) -> "PfisterMove":
        return cls(kind="hyperbolic", vector=tuple(vector))

    @classmethod
    def swap(cls, slot: int, other: int) -> "PfisterMove":
        return cls(kind="swap", slot=slot, other=other)


def standard_hyperbolic(d: PfisterDesc) -> PfisterDesc:
    """<<1,...,1; 0]] of the same fold and field."""
    field = d.field
    return PfisterDesc(tuple(field.one() for _ in d.bilinear_slots), field.zero())


def apply_pfister_move(d: PfisterDesc, move: PfisterMove) -> PfisterDesc:
    """
    Apply a move after checking its side condition.

    Raises:
        SideConditionError: If the side condition fails
    """
    if move.kind == "as_shift":
        lam = move.value
        if lam is None or lam.field != d.field:
            raise SideConditionError("as_shift needs a parameter in the form's field")
        return PfisterDesc(d.bilinear_slots, d.as_slot + lam.wp())

    if move.kind == "value_scale":
        if not 0 <= move.slot < len(d.bilinear_slots):
            raise SideConditionError(f"no bilinear slot {move.slot} in a {d.fold}-fold form")
        sub = expand_pfister(d.without_slot(move.slot))
        if len(move.vector) != sub.dim:
            raise DimensionMismatchError(f"value_scale vector has length {len(move.vector)}, expected {sub.dim}")
        value = sub.evaluate(move.vector)
        if value.is_zero():
            raise SideConditionError("value_scale needs a nonzero value")
        slots = list(d.bilinear_slots)
        slots[move.slot] = slots[move.slot] * value
        return PfisterDesc(tuple(slots), d.as_slot)

    if move.kind == "hyperbolic":
        form = expand_pfister(d)
        if len(move.vector) != form.dim:
            raise DimensionMismatchError(f"hyperbolic vector has length {len(move.vector)}, expected {form.dim}")
        if is_zero_vector(move.vector) or not form.evaluate(move.vector).is_zero():
            raise SideConditionError("hyperbolic needs a nonzero isotropic vector")
        return standard_hyperbolic(d)

    if move.kind == "swap":
        n = len(d.bilinear_slots)
        if not (0 <= move.slot < n and 0 <= move.other < n):
            raise SideConditionError(f"swap of slots {move.slot}, {move.other} in a {d.fold}-fold form")
        slots = list(d.bilinear_slots)
        slots[move.slot], slots[move.other] = slots[move.other], slots[move.slot]
        return PfisterDesc(tuple(slots), d.as_slot)

    raise SideConditionError(f"unknown Pfister move {move.kind!r}")


@dataclass(frozen=True)
class PfisterCertificate:
    """Chain of moves proving start and end are isometric Pfister forms."""

    start: PfisterDesc
    moves: tuple[PfisterMove, ...]
    end: PfisterDesc

    @classmethod
    def build(cls, start: PfisterDesc, moves: list[PfisterMove]) -> "PfisterCertificate":
        current = start
        for move in moves:
            current = apply_pfister_move(current, move)
        return cls(start=start, moves=tuple(moves), end=current)


def verify_pfister_certificate(cert: PfisterCertificate) -> bool:
    current = cert.start
    try:
        for move in cert.moves:
            current = apply_pfister_move(current, move)
    except (SideConditionError, DimensionMismatchError, ArithmeticError) as e:
        logger.debug(f"Pfister certificate replay failed: {e}")
        return False
    return current == cert.end
