"""Nonsingular even-dimensional quadratic forms in characteristic 2.

A QuadForm is an orthogonal sum of scaled binary blocks c*[a,b], where
[a,b] = aX^2 + XY + bY^2. Vectors are flat tuples (x1, y1, x2, y2, ...).
"""

import itertools
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Optional, Sequence

from src.exceptions import DimensionMismatchError, FieldMismatchError, UnsupportedInputError
from src.fields.rational import FieldElem, FunctionField

Vector = tuple[FieldElem, ...]


@dataclass(frozen=True)
class BinaryBlock:
    """The binary form [a,b] = aX^2 + XY + bY^2."""

    a: FieldElem
    b: FieldElem

    def evaluate(self, x: FieldElem, y: FieldElem) -> FieldElem:
        return self.a * x.square() + x * y + self.b * y.square()

    def __str__(self) -> str:
        return f"[{self.a}, {self.b}]"


class ScaledBlock(NamedTuple):
    scale: FieldElem
    block: BinaryBlock

    def evaluate(self, x: FieldElem, y: FieldElem) -> FieldElem:
        return self.scale * self.block.evaluate(x, y)

    def normalized(self) -> tuple[FieldElem, FieldElem]:
        """Entries of the isometric unscaled block [c*a, b/c]."""
        return self.scale * self.block.a, self.block.b / self.scale

    def __str__(self) -> str:
        if self.scale.is_one():
            return str(self.block)
        return f"({self.scale})*{self.block}"


@dataclass(frozen=True)
class QuadForm:
    """Orthogonal sum of scaled binary blocks over a function field."""

    field: FunctionField
    blocks: tuple[ScaledBlock, ...] = ()

    def __post_init__(self):
        for scale, block in self.blocks:
            for value in (scale, block.a, block.b):
                if value.field != self.field:
                    raise FieldMismatchError(f"block entry {value} is not in {self.field}")
            if scale.is_zero():
                raise UnsupportedInputError("block scales must be nonzero")

    @staticmethod
    def of(field: FunctionField, *entries: tuple) -> "QuadForm":
        """
        Build a form from (a, b) or (c, a, b) tuples.

        Entries may be FieldElems or ints (read mod 2).
        """
        blocks = []
        for entry in entries:
            if len(entry) == 2:
                c, (a, b) = field.one(), entry
            elif len(entry) == 3:
                c, a, b = entry
            else:
                raise UnsupportedInputError(f"block entries need 2 or 3 values, got {entry!r}")
            blocks.append(ScaledBlock(field.coerce(c), BinaryBlock(field.coerce(a), field.coerce(b))))
        return QuadForm(field, tuple(blocks))

    @staticmethod
    def empty(field: FunctionField) -> "QuadForm":
        return QuadForm(field, ())

    @property
    def dim(self) -> int:
        return 2 * len(self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def zero_vector(self) -> Vector:
        return (self.field.zero(),) * self.dim

    def unit_vector(self, index: int, value: Optional[FieldElem] = None) -> Vector:
        vector = list(self.zero_vector())
        vector[index] = value if value is not None else self.field.one()
        return tuple(vector)

    def _check_vector(self, v: Sequence[FieldElem]) -> None:
        if len(v) != self.dim:
            raise DimensionMismatchError(f"vector of length {len(v)} for a form of dimension {self.dim}")

    def evaluate(self, v: Sequence[FieldElem]) -> FieldElem:
        self._check_vector(v)
        total = self.field.zero()
        for i, scaled in enumerate(self.blocks):
            x, y = v[2 * i], v[2 * i + 1]
            if x.is_zero() and y.is_zero():
                continue
            total = total + scaled.evaluate(x, y)
        return total

    def polar(self, v: Sequence[FieldElem], w: Sequence[FieldElem]) -> FieldElem:
        """Polar form B(v, w) = q(v+w) - q(v) - q(w)."""
        self._check_vector(v)
        self._check_vector(w)
        total = self.field.zero()
        for i, (scale, _) in enumerate(self.blocks):
            term = v[2 * i] * w[2 * i + 1] + w[2 * i] * v[2 * i + 1]
            if not term.is_zero():
                total = total + scale * term
        return total

    def perp(self, other: "QuadForm") -> "QuadForm":
        if other.field != self.field:
            raise FieldMismatchError(f"cannot add forms over {self.field} and {other.field}")
        return QuadForm(self.field, self.blocks + other.blocks)

    def scaled(self, c: FieldElem) -> "QuadForm":
        return QuadForm(
            self.field,
            tuple(ScaledBlock(c * scale, block) for scale, block in self.blocks),
        )

    def without(self, indices: set[int]) -> "QuadForm":
        return QuadForm(self.field, tuple(b for i, b in enumerate(self.blocks) if i not in indices))

    def sub_form(self, indices: Sequence[int]) -> "QuadForm":
        return QuadForm(self.field, tuple(self.blocks[i] for i in indices))

    def map_entries(self, target: FunctionField, images: dict) -> "QuadForm":
        """Apply a field map to every block entry."""
        source = self.field
        return QuadForm(
            target,
            tuple(
                ScaledBlock(
                    source.substitute(scale, target, images),
                    BinaryBlock(
                        source.substitute(block.a, target, images),
                        source.substitute(block.b, target, images),
                    ),
                )
                for scale, block in self.blocks
            ),
        )

    def __str__(self) -> str:
        if not self.blocks:
            return "0"
        return " + ".join(str(b) for b in self.blocks)


@dataclass(frozen=True)
class PfisterDesc:
    """The n-fold Pfister form <<b1,...,b_{n-1}; a]]."""

    bilinear_slots: tuple[FieldElem, ...]
    as_slot: FieldElem

    def __post_init__(self):
        for slot in self.bilinear_slots:
            if slot.field != self.as_slot.field:
                raise FieldMismatchError("Pfister slots live in different fields")
            if slot.is_zero():
                raise UnsupportedInputError("bilinear Pfister slots must be nonzero")

    @property
    def field(self) -> FunctionField:
        return self.as_slot.field

    @property
    def fold(self) -> int:
        return len(self.bilinear_slots) + 1

    @property
    def dim(self) -> int:
        return 1 << self.fold

    def scales(self) -> list[FieldElem]:
        """Products of subsets of bilinear slots; bit j of the index selects slot j."""
        scales = [self.field.one()]
        for slot in self.bilinear_slots:
            scales = scales + [s * slot for s in scales]
        return scales

    def without_slot(self, index: int) -> "PfisterDesc":
        slots = self.bilinear_slots[:index] + self.bilinear_slots[index + 1:]
        return PfisterDesc(slots, self.as_slot)

    def map_entries(self, target: FunctionField, images: dict) -> "PfisterDesc":
        source = self.field
        return PfisterDesc(
            tuple(source.substitute(s, target, images) for s in self.bilinear_slots),
            source.substitute(self.as_slot, target, images),
        )

    def __str__(self) -> str:
        if not self.bilinear_slots:
            return f"<<{self.as_slot}]]"
        return f"<<{', '.join(str(s) for s in self.bilinear_slots)}; {self.as_slot}]]"


def expand_pfister(d: PfisterDesc) -> QuadForm:
    """
    Expand a Pfister descriptor into 2^(n-1) scaled copies of [1,a].

    The first block is 1*[1,a]; block m has scale equal to the product of the
    bilinear slots whose bit is set in m.
    """
    field = d.field
    base = BinaryBlock(field.one(), d.as_slot)
    return QuadForm(field, tuple(ScaledBlock(scale, base) for scale in d.scales()))


def sigma_S(forms: Sequence[PfisterDesc]) -> QuadForm:
    """Orthogonal sum of the expansions (all signs vanish in characteristic 2)."""
    if not forms:
        raise UnsupportedInputError("sigma_S needs at least one Pfister form")
    total = expand_pfister(forms[0])
    for d in forms[1:]:
        total = total.perp(expand_pfister(d))
    return total


def evaluate(q: QuadForm, v: Sequence[FieldElem]) -> FieldElem:
    return q.evaluate(v)


def arf(q: QuadForm) -> FieldElem:
    """Arf invariant representative: sum of a*b over the blocks."""
    total = q.field.zero()
    for _, block in q.blocks:
        total = total + block.a * block.b
    return total


def sub_pfister_positions(d: PfisterDesc, slot: int) -> list[int]:
    """Block positions of d that form the sub-Pfister form without bilinear slot `slot`."""
    return [m for m in range(1 << len(d.bilinear_slots)) if not m >> slot & 1]


def embed_vector(q: QuadForm, positions: Sequence[int], v: Sequence[FieldElem]) -> Vector:
    """Place the coordinates of a vector of a sub-form at the given block positions."""
    out = list(q.zero_vector())
    for j, block_index in enumerate(positions):
        out[2 * block_index] = v[2 * j]
        out[2 * block_index + 1] = v[2 * j + 1]
    return tuple(out)


def vectors(field: FunctionField, dim: int) -> Iterator[Vector]:
    """All vectors of a finite field space, lexicographically by packed value."""
    elements = list(field.elements())
    yield from itertools.product(elements, repeat=dim)


def first_zero(q: QuadForm) -> Optional[Vector]:
    """First nonzero isotropic vector by exhaustive enumeration (finite fields)."""
    if not q.field.is_finite:
        raise UnsupportedInputError("exhaustive search needs a finite field")
    for v in vectors(q.field, q.dim):
        if all(x.is_zero() for x in v):
            continue
        if q.evaluate(v).is_zero():
            return v
    return None


def is_zero_vector(v: Sequence[FieldElem]) -> bool:
    return all(x.is_zero() for x in v)
