"""Witt decomposition, hyperbolicity and isometry of quadratic forms.

A decomposition peels hyperbolic planes off a form one at a time: blocks with a
zero entry, pairs of blocks that are isometric (their sum is hyperbolic in
characteristic 2), and planes spanned by an isotropic vector and a partner found
through the polar form. Each step is recorded so the decomposition replays.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

from src.exceptions import DimensionMismatchError, UnsupportedInputError
from src.fields.rational import FieldElem
from src.forms.isotropy import Found, ProvablyAnisotropic, SearchBudget, isotropic_vector
from src.forms.quadform import BinaryBlock, QuadForm, ScaledBlock, Vector, is_zero_vector
from src.forms.residue import AnisoCert

logger = logging.getLogger(__name__)


# -- vector helpers ---------------------------------------------------------


def _add(u: Sequence[FieldElem], v: Sequence[FieldElem]) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def _scale(c: FieldElem, v: Sequence[FieldElem]) -> Vector:
    return tuple(c * x for x in v)


def _combine(u: Sequence[FieldElem], c: FieldElem, v: Sequence[FieldElem]) -> Vector:
    """u + c*v."""
    if c.is_zero():
        return tuple(u)
    return _add(u, _scale(c, v))


def _independent(vectors: Sequence[Vector], count: int) -> list[Vector]:
    """First `count` linearly independent vectors, by Gaussian elimination."""
    chosen: list[Vector] = []
    reduced_rows: list[tuple[int, Vector]] = []
    for vector in vectors:
        row = vector
        for pivot, basis_row in reduced_rows:
            row = _combine(row, row[pivot], basis_row)
        pivot = next((i for i, x in enumerate(row) if not x.is_zero()), None)
        if pivot is None:
            continue
        reduced_rows.append((pivot, _scale(row[pivot].inverse(), row)))
        chosen.append(vector)
        if len(chosen) == count:
            break
    return chosen


# -- splitting --------------------------------------------------------------


def _support(v: Sequence[FieldElem]) -> list[int]:
    return [i for i in range(len(v) // 2) if not (v[2 * i].is_zero() and v[2 * i + 1].is_zero())]


def split_off_hyperbolic(q: QuadForm, v: Sequence[FieldElem]) -> QuadForm:
    """
    Complement of a hyperbolic plane through an isotropic vector.

    Only blocks in the support of v are rewritten; the others are kept as they
    are and come first in the result.

    Args:
        q: Nonsingular form
        v: Nonzero vector with q(v) = 0

    Returns:
        q' with q isometric to [0,0] + q'

    Raises:
        UnsupportedInputError: If v is zero or not isotropic
    """
    if len(v) != q.dim:
        raise DimensionMismatchError(f"vector of length {len(v)} for a form of dimension {q.dim}")
    if is_zero_vector(v):
        raise UnsupportedInputError("cannot split along the zero vector")
    if not q.evaluate(v).is_zero():
        raise UnsupportedInputError("the splitting vector is not isotropic")

    support = _support(v)
    local = q.sub_form(support)
    v_local = tuple(x for i in support for x in (v[2 * i], v[2 * i + 1]))
    complement = _symplectic_complement(local, v_local)
    rest = q.without(set(support))
    return QuadForm(q.field, rest.blocks + complement.blocks)


def _symplectic_complement(q: QuadForm, v: Vector) -> QuadForm:
    n = q.dim
    basis = [q.unit_vector(i) for i in range(n)]

    pairing = None
    for e in basis:
        value = q.polar(v, e)
        if not value.is_zero():
            pairing = _scale(value.inverse(), e)
            break
    if pairing is None:
        raise UnsupportedInputError("isotropic vector in the radical of a nonsingular form")
    # Make the partner isotropic: w' = w + q(w) v keeps B(v, w') = 1.
    partner = _combine(pairing, q.evaluate(pairing), v)

    projected = [
        _combine(_combine(u, q.polar(u, partner), v), q.polar(u, v), partner)
        for u in basis
    ]
    spanning = _independent(projected, n - 2)
    if len(spanning) != n - 2:
        raise UnsupportedInputError("orthogonal complement has the wrong rank")

    blocks = []
    pending = spanning
    while pending:
        e = pending[0]
        f_index = next((k for k in range(1, len(pending)) if not q.polar(e, pending[k]).is_zero()), None)
        if f_index is None:
            raise UnsupportedInputError("degenerate complement while building a symplectic basis")
        f = _scale(q.polar(e, pending[f_index]).inverse(), pending[f_index])
        blocks.append(ScaledBlock(q.field.one(), BinaryBlock(q.evaluate(e), q.evaluate(f))))
        pending = [
            _combine(_combine(u, q.polar(u, f), e), q.polar(u, e), f)
            for k, u in enumerate(pending)
            if k not in (0, f_index)
        ]
    return QuadForm(q.field, tuple(blocks))


# -- decomposition ----------------------------------------------------------


@dataclass(frozen=True)
class WittStep:
    """One hyperbolic plane removed: a zero-entry block, an isometric pair, or a split."""

    kind: str
    indices: tuple[int, ...] = ()
    vector: Vector = ()

    @property
    def planes(self) -> int:
        return 2 if self.kind == "cancel_pair" else 1


@dataclass(frozen=True)
class WittCertificate:
    start: QuadForm
    steps: tuple[WittStep, ...]
    end: QuadForm


@dataclass(frozen=True)
class WittDecomposition:
    """Witt index, anisotropic part and how reliable both are."""

    index: int
    aniso_part: QuadForm
    status: str
    certificate: WittCertificate
    aniso_certificate: Optional[AnisoCert] = None

    @property
    def is_exact(self) -> bool:
        return self.status == "exact"


def _zero_entry_block(q: QuadForm) -> Optional[int]:
    for index, (_, block) in enumerate(q.blocks):
        if block.a.is_zero() or block.b.is_zero():
            return index
    return None


def _isometric_blocks(first: ScaledBlock, second: ScaledBlock) -> bool:
    a1, b1 = first.normalized()
    a2, b2 = second.normalized()
    return (a1 == a2 and b1 == b2) or (a1 == b2 and b1 == a2)


def _cancelling_pair(q: QuadForm) -> Optional[tuple[int, int]]:
    for i in range(len(q.blocks)):
        for j in range(i + 1, len(q.blocks)):
            if _isometric_blocks(q.blocks[i], q.blocks[j]):
                return i, j
    return None


def apply_step(q: QuadForm, step: WittStep) -> QuadForm:
    """
    Apply one recorded step.

    Raises:
        UnsupportedInputError: If the step does not apply to q
    """
    if step.kind == "hyperbolic_block":
        (index,) = step.indices
        _, block = q.blocks[index]
        if not (block.a.is_zero() or block.b.is_zero()):
            raise UnsupportedInputError(f"block {index} is not a hyperbolic plane")
        return q.without({index})
    if step.kind == "cancel_pair":
        i, j = step.indices
        if i == j or not _isometric_blocks(q.blocks[i], q.blocks[j]):
            raise UnsupportedInputError(f"blocks {i} and {j} are not isometric")
        return q.without({i, j})
    if step.kind == "split":
        return split_off_hyperbolic(q, step.vector)
    raise UnsupportedInputError(f"unknown Witt step {step.kind!r}")


def witt_decompose(q: QuadForm, budget: Optional[SearchBudget] = None) -> WittDecomposition:
    """
    Split off hyperbolic planes until the rest is anisotropic or the search gives up.

    Args:
        q: Nonsingular form
        budget: Search limits for isotropy

    Returns:
        WittDecomposition with status "exact" when the remainder is proved
        anisotropic (or empty) and "lower_bound" otherwise
    """
    budget = budget or SearchBudget.default()
    current = q
    steps: list[WittStep] = []
    index = 0
    aniso_certificate = None
    status = "lower_bound"

    while True:
        zero_block = _zero_entry_block(current)
        if zero_block is not None:
            step = WittStep(kind="hyperbolic_block", indices=(zero_block,))
        else:
            pair = _cancelling_pair(current)
            if pair is not None:
                step = WittStep(kind="cancel_pair", indices=pair)
            else:
                result = isotropic_vector(current, budget)
                if isinstance(result, Found):
                    step = WittStep(kind="split", vector=result.vector)
                elif isinstance(result, ProvablyAnisotropic):
                    status = "exact"
                    aniso_certificate = result.certificate
                    break
                else:
                    logger.debug(f"Witt decomposition stopped at dim {current.dim}: {result.reason}")
                    break
        current = apply_step(current, step)
        steps.append(step)
        index += step.planes

    logger.debug(f"Witt decomposition of dim {q.dim}: index {index}, status {status}")
    return WittDecomposition(
        index=index,
        aniso_part=current,
        status=status,
        certificate=WittCertificate(start=q, steps=tuple(steps), end=current),
        aniso_certificate=aniso_certificate,
    )


def verify_witt_certificate(cert: WittCertificate) -> bool:
    current = cert.start
    try:
        for step in cert.steps:
            current = apply_step(current, step)
    except (UnsupportedInputError, DimensionMismatchError, IndexError, ValueError) as e:
        logger.debug(f"Witt certificate replay failed: {e}")
        return False
    return current == cert.end


def is_hyperbolic(q: QuadForm, budget: Optional[SearchBudget] = None) -> Optional[bool]:
    """True, False, or None when the search could not decide."""
    decomposition = witt_decompose(q, budget)
    if 2 * decomposition.index == q.dim:
        return True
    if decomposition.is_exact:
        return False
    return None


def is_isometric(q1: QuadForm, q2: QuadForm, budget: Optional[SearchBudget] = None) -> Optional[bool]:
    """
    Isometry of forms of equal dimension via hyperbolicity of q1 + q2.

    Raises:
        DimensionMismatchError: If the dimensions differ
    """
    if q1.dim != q2.dim:
        raise DimensionMismatchError(f"cannot compare forms of dimension {q1.dim} and {q2.dim}")
    if q1 == q2:
        return True
    return is_hyperbolic(q1.perp(q2), budget)


def witt_equivalent(q1: QuadForm, q2: QuadForm, budget: Optional[SearchBudget] = None) -> Optional[bool]:
    return is_hyperbolic(q1.perp(q2), budget)
