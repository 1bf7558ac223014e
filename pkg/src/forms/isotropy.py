"""Isotropy and representation search for quadratic forms.

The solver is three-valued. A Found vector is always re-evaluated before it is
returned, ProvablyAnisotropic always carries a replayable certificate, and
everything else is Unknown.
"""

import logging
import random
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from src.config import settings
from src.exceptions import UnsupportedInputError
from src.fields.rational import FieldElem, FunctionField
from src.forms.quadform import QuadForm, ScaledBlock, Vector, first_zero, is_zero_vector, vectors
from src.forms.residue import AnisoCert, find_residue_cert
from src.forms.roots import solve_quadratic

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchBudget:
    """Limits for every bounded search: exhaustive threshold, degree bound, trials and seed."""

    exhaustive_limit: int
    degree_bound: int
    trials: int
    seed: int

    @classmethod
    def default(cls) -> "SearchBudget":
        return cls(
            exhaustive_limit=settings.EXHAUSTIVE_LIMIT,
            degree_bound=settings.BUDGET_DEGREE,
            trials=settings.BUDGET_TRIALS,
            seed=settings.SEED,
        )

    def with_overrides(
        self,
        degree_bound: Optional[int] = None,
        trials: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> "SearchBudget":
        return SearchBudget(
            exhaustive_limit=self.exhaustive_limit,
            degree_bound=self.degree_bound if degree_bound is None else degree_bound,
            trials=self.trials if trials is None else trials,
            seed=self.seed if seed is None else seed,
        )

    def rng(self, salt: int = 0) -> random.Random:
        return random.Random(self.seed * 1000003 + salt)


@dataclass(frozen=True)
class Found:
    vector: Vector


@dataclass(frozen=True)
class ProvablyAnisotropic:
    certificate: AnisoCert


@dataclass(frozen=True)
class Unknown:
    reason: str


IsotropyResult = Union[Found, ProvablyAnisotropic, Unknown]


def verdict_of(result: IsotropyResult) -> Optional[bool]:
    """True for isotropic, False for anisotropic, None for Unknown."""
    if isinstance(result, Found):
        return True
    if isinstance(result, ProvablyAnisotropic):
        return False
    return None


def candidate_elements(field: FunctionField, degree: int) -> list[FieldElem]:
    """
    Low-complexity elements in search order.

    Constants come first (all of them for fields of order <= 4, otherwise 0, 1
    and the generator), then monomials of degree 1..degree and each monomial
    plus one.
    """
    base = field.base
    if field.is_finite:
        count = base.order if base.order <= 16 else 16
        return [field.const(value) for value in range(count)]
    if base.order <= 4:
        elements = [field.const(value) for value in range(base.order)]
    else:
        elements = [field.zero(), field.one(), field.gen()]
    one = field.one()
    for exponent in field.monomials(degree):
        if sum(exponent) == 0:
            continue
        monomial = field.monomial(exponent)
        elements.append(monomial)
        elements.append(monomial + one)
    return elements


def solve_block(block: ScaledBlock, target: FieldElem, y: FieldElem) -> list[FieldElem]:
    """All x with c*(a*x^2 + x*y + b*y^2) = target for fixed y."""
    scale, inner = block
    p = scale * inner.a
    q = scale * y
    r = scale * inner.b * y.square() + target
    if p.is_zero() and q.is_zero():
        return [target.field.one()] if r.is_zero() else []
    return solve_quadratic(p, q, r)


def _place(q: QuadForm, assignments: dict[int, tuple[FieldElem, FieldElem]]) -> Vector:
    vector = list(q.zero_vector())
    for index, (x, y) in assignments.items():
        vector[2 * index] = x
        vector[2 * index + 1] = y
    return tuple(vector)


def _checked(q: QuadForm, target: FieldElem, vector: Optional[Vector]) -> Optional[Vector]:
    if vector is None or is_zero_vector(vector) or q.evaluate(vector) != target:
        return None
    return vector


def _hyperbolic_entry(q: QuadForm) -> Optional[Vector]:
    for index, (_, block) in enumerate(q.blocks):
        one, zero = q.field.one(), q.field.zero()
        if block.a.is_zero():
            return _place(q, {index: (one, zero)})
        if block.b.is_zero():
            return _place(q, {index: (zero, one)})
    return None


def _single_blocks(q: QuadForm, target: FieldElem, ys: list[FieldElem]) -> Iterator[Optional[Vector]]:
    for index, block in enumerate(q.blocks):
        for y in ys:
            for x in solve_block(block, target, y):
                yield _place(q, {index: (x, y)})
            yield None


def _pairs(q: QuadForm, target: FieldElem, candidates: list[FieldElem]) -> Iterator[Optional[Vector]]:
    """One block from candidate pairs, another block solved for the rest of the target."""
    field = q.field
    fixed_ys = [field.zero(), field.one()]
    for level in range(1, len(candidates) + 1):
        # Candidate pairs whose larger index is level - 1, so smaller elements come first.
        newest = candidates[level - 1]
        pairs = [(newest, c) for c in candidates[:level]] + [(c, newest) for c in candidates[: level - 1]]
        for x_i, y_i in pairs:
            if x_i.is_zero() and y_i.is_zero():
                continue
            for i, block_i in enumerate(q.blocks):
                rest = target + block_i.evaluate(x_i, y_i)
                for j, block_j in enumerate(q.blocks):
                    if j == i:
                        continue
                    for y_j in fixed_ys:
                        for x_j in solve_block(block_j, rest, y_j):
                            yield _place(q, {i: (x_i, y_i), j: (x_j, y_j)})
                        yield None


def _random_vectors(q: QuadForm, target: FieldElem, budget: SearchBudget) -> Iterator[Optional[Vector]]:
    field = q.field
    rng = budget.rng(q.dim)
    fixed_ys = [field.zero(), field.one()]
    while True:
        j = rng.randrange(len(q.blocks))
        assignments = {}
        for i in range(len(q.blocks)):
            if i == j or rng.random() < 0.5:
                continue
            assignments[i] = (
                field.random_element(rng, budget.degree_bound),
                field.random_element(rng, budget.degree_bound),
            )
        partial = q.evaluate(_place(q, assignments))
        y_j = fixed_ys[rng.randrange(2)] if rng.random() < 0.75 else field.random_element(rng, budget.degree_bound)
        for x_j in solve_block(q.blocks[j], target + partial, y_j):
            assignments[j] = (x_j, y_j)
            yield _place(q, assignments)
        yield None


def _first_checked(
    q: QuadForm, target: FieldElem, stream: Iterator[Optional[Vector]], trials: int, stage: str
) -> Optional[Vector]:
    """First verified vector of a stream; every solve attempt counts as one trial."""
    for count, vector in enumerate(stream):
        if count >= trials:
            logger.debug(f"{stage} stage exhausted after {trials} trials on dim {q.dim}")
            return None
        checked = _checked(q, target, vector)
        if checked is not None:
            logger.debug(f"{stage} stage found a vector after {count + 1} trials")
            return checked
    return None


def _exhaustive(q: QuadForm, target: FieldElem) -> Optional[Vector]:
    if target.is_zero():
        return first_zero(q)
    for vector in vectors(q.field, q.dim):
        if q.evaluate(vector) == target:
            return vector
    return None


def represent(q: QuadForm, target: FieldElem, budget: Optional[SearchBudget] = None) -> Optional[Vector]:
    """
    Find a nonzero v with q(v) = target within the budget.

    Args:
        q: Form to search
        target: Value to represent (0 asks for an isotropic vector)
        budget: Search limits; defaults from settings

    Returns:
        A verified vector, or None when the search gave up
    """
    budget = budget or SearchBudget.default()
    if target.field != q.field:
        raise UnsupportedInputError(f"target {target} is not in {q.field}")
    if q.dim == 0:
        return None
    if target.is_zero():
        vector = _hyperbolic_entry(q)
        if vector is not None:
            return vector

    field = q.field
    if field.is_finite and field.order ** q.dim <= budget.exhaustive_limit:
        return _exhaustive(q, target)

    ys = [field.one()] if target.is_zero() else [field.zero(), field.one()]
    found = _first_checked(q, target, _single_blocks(q, target, ys), budget.trials, "single-block")
    if found is not None or len(q.blocks) == 1:
        return found

    candidates = candidate_elements(field, budget.degree_bound)
    found = _first_checked(q, target, _pairs(q, target, candidates), budget.trials, "pair")
    if found is not None:
        return found
    return _first_checked(q, target, _random_vectors(q, target, budget), budget.trials, "random")


def isotropic_vector(q: QuadForm, budget: Optional[SearchBudget] = None) -> IsotropyResult:
    """
    Decide isotropy of q within a budget.

    Args:
        q: Nonsingular form
        budget: Search limits; defaults from settings

    Returns:
        Found(v) with q(v) = 0 and v != 0, ProvablyAnisotropic(certificate) or Unknown
    """
    budget = budget or SearchBudget.default()
    field = q.field
    if q.dim == 0:
        return ProvablyAnisotropic(AnisoCert(kind="empty", form=q))

    vector = _hyperbolic_entry(q)
    if vector is not None:
        return Found(vector)

    if field.is_finite and field.order ** q.dim <= budget.exhaustive_limit:
        vector = first_zero(q)
        if vector is not None:
            return Found(vector)
        if q.dim == 2:
            return ProvablyAnisotropic(AnisoCert(kind="exhaustion", form=q))
        return Unknown("exhaustive search found nothing in dimension > 2")

    zero = field.zero()
    if q.dim == 2:
        roots = _first_checked(q, zero, _single_blocks(q, zero, [field.one()]), 2, "single-block")
        if roots is not None:
            return Found(roots)
        cert = find_residue_cert(q, budget.exhaustive_limit)
        if cert is not None:
            return ProvablyAnisotropic(cert)
        return Unknown("binary form without a certificate")

    if not field.is_finite:
        cert = find_residue_cert(q, budget.exhaustive_limit)
        if cert is not None:
            return ProvablyAnisotropic(cert)

    vector = represent(q, zero, budget)
    if vector is not None:
        return Found(vector)
    return Unknown(f"no isotropic vector within {budget.trials} trials at degree {budget.degree_bound}")
