"""Descent of linked triples of n-fold Pfister forms.

For phi_i = <<b_i; pi]] (b3 = b1*b2) the sum of the three forms is Witt
equivalent to rho = <<b1, b2; pi]]. If rho is anisotropic the triple needs the
n-1 slots of pi plus b1 and b2. Otherwise one of the following gives a
presentation over a field with one generator fewer:

* pi is isotropic, so every phi_i is hyperbolic;
* phi_1 (or phi_2) is isotropic, so b1 (or b2) is a value of pi;
* b1*pi + b2*pi is isotropic, so phi_1 and phi_2 are isometric;
* b1*f + b2*g = 1 with f, g values of pi, so b1*f and b2*g = b1*f + 1 replace b1, b2.
"""

import logging
from typing import Optional, Sequence

from src.descent.base import BUDGET_EXHAUSTED, SUCCESS, DescentReport, LinkedTriple
from src.descent.generators import GeneratorPool
from src.fields.rational import FieldElem
from src.forms.isotropy import Found, SearchBudget, isotropic_vector, represent
from src.forms.pfister_moves import PfisterCertificate, PfisterMove
from src.forms.quadform import PfisterDesc, QuadForm, Vector, expand_pfister, is_zero_vector
from src.forms.residue import AnisoCert, find_residue_cert

logger = logging.getLogger(__name__)


def _part(v: Sequence[FieldElem], part: int, stride: int, blocks: int) -> Vector:
    """Coordinates of the copy `part` of pi inside a form with `stride` copies."""
    out = []
    for p in range(blocks):
        m = p * stride + part
        out.extend((v[2 * m], v[2 * m + 1]))
    return tuple(out)


def _embed(form: QuadForm, stride: int, parts: dict[int, Vector]) -> Vector:
    out = list(form.zero_vector())
    for part, w in parts.items():
        for p in range(len(w) // 2):
            m = p * stride + part
            out[2 * m], out[2 * m + 1] = w[2 * p], w[2 * p + 1]
    return tuple(out)


def _scaled(c: FieldElem, w: Vector) -> Vector:
    return tuple(c * x for x in w)


class _TripleDescent:
    """One run of the descent on a fixed triple."""

    def __init__(self, triple: LinkedTriple, budget: SearchBudget):
        self.triple = triple
        self.budget = budget
        self.field = triple.field
        self.pi = triple.pi
        self.pi_form = expand_pfister(self.pi)
        self.blocks = len(self.pi_form.blocks)
        self.forms = triple.forms()
        self.rho = triple.rho
        self.rho_form = expand_pfister(self.rho)

    # -- report assembly --------------------------------------------------

    def _report(
        self,
        case: str,
        pool: GeneratorPool,
        slots: tuple,
        moves: tuple[list[PfisterMove], list[PfisterMove], list[PfisterMove]],
        rho_vector: Optional[Vector] = None,
        rho_certificate: Optional[AnisoCert] = None,
    ) -> DescentReport:
        """`slots` are the first bilinear slots of psi_1..psi_3 as elements of L (or None for pi-hyperbolic)."""
        L = pool.build()
        if slots is None:
            descended = tuple(
                PfisterDesc(tuple(L.one() for _ in phi.bilinear_slots), L.zero()) for phi in self.forms
            )
        else:
            pi_bilinear = tuple(pool.lift(s) for s in self.pi.bilinear_slots)
            pi_as = pool.lift(self.pi.as_slot)
            descended = tuple(PfisterDesc((slot,) + pi_bilinear, pi_as) for slot in slots)
        certificates = tuple(PfisterCertificate.build(phi, m) for phi, m in zip(self.forms, moves))
        logger.info(f"Triple descent (n={self.triple.n}): case {case}, {len(pool)} generators")
        return DescentReport(
            kind="triple",
            case=case,
            status=SUCCESS,
            field=self.field,
            generators=pool.generators,
            descended_field=L,
            descended=descended,
            certificates=certificates,
            rho=self.rho,
            rho_vector=rho_vector,
            rho_certificate=rho_certificate,
        )

    def _pool(self, *extra: FieldElem) -> GeneratorPool:
        return GeneratorPool(self.field).add(*self.triple.slots, *extra)

    # -- cases --------------------------------------------------------------

    def anisotropic(self, cert: AnisoCert) -> DescentReport:
        pool = self._pool(self.triple.b1, self.triple.b2)
        u1, u2 = pool.lift(self.triple.b1), pool.lift(self.triple.b2)
        return self._report("anisotropic", pool, (u1, u2, u1 * u2), ([], [], []), rho_certificate=cert)

    def pi_isotropic(self, w: Vector) -> DescentReport:
        moves = tuple(
            [PfisterMove.hyperbolic(_embed(expand_pfister(phi), 2, {0: w}))] for phi in self.forms
        )
        rho_vector = _embed(self.rho_form, 4, {0: w})
        return self._report("pi_isotropic", GeneratorPool(self.field), None, moves, rho_vector=rho_vector)

    def phi_isotropic(self, index: int, w1: Vector, w2: Vector) -> DescentReport:
        """pi(w1) = b_index * pi(w2) for index 0 (phi_1) or 1 (phi_2)."""
        if is_zero_vector(w2):
            return self.pi_isotropic(w1)
        f1, f2 = self.pi_form.evaluate(w1), self.pi_form.evaluate(w2)
        if f2.is_zero():
            return self.pi_isotropic(w2)
        if f1.is_zero():
            return self.pi_isotropic(w1)

        to_one = [PfisterMove.value_scale(0, w2), PfisterMove.value_scale(0, _scaled(f1.inverse(), w1))]
        b1, b2 = self.triple.b1, self.triple.b2
        if index == 0:
            pool = self._pool(b2)
            one, other = pool.build().one(), pool.lift(b2)
            slots, moves = (one, other, other), (to_one, [], list(to_one))
            rho_vector = _embed(self.rho_form, 4, {0: w1, 1: w2})
        else:
            pool = self._pool(b1)
            one, other = pool.build().one(), pool.lift(b1)
            slots, moves = (other, one, other), ([], to_one, list(to_one))
            rho_vector = _embed(self.rho_form, 4, {0: w1, 2: w2})
        return self._report("phi_isotropic", pool, slots, moves, rho_vector=rho_vector)

    def middle_isotropic(self, w1: Vector, w2: Vector) -> DescentReport:
        """b1*pi(w1) = b2*pi(w2): phi_1 and phi_2 are isometric."""
        if is_zero_vector(w1):
            return self.pi_isotropic(w2)
        if is_zero_vector(w2):
            return self.pi_isotropic(w1)
        f1, f2 = self.pi_form.evaluate(w1), self.pi_form.evaluate(w2)
        if f1.is_zero():
            return self.pi_isotropic(w1)
        if f2.is_zero():
            return self.pi_isotropic(w2)

        b1 = self.triple.b1
        to_b1 = [PfisterMove.value_scale(0, w2), PfisterMove.value_scale(0, _scaled(f1.inverse(), w1))]
        pool = self._pool(b1)
        u = pool.lift(b1)
        rho_vector = _embed(self.rho_form, 4, {1: w1, 2: w2})
        return self._report("middle_isotropic", pool, (u, u, u * u), ([], to_b1, list(to_b1)), rho_vector=rho_vector)

    def represents_one(self, w1: Vector, w2: Vector) -> DescentReport:
        """b1*pi(w1) + b2*pi(w2) = 1."""
        e1 = self.pi_form.unit_vector(0)
        if is_zero_vector(w1):
            return self.phi_isotropic(1, e1, w2)
        if is_zero_vector(w2):
            return self.phi_isotropic(0, e1, w1)
        f, g = self.pi_form.evaluate(w1), self.pi_form.evaluate(w2)
        if f.is_zero():
            return self.pi_isotropic(w1)
        if g.is_zero():
            return self.pi_isotropic(w2)

        b1_new = self.triple.b1 * f
        pool = self._pool(b1_new)
        u = pool.lift(b1_new)
        v = u + pool.build().one()
        moves = (
            [PfisterMove.value_scale(0, w1)],
            [PfisterMove.value_scale(0, w2)],
            [PfisterMove.value_scale(0, w1), PfisterMove.value_scale(0, w2)],
        )
        rho_vector = _embed(self.rho_form, 4, {0: e1, 1: w1, 2: w2})
        return self._report("hyperbolic", pool, (u, v, u * v), moves, rho_vector=rho_vector)

    # -- driver -------------------------------------------------------------

    def run(self) -> DescentReport:
        cert = find_residue_cert(self.rho_form, self.budget.exhaustive_limit)
        if cert is not None:
            return self.anisotropic(cert)

        result = isotropic_vector(self.pi_form, self.budget)
        if isinstance(result, Found):
            return self.pi_isotropic(result.vector)

        for index in (0, 1):
            phi_form = expand_pfister(self.forms[index])
            result = isotropic_vector(phi_form, self.budget)
            if isinstance(result, Found):
                v = result.vector
                return self.phi_isotropic(index, _part(v, 0, 2, self.blocks), _part(v, 1, 2, self.blocks))

        b1, b2 = self.triple.b1, self.triple.b2
        middle = self.pi_form.scaled(b1).perp(self.pi_form.scaled(b2))
        size = self.pi_form.dim
        result = isotropic_vector(middle, self.budget)
        if isinstance(result, Found):
            v = result.vector
            return self.middle_isotropic(v[:size], v[size:])

        v = represent(middle, self.field.one(), self.budget)
        if v is not None:
            return self.represents_one(v[:size], v[size:])

        logger.warning(f"Triple descent (n={self.triple.n}) exhausted its budget")
        return DescentReport(
            kind="triple",
            case="undecided",
            status=BUDGET_EXHAUSTED,
            field=self.field,
            rho=self.rho,
            notes=("no certificate for rho and no isotropy witness within the budget",),
        )


def triple_descend(triple: LinkedTriple, budget: Optional[SearchBudget] = None) -> DescentReport:
    """
    Descend a linked triple to as few generators as the witnesses allow.

    Args:
        triple: The linked triple
        budget: Search limits

    Returns:
        DescentReport with at most n generators when rho has an isotropic
        vector, exactly the n+1 entries (minus constants) when rho is certified
        anisotropic, or status budget_exhausted
    """
    return _TripleDescent(triple, budget or SearchBudget.default()).run()
