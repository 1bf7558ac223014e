"""Splitting of quaternion symbols and isomorphism tests.

[a,b) is split exactly when a = lam^2 + lam + mu^2*b for some lam, mu; the
search below looks for such a witness and, failing that, tries to prove the
norm form anisotropic.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from src.brauer.symbols import Certificate, QSymbol, RewriteMove, is_split_witness, norm_form
from src.exceptions import UnsupportedInputError
from src.fields.rational import EtaleElem, FieldElem
from src.forms.isotropy import SearchBudget, Unknown, candidate_elements, represent
from src.forms.quadform import expand_pfister
from src.forms.residue import AnisoCert, find_residue_cert
from src.forms.roots import wp_preimage
from src.forms.witt import is_isometric

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Split:
    lam: FieldElem
    mu: FieldElem


@dataclass(frozen=True)
class Division:
    certificate: AnisoCert


SplitResult = Union[Split, Division, Unknown]


def _witness(q: QSymbol, lam: FieldElem, mu: FieldElem) -> Split:
    if not is_split_witness(q, lam, mu):
        raise UnsupportedInputError(f"internal split witness for {q} does not verify")
    return Split(lam, mu)


def split_test(q: QSymbol, budget: Optional[SearchBudget] = None, quick: bool = False) -> SplitResult:
    """
    Decide whether [a,b) is split.

    Args:
        q: Quaternion symbol
        budget: Search limits
        quick: Only try exact witnesses and low-degree mu; no residue
            certificate and no isotropy search of the norm form

    Returns:
        Split(lam, mu) with a = lam^2 + lam + mu^2*b verified, Division with an
        anisotropy certificate of the norm form, or Unknown
    """
    budget = budget or SearchBudget.default()
    field = q.field
    zero = field.zero()

    if q.a.is_zero():
        return Split(zero, zero)
    lam = wp_preimage(q.a)
    if lam is not None:
        return _witness(q, lam, zero)
    s = q.b.sqrt()
    if s is not None:
        return _witness(q, q.a, q.a / s)

    if field.is_finite:
        for mu in field.elements():
            lam = wp_preimage(q.a + mu.square() * q.b)
            if lam is not None:
                return _witness(q, lam, mu)
        raise UnsupportedInputError(f"{q} has no split witness over a finite field")

    if not quick:
        cert = find_residue_cert(expand_pfister(norm_form(q)), budget.exhaustive_limit)
        if cert is not None:
            logger.debug(f"{q} is a division algebra (residue certificate)")
            return Division(cert)

    for count, mu in enumerate(candidate_elements(field, budget.degree_bound)):
        if count >= budget.trials:
            break
        lam = wp_preimage(q.a + mu.square() * q.b)
        if lam is not None:
            return _witness(q, lam, mu)
    if quick:
        return Unknown(f"no low-degree split witness for {q}")

    vector = represent(expand_pfister(norm_form(q)), zero, budget)
    if vector is not None:
        lam, mu = recover_split_witness(q, vector)
        return _witness(q, lam, mu)
    return Unknown(f"no split witness and no certificate for {q}")


def recover_split_witness(q: QSymbol, v: Sequence[FieldElem]) -> tuple[FieldElem, FieldElem]:
    """
    Turn an isotropic vector of the norm form into (lam, mu).

    With v = (z1, z2), N(z1) = b*N(z2); w = z1*conj(z2)/N(z2) has norm b.

    Raises:
        UnsupportedInputError: If v is not an isotropic vector of the norm form
    """
    form = expand_pfister(norm_form(q))
    if len(v) != form.dim or all(x.is_zero() for x in v) or not form.evaluate(v).is_zero():
        raise UnsupportedInputError("not an isotropic vector of the norm form")
    field = q.field
    z1 = EtaleElem(q.a, v[0], v[1])
    z2 = EtaleElem(q.a, v[2], v[3])
    n2 = z2.norm()
    if n2.is_zero():
        # A nonzero element of norm zero: the etale algebra is split, so a is in the image of wp.
        lam = wp_preimage(q.a)
        if lam is None:
            raise UnsupportedInputError(f"{q.a} should be an Artin-Schreier value")
        return lam, field.zero()
    w = z1 * z2.conj()
    x, y = w.x / n2, w.y / n2
    if not y.is_zero():
        return x / y, y.inverse()
    return q.a, q.a / x


def norm_preimage(q: QSymbol, lam: FieldElem, mu: FieldElem) -> tuple[FieldElem, FieldElem]:
    """
    (x, y) with N_a(x + y*theta) = b, from a split witness of [a,b).

    Raises:
        UnsupportedInputError: If (lam, mu) is not a split witness
    """
    if not is_split_witness(q, lam, mu):
        raise UnsupportedInputError(f"({lam}, {mu}) is not a split witness for {q}")
    if not mu.is_zero():
        return lam / mu, mu.inverse()
    # a = lam^2 + lam: N_a(x + y*theta) = (x + lam*y)(x + (lam + 1)y).
    b = q.b
    one = q.field.one()
    return b + lam * (b + one), b + one


def split_to_trivial(q: QSymbol, lam: FieldElem, mu: FieldElem) -> Certificate:
    """Per-symbol certificate [a,b) -> [0,1) from a split witness."""
    if not is_split_witness(q, lam, mu):
        raise UnsupportedInputError(f"({lam}, {mu}) is not a split witness for {q}")
    field = q.field
    moves = []
    if not lam.is_zero():
        moves.append((0, RewriteMove.as_shift(lam)))
    if not mu.is_zero():
        moves.append((0, RewriteMove.slot_push(mu, field.zero())))
    current = Certificate.build((q,), moves)
    b = current.end[0].b
    if not b.is_one():
        moves.append((0, RewriteMove.norm_scale(field.one(), b + field.one())))
    return Certificate.build((q,), moves)


@dataclass(frozen=True)
class IsomorphismResult:
    verdict: Optional[bool]
    certificate: Optional[Certificate] = None
    reason: str = ""


def is_isomorphic(q1: QSymbol, q2: QSymbol, budget: Optional[SearchBudget] = None) -> IsomorphismResult:
    """
    Isomorphism of quaternion algebras.

    Certificates are tried first (identical, Artin-Schreier shift, norm scaling of
    the right slot); otherwise split tests and the norm-form isometry decide.
    """
    budget = budget or SearchBudget.default()
    if q1 == q2:
        return IsomorphismResult(True, Certificate.identity((q1,)), "identical")

    if q1.b == q2.b:
        lam = wp_preimage(q1.a + q2.a)
        if lam is not None:
            return IsomorphismResult(True, Certificate.build((q1,), [(0, RewriteMove.as_shift(lam))]), "as_shift")

    if q1.a == q2.a:
        # [a, b1) = [a, b2) iff b1/b2 is a norm, iff [a, b1/b2) is split.
        ratio = split_test(QSymbol(q1.a, q1.b / q2.b), budget)
        if isinstance(ratio, Split):
            x, y = norm_preimage(QSymbol(q1.a, q1.b / q2.b), ratio.lam, ratio.mu)
            cert = Certificate.build((q1,), [(0, RewriteMove.norm_scale(x, y))])
            return IsomorphismResult(True, cert, "norm_scale")

    first, second = split_test(q1, budget), split_test(q2, budget)
    if isinstance(first, Split) and isinstance(second, Split):
        return IsomorphismResult(True, None, "both split")
    if {type(first), type(second)} == {Split, Division}:
        return IsomorphismResult(False, None, "one split, one division")

    verdict = is_isometric(expand_pfister(norm_form(q1)), expand_pfister(norm_form(q2)), budget)
    return IsomorphismResult(verdict, None, "norm forms" if verdict is not None else "undecided")
