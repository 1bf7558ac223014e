"""Exact roots of quadratic equations over GF(2^k)(t1,...,tn).

The Artin-Schreier map x -> x^2 + x is additive, so after clearing denominators
the equation z^2 + v*z = N for a polynomial z becomes a linear system over GF(2)
in the coefficient bits of z. The degree of z is bounded in terms of v and N,
which makes membership in the image of the map decidable.
"""

import logging
from typing import Optional

from src.exceptions import UnsupportedInputError
from src.fields.linalg import gf2_solve
from src.fields.mpoly import MPoly, grlex_key
from src.fields.rational import FieldElem

logger = logging.getLogger(__name__)


def wp_preimage(c: FieldElem) -> Optional[FieldElem]:
    """
    Find lambda with lambda^2 + lambda = c, or prove there is none.

    Args:
        c: Any element of a function field or finite field

    Returns:
        One root (the other is lambda + 1), or None when c is not in the image
    """
    field = c.field
    if c.is_zero():
        return field.zero()
    if c.is_constant():
        root = field.base.artin_schreier(c.constant_value())
        return None if root is None else field.const(root)

    # A root u/v in lowest terms forces v^2 = den(c) and u^2 + v*u = num(c).
    v = c.den.sqrt()
    if v is None:
        return None
    u = _solve_polynomial(v, c.num)
    if u is None:
        return None
    return field.from_poly(u, v)


def _solve_polynomial(v: MPoly, n: MPoly) -> Optional[MPoly]:
    """Polynomial u with u^2 + v*u = n, or None."""
    nvars = n.nvars
    base = n.field
    k = base.k

    # deg u <= max(deg v, deg n / 2), in total degree and in each variable.
    total_bound = max(v.total_degree(), n.total_degree() // 2)
    var_bounds = [max(v.degree_in(i), n.degree_in(i) // 2) for i in range(nvars)]

    unknowns = list(_exponents(nvars, total_bound, var_bounds))
    if not unknowns:
        return None
    if len(unknowns) > 500:
        logger.debug(f"Artin-Schreier system with {len(unknowns) * k} unknowns")

    index: dict[tuple[int, ...], int] = {}

    def slot(e: tuple[int, ...]) -> int:
        if e not in index:
            index[e] = len(index)
        return index[e]

    v_terms = v.term_dict()
    columns = []
    for e in unknowns:
        for bit in range(k):
            coeff = 1 << bit
            image = 0
            square = tuple(2 * d for d in e)
            image ^= base.sqr(coeff) << (k * slot(square))
            for ev, cv in v_terms.items():
                target = tuple(x + y for x, y in zip(e, ev))
                image ^= base.mul(cv, coeff) << (k * slot(target))
            columns.append(image)

    target_vector = 0
    for e, coeff in n.term_dict().items():
        if e not in index:
            # n has a monomial no unknown can produce.
            return None
        target_vector ^= coeff << (k * index[e])

    combo = gf2_solve(columns, target_vector)
    if combo is None:
        return None
    terms: dict[tuple[int, ...], int] = {}
    for position, e in enumerate(unknowns):
        value = (combo >> (k * position)) & ((1 << k) - 1)
        if value:
            terms[e] = value
    return MPoly(base, n.variables, terms)


def _exponents(nvars: int, total: int, bounds: list[int]):
    """Exponent vectors with sum <= total and entry i <= bounds[i]."""
    if nvars == 0:
        yield ()
        return

    def rec(i: int, remaining: int, prefix: tuple[int, ...]):
        if i == nvars:
            yield prefix
            return
        for d in range(min(remaining, bounds[i]) + 1):
            yield from rec(i + 1, remaining - d, prefix + (d,))

    yield from rec(0, total, ())


def solve_quadratic(p: FieldElem, q: FieldElem, r: FieldElem) -> list[FieldElem]:
    """
    All roots in F of p*x^2 + q*x + r = 0.

    Returns:
        Roots sorted by canonical form (at most two)

    Raises:
        UnsupportedInputError: If the equation is identically zero
    """
    if p.is_zero():
        if q.is_zero():
            if r.is_zero():
                raise UnsupportedInputError("every element solves 0 = 0")
            return []
        return [r / q]
    if q.is_zero():
        root = (r / p).sqrt()
        return [] if root is None else [root]
    # x = (q/p) * y turns the equation into y^2 + y = p*r/q^2.
    shift = q / p
    lam = wp_preimage(p * r / q.square())
    if lam is None:
        return []
    roots = [shift * lam, shift * (lam + 1)]
    return sorted(roots, key=FieldElem.sort_key)


def wp_reduce(c: FieldElem) -> FieldElem:
    """
    Canonical representative of a polynomial modulo the image of x^2 + x.

    Square monomials are removed from the top down; the constant term becomes 0
    or the smallest trace-one constant.
    """
    if not c.is_polynomial():
        raise UnsupportedInputError(f"{c} is not a polynomial")
    field = c.field
    poly = c.num
    zero_exponent = (0,) * poly.nvars
    while True:
        squares = [e for e, _ in poly.terms() if e != zero_exponent and all(d % 2 == 0 for d in e)]
        if not squares:
            break
        top = max(squares, key=grlex_key)
        coeff = poly.term_dict()[top]
        root = MPoly.monomial(field.base, field.variables, tuple(d // 2 for d in top), field.base.sqrt(coeff))
        poly = poly + root.square() + root

    constant = poly.constant_value()
    if constant:
        poly = poly + MPoly.constant(field.base, field.variables, constant)
        if field.base.trace(constant):
            poly = poly + MPoly.constant(field.base, field.variables, _trace_one(field.base))
    return field.from_poly(poly)


def _trace_one(base) -> int:
    for value in base.elements():
        if base.trace(value):
            return value
    raise UnsupportedInputError("no trace-one element")
