"""Sparse multivariate polynomials over GF(2^k).

Terms are stored as a dict from exponent tuples to nonzero int coefficients.
Monomials are ordered graded-lexicographically with the declared variable order
(total degree first, then the exponent tuple compared left to right).
"""

from typing import Iterable, Iterator, Optional

from src.exceptions import DivisionByZeroError, FieldMismatchError
from src.fields.binary import BinaryField

Exponent = tuple[int, ...]
Terms = dict[Exponent, int]


def grlex_key(exponent: Exponent) -> tuple[int, Exponent]:
    return (sum(exponent), exponent)


class MPoly:
    """An immutable polynomial in a fixed list of variables."""

    __slots__ = ("field", "variables", "_terms", "_hash")

    def __init__(self, field: BinaryField, variables: tuple[str, ...], terms: Optional[Terms] = None):
        self.field = field
        self.variables = variables
        self._terms: Terms = {e: c for e, c in (terms or {}).items() if c}
        self._hash: Optional[int] = None

    # -- construction -------------------------------------------------

    @classmethod
    def constant(cls, field: BinaryField, variables: tuple[str, ...], value: int) -> "MPoly":
        return cls(field, variables, {(0,) * len(variables): value})

    @classmethod
    def monomial(cls, field: BinaryField, variables: tuple[str, ...], exponent: Exponent, coeff: int = 1) -> "MPoly":
        return cls(field, variables, {tuple(exponent): coeff})

    def _new(self, terms: Terms) -> "MPoly":
        poly = MPoly.__new__(MPoly)
        poly.field = self.field
        poly.variables = self.variables
        poly._terms = terms
        poly._hash = None
        return poly

    # -- inspection ---------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def terms(self) -> Iterator[tuple[Exponent, int]]:
        """Terms in decreasing monomial order."""
        for exponent in sorted(self._terms, key=grlex_key, reverse=True):
            yield exponent, self._terms[exponent]

    def term_dict(self) -> Terms:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> int:
        """Coefficient of the constant monomial."""
        return self._terms.get((0,) * self.nvars, 0)

    def is_one(self) -> bool:
        return self.is_constant() and self.constant_value() == 1

    def leading(self) -> tuple[Exponent, int]:
        exponent = max(self._terms, key=grlex_key)
        return exponent, self._terms[exponent]

    def total_degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def degree_in(self, index: int) -> int:
        if not self._terms:
            return -1
        return max(e[index] for e in self._terms)

    def min_exponent(self, index: int) -> int:
        return min(e[index] for e in self._terms)

    def used_variables(self) -> set[int]:
        return {i for e in self._terms for i, d in enumerate(e) if d}

    def is_square(self) -> bool:
        """True when every exponent is even (coefficients always have roots)."""
        return all(d % 2 == 0 for e in self._terms for d in e)

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: "MPoly") -> None:
        if self.field is not other.field or self.variables != other.variables:
            raise FieldMismatchError(
                f"polynomials over different rings: {self.variables} vs {other.variables}"
            )

    def __add__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        return self._new(add_terms(self._terms, other._terms))

    __sub__ = __add__

    def __mul__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        return self._new(mul_terms(self.field, self._terms, other._terms))

    def scale(self, coeff: int) -> "MPoly":
        if coeff == 0:
            return self._new({})
        field = self.field
        return self._new({e: field.mul(c, coeff) for e, c in self._terms.items()})

    def square(self) -> "MPoly":
        field = self.field
        return self._new({tuple(2 * d for d in e): field.sqr(c) for e, c in self._terms.items()})

    def sqrt(self) -> Optional["MPoly"]:
        """Exact square root, or None when some exponent is odd."""
        if not self.is_square():
            return None
        field = self.field
        return self._new({tuple(d // 2 for d in e): field.sqrt(c) for e, c in self._terms.items()})

    def __pow__(self, n: int) -> "MPoly":
        result = MPoly.constant(self.field, self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base.square()
            n >>= 1
        return result

    def monic(self) -> "MPoly":
        if not self._terms:
            return self
        _, lc = self.leading()
        return self.scale(self.field.inv(lc))

    def exact_div(self, other: "MPoly") -> "MPoly":
        self._check(other)
        return self._new(div_terms(self.field, self._terms, other._terms))

    def gcd(self, other: "MPoly") -> "MPoly":
        """Monic greatest common divisor (gcd(0, 0) = 0)."""
        self._check(other)
        return self._new(gcd_terms(self.field, self.nvars, self._terms, other._terms))

    def restrict_lowest(self, index: int) -> tuple[int, "MPoly"]:
        """
        Split off the lowest power of a variable.

        Returns (m, p) where m is the smallest exponent of the variable and p
        collects the terms with exactly that exponent, with the variable removed.
        """
        m = self.min_exponent(index)
        variables = self.variables[:index] + self.variables[index + 1:]
        terms = {e[:index] + e[index + 1:]: c for e, c in self._terms.items() if e[index] == m}
        return m, MPoly(self.field, variables, terms)

    # -- comparison ---------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        return (
            self.field is other.field
            and self.variables == other.variables
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field.k, self.variables, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"MPoly({format_poly(self)!r})"


# -- term-level helpers (shared with the gcd and root solvers) -------------


def add_terms(a: Terms, b: Terms) -> Terms:
    if len(a) < len(b):
        a, b = b, a
    result = dict(a)
    for e, c in b.items():
        value = result.get(e, 0) ^ c
        if value:
            result[e] = value
        else:
            result.pop(e, None)
    return result


def mul_terms(field: BinaryField, a: Terms, b: Terms) -> Terms:
    result: Terms = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            value = result.get(e, 0) ^ field.mul(ca, cb)
            if value:
                result[e] = value
            else:
                result.pop(e, None)
    return result


def div_terms(field: BinaryField, a: Terms, b: Terms) -> Terms:
    """Exact division; raises when b does not divide a."""
    if not b:
        raise DivisionByZeroError("division by the zero polynomial")
    lead_b = max(b, key=grlex_key)
    inv_lc = field.inv(b[lead_b])
    quotient: Terms = {}
    remainder = dict(a)
    while remainder:
        lead_r = max(remainder, key=grlex_key)
        shift = tuple(x - y for x, y in zip(lead_r, lead_b))
        if any(d < 0 for d in shift):
            raise ArithmeticError("inexact polynomial division")
        coeff = field.mul(remainder[lead_r], inv_lc)
        quotient[shift] = coeff
        remainder = add_terms(remainder, mul_terms(field, {shift: coeff}, b))
    return quotient


def _one(nvars: int) -> Terms:
    return {(0,) * nvars: 1}


def _monic_terms(field: BinaryField, a: Terms) -> Terms:
    lead = max(a, key=grlex_key)
    inv_lc = field.inv(a[lead])
    return {e: field.mul(c, inv_lc) for e, c in a.items()}


def _variables_of(a: Terms) -> set[int]:
    return {i for e in a for i, d in enumerate(e) if d}


def _coefficients(a: Terms, index: int) -> dict[int, Terms]:
    """Coefficients of a as a polynomial in one variable."""
    coeffs: dict[int, Terms] = {}
    for e, c in a.items():
        stripped = e[:index] + (0,) + e[index + 1:]
        coeffs.setdefault(e[index], {})[stripped] = c
    return coeffs


def _content(field: BinaryField, nvars: int, a: Terms, index: int) -> Terms:
    content: Terms = {}
    for coeff in _coefficients(a, index).values():
        content = gcd_terms(field, nvars, content, coeff)
        if not _variables_of(content):
            return _one(nvars)
    return content


def _prem(field: BinaryField, a: Terms, b: Terms, index: int) -> Terms:
    """Pseudo-remainder of a by b in the given variable."""
    coeffs_b = _coefficients(b, index)
    degree_b = max(coeffs_b)
    lc_b = coeffs_b[degree_b]
    remainder = a
    while remainder:
        coeffs_r = _coefficients(remainder, index)
        degree_r = max(coeffs_r)
        if degree_r < degree_b:
            break
        shift = tuple(degree_r - degree_b if i == index else 0 for i in range(len(next(iter(b)))))
        lc_r = coeffs_r[degree_r]
        remainder = add_terms(
            mul_terms(field, lc_b, remainder),
            mul_terms(field, mul_terms(field, lc_r, {shift: 1}), b),
        )
    return remainder


def gcd_terms(field: BinaryField, nvars: int, a: Terms, b: Terms) -> Terms:
    """Recursive primitive-PRS gcd, normalized to leading coefficient 1."""
    if not a:
        return _monic_terms(field, b) if b else {}
    if not b:
        return _monic_terms(field, a)
    vars_a = _variables_of(a)
    vars_b = _variables_of(b)
    if not vars_a or not vars_b:
        return _one(nvars)
    index = min(vars_a | vars_b)
    if index not in vars_a:
        return gcd_terms(field, nvars, a, _content(field, nvars, b, index))
    if index not in vars_b:
        return gcd_terms(field, nvars, _content(field, nvars, a, index), b)

    content_a = _content(field, nvars, a, index)
    content_b = _content(field, nvars, b, index)
    content = gcd_terms(field, nvars, content_a, content_b)
    prim_a = div_terms(field, a, content_a)
    prim_b = div_terms(field, b, content_b)
    if max(_coefficients(prim_a, index)) < max(_coefficients(prim_b, index)):
        prim_a, prim_b = prim_b, prim_a
    while prim_b:
        remainder = _prem(field, prim_a, prim_b, index)
        prim_a = prim_b
        if remainder:
            prim_b = div_terms(field, remainder, _content(field, nvars, remainder, index))
        else:
            prim_b = {}
    if max(_coefficients(prim_a, index)) == 0:
        prim_a = _one(nvars)
    return _monic_terms(field, mul_terms(field, content, prim_a))


# -- printing -------------------------------------------------------------


def format_monomial(variables: Iterable[str], exponent: Exponent) -> str:
    factors = []
    for name, d in zip(variables, exponent):
        if d == 1:
            factors.append(name)
        elif d > 1:
            factors.append(f"{name}^{d}")
    return "*".join(factors)


def format_poly(poly: MPoly) -> str:
    if poly.is_zero():
        return "0"
    parts = []
    multi = len(poly._terms) > 1
    for exponent, coeff in poly.terms():
        monomial = format_monomial(poly.variables, exponent)
        coeff_text = poly.field.format(coeff)
        if not monomial:
            parts.append(f"({coeff_text})" if multi and "+" in coeff_text else coeff_text)
        elif coeff == 1:
            parts.append(monomial)
        elif "+" in coeff_text:
            parts.append(f"({coeff_text})*{monomial}")
        else:
            parts.append(f"{coeff_text}*{monomial}")
    return " + ".join(parts)


def is_single_factor(poly: MPoly) -> bool:
    """True when the printed polynomial needs no parentheses as an operand."""
    if len(poly._terms) != 1:
        return False
    exponent, coeff = next(iter(poly._terms.items()))
    factors = sum(1 for d in exponent if d) + (0 if coeff == 1 else 1)
    if coeff != 1 and "+" in poly.field.format(coeff):
        return False
    return factors <= 1
