"""Rational function fields GF(2^k)(t1,...,tn) and their elements.

A FieldElem is a reduced fraction of MPoly values whose denominator has leading
coefficient 1 in the graded-lexicographic order, so two elements are equal exactly
when their stored numerators and denominators are equal. With no variables the
field is GF(2^k) itself.
"""

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, Optional, Union

from src.exceptions import (
    DivisionByZeroError,
    FieldMismatchError,
    UnsupportedInputError,
)
from src.fields.binary import BinaryField
from src.fields.mpoly import MPoly, format_poly, is_single_factor
from src.fields.parser import parse_declaration, parse_element

Scalar = Union["FieldElem", int]


@dataclass(frozen=True)
class FunctionField:
    """GF(2^k) adjoined with independent transcendental variables."""

    base: BinaryField
    variables: tuple[str, ...] = ()

    @staticmethod
    def create(k: int, variables: tuple[str, ...] = ()) -> "FunctionField":
        return _function_field(k, tuple(variables))

    @staticmethod
    def parse_declaration(text: str) -> "FunctionField":
        """Build a field from a declaration such as "F2^2(t1,t2)"."""
        declaration = parse_declaration(text)
        return FunctionField.create(declaration.k, declaration.variables)

    # -- properties ---------------------------------------------------

    @property
    def k(self) -> int:
        return self.base.k

    @property
    def is_finite(self) -> bool:
        return not self.variables

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise UnsupportedInputError("a rational function field is infinite")
        return self.base.order

    def declaration(self) -> str:
        head = "F2" if self.k == 1 else f"F2^{self.k}"
        if self.variables:
            return f"{head}({','.join(self.variables)})"
        return head

    def __str__(self) -> str:
        return self.declaration()

    def index_of(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnsupportedInputError(f"{name!r} is not a variable of {self}") from None

    # -- element constructors -----------------------------------------

    def poly(self, terms: Optional[dict] = None) -> MPoly:
        return MPoly(self.base, self.variables, terms)

    def from_poly(self, numerator: MPoly, denominator: Optional[MPoly] = None) -> "FieldElem":
        if denominator is None:
            return FieldElem._normalized(self, numerator, MPoly.constant(self.base, self.variables, 1))
        return FieldElem._normalized(self, numerator, denominator)

    def zero(self) -> "FieldElem":
        return self.const(0)

    def one(self) -> "FieldElem":
        return self.const(1)

    def const(self, value: int) -> "FieldElem":
        """Constant from a packed GF(2^k) value."""
        if value < 0 or value >= self.base.order:
            raise UnsupportedInputError(f"{value} is not an element of GF(2^{self.k})")
        return FieldElem._raw(
            self,
            MPoly.constant(self.base, self.variables, value),
            MPoly.constant(self.base, self.variables, 1),
        )

    def gen(self) -> "FieldElem":
        return self.const(self.base.generator)

    def var(self, name: str) -> "FieldElem":
        index = self.index_of(name)
        exponent = tuple(1 if i == index else 0 for i in range(len(self.variables)))
        return FieldElem._raw(
            self,
            MPoly.monomial(self.base, self.variables, exponent),
            MPoly.constant(self.base, self.variables, 1),
        )

    def monomial(self, exponent: tuple[int, ...], coeff: int = 1) -> "FieldElem":
        return self.from_poly(MPoly.monomial(self.base, self.variables, exponent, coeff))

    def parse(self, text: str) -> "FieldElem":
        return parse_element(self, text)

    def coerce(self, value: Scalar) -> "FieldElem":
        """Integers map to their residue mod 2; elements must belong to this field."""
        if isinstance(value, FieldElem):
            if value.field != self:
                raise FieldMismatchError(f"element of {value.field} used in {self}")
            return value
        if isinstance(value, int):
            return self.const(value % 2)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self}")

    # -- enumeration and sampling -------------------------------------

    def elements(self) -> Iterator["FieldElem"]:
        """All elements of a finite field in increasing packed order."""
        if not self.is_finite:
            raise UnsupportedInputError("cannot enumerate an infinite field")
        for value in self.base.elements():
            yield self.const(value)

    def monomials(self, max_degree: int) -> Iterator[tuple[int, ...]]:
        """Exponent vectors of total degree <= max_degree, by degree then lexicographically."""
        n = len(self.variables)
        for degree in range(max_degree + 1):
            yield from _compositions(degree, n)

    def random_element(self, rng: random.Random, degree: int = 2, fraction: bool = False) -> "FieldElem":
        """Random polynomial of total degree <= degree, optionally divided by another."""
        numerator = self._random_poly(rng, degree)
        if not fraction:
            return self.from_poly(numerator)
        denominator = self._random_poly(rng, degree)
        while denominator.is_zero():
            denominator = self._random_poly(rng, degree)
        return self.from_poly(numerator, denominator)

    def random_nonzero(self, rng: random.Random, degree: int = 2, fraction: bool = False) -> "FieldElem":
        value = self.random_element(rng, degree, fraction)
        while value.is_zero():
            value = self.random_element(rng, degree, fraction)
        return value

    def _random_poly(self, rng: random.Random, degree: int) -> MPoly:
        terms = {}
        for exponent in self.monomials(degree):
            if rng.random() < 0.5:
                terms[exponent] = rng.randrange(self.base.order)
        return self.poly(terms)

    # -- field maps ---------------------------------------------------

    def drop(self, name: str) -> "FunctionField":
        """The field without one variable (the residue field at that variable)."""
        index = self.index_of(name)
        return FunctionField.create(self.k, self.variables[:index] + self.variables[index + 1:])

    def substitute(
        self,
        value: "FieldElem",
        target: "FunctionField",
        images: Mapping[str, "FieldElem"],
    ) -> "FieldElem":
        """
        Apply the field map sending each variable to its image in target.

        Variables missing from images map to the target variable of the same name.

        Raises:
            DivisionByZeroError: If the denominator maps to zero
        """
        if target.k != self.k:
            raise FieldMismatchError(f"cannot map {self} into {target}")
        resolved = []
        for name in self.variables:
            image = images.get(name)
            if image is None:
                image = target.var(name)
            resolved.append(target.coerce(image))
        numerator = _evaluate(value.num, target, resolved)
        denominator = _evaluate(value.den, target, resolved)
        if denominator.is_zero():
            raise DivisionByZeroError(f"substitution sends the denominator of {value} to zero")
        return numerator / denominator

    def embed(self, value: "FieldElem") -> "FieldElem":
        """Embed an element of a field whose variables are a subset of ours."""
        if value.field == self:
            return value
        return value.field.substitute(value, self, {})


@lru_cache(maxsize=None)
def _function_field(k: int, variables: tuple[str, ...]) -> FunctionField:
    return FunctionField(base=BinaryField.get(k), variables=variables)


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Exponent vectors with the given sum, in decreasing lexicographic order."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _evaluate(poly: MPoly, target: FunctionField, images: list["FieldElem"]) -> "FieldElem":
    result = target.zero()
    powers: dict[tuple[int, int], FieldElem] = {}
    for exponent, coeff in poly.terms():
        term = target.const(coeff)
        for index, degree in enumerate(exponent):
            if degree:
                key = (index, degree)
                if key not in powers:
                    powers[key] = images[index] ** degree
                term = term * powers[key]
        result = result + term
    return result


class FieldElem:
    """An exact element of a FunctionField."""

    __slots__ = ("field", "num", "den", "_hash")

    field: FunctionField
    num: MPoly
    den: MPoly

    def __init__(self, field: FunctionField, num: MPoly, den: Optional[MPoly] = None):
        normalized = field.from_poly(num, den)
        self.field = field
        self.num = normalized.num
        self.den = normalized.den
        self._hash = None

    @classmethod
    def _raw(cls, field: FunctionField, num: MPoly, den: MPoly) -> "FieldElem":
        elem = cls.__new__(cls)
        elem.field = field
        elem.num = num
        elem.den = den
        elem._hash = None
        return elem

    @classmethod
    def _normalized(cls, field: FunctionField, num: MPoly, den: MPoly) -> "FieldElem":
        if den.is_zero():
            raise DivisionByZeroError("zero denominator")
        if num.is_zero():
            return cls._raw(field, num, MPoly.constant(field.base, field.variables, 1))
        if not den.is_constant():
            common = num.gcd(den)
            if not common.is_one():
                num = num.exact_div(common)
                den = den.exact_div(common)
        _, lead = den.leading()
        if lead != 1:
            inv = field.base.inv(lead)
            num = num.scale(inv)
            den = den.scale(inv)
        return cls._raw(field, num, den)

    # -- predicates ---------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.den.is_one() and self.num.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_one()

    def constant_value(self) -> int:
        """Packed GF(2^k) value of a constant element."""
        if not self.is_constant():
            raise UnsupportedInputError(f"{self} is not a constant")
        return self.num.constant_value()

    def used_variables(self) -> set[str]:
        indices = self.num.used_variables() | self.den.used_variables()
        return {self.field.variables[i] for i in indices}

    # -- arithmetic ---------------------------------------------------

    def _other(self, other: Scalar) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldMismatchError(f"{self.field} and {other.field} do not match")
            return other
        return self.field.coerce(other)

    def __add__(self, other: Scalar) -> "FieldElem":
        other = self._other(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.den == other.den:
            num = self.num + other.num
            if self.den.is_one():
                return FieldElem._raw(self.field, num, self.den)
            return FieldElem._normalized(self.field, num, self.den)
        num = self.num * other.den + other.num * self.den
        return FieldElem._normalized(self.field, num, self.den * other.den)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self) -> "FieldElem":
        return self

    def __mul__(self, other: Scalar) -> "FieldElem":
        other = self._other(other)
        if self.is_zero() or other.is_one():
            return self
        if other.is_zero() or self.is_one():
            return other
        if self.den.is_one() and other.den.is_one():
            return FieldElem._raw(self.field, self.num * other.num, self.den)
        # Cross-cancel so the product stays reduced.
        g1 = self.num.gcd(other.den)
        g2 = other.num.gcd(self.den)
        num = self.num.exact_div(g1) * other.num.exact_div(g2)
        den = self.den.exact_div(g2) * other.den.exact_div(g1)
        _, lead = den.leading()
        if lead != 1:
            inv = self.field.base.inv(lead)
            num = num.scale(inv)
            den = den.scale(inv)
        return FieldElem._raw(self.field, num, den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise DivisionByZeroError(f"zero has no inverse in {self.field}")
        return FieldElem._normalized(self.field, self.den, self.num)

    def __truediv__(self, other: Scalar) -> "FieldElem":
        return self * self._other(other).inverse()

    def __rtruediv__(self, other: Scalar) -> "FieldElem":
        return self._other(other) * self.inverse()

    def __pow__(self, exponent: int) -> "FieldElem":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if exponent == 2:
            return self.square()
        num = self.num ** exponent
        den = self.den ** exponent
        return FieldElem._raw(self.field, num, den)

    def square(self) -> "FieldElem":
        # Squaring is injective on reduced fractions and keeps the denominator monic.
        return FieldElem._raw(self.field, self.num.square(), self.den.square())

    def sqrt(self) -> Optional["FieldElem"]:
        """Exact square root in the field, or None when the element is not a square."""
        num = self.num.sqrt()
        den = self.den.sqrt()
        if num is None or den is None:
            return None
        return FieldElem._normalized(self.field, num, den)

    def wp(self) -> "FieldElem":
        """The Artin-Schreier map x -> x^2 + x."""
        return self.square() + self

    # -- comparison and printing --------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.field == other.field and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def sort_key(self) -> tuple[int, int, str]:
        return (max(self.num.total_degree(), self.den.total_degree()), len(str(self)), str(self))

    def __str__(self) -> str:
        num_text = format_poly(self.num)
        if self.den.is_one():
            return num_text
        den_text = format_poly(self.den)
        if not is_single_factor(self.num):
            num_text = f"({num_text})"
        if not is_single_factor(self.den):
            den_text = f"({den_text})"
        return f"{num_text}/{den_text}"

    def __repr__(self) -> str:
        return f"FieldElem({str(self)!r} in {self.field})"


@dataclass(frozen=True)
class EtaleElem:
    """x + y*theta in F[theta]/(theta^2 + theta + base)."""

    base: FieldElem
    x: FieldElem
    y: FieldElem

    @staticmethod
    def of(base: FieldElem, x: Scalar, y: Scalar = 0) -> "EtaleElem":
        field = base.field
        return EtaleElem(base=base, x=field.coerce(x), y=field.coerce(y))

    def is_zero(self) -> bool:
        return self.x.is_zero() and self.y.is_zero()

    def __mul__(self, other: "EtaleElem") -> "EtaleElem":
        if other.base != self.base:
            raise FieldMismatchError("etale elements over different Artin-Schreier parameters")
        yy = self.y * other.y
        x = self.x * other.x + self.base * yy
        y = self.x * other.y + other.x * self.y + yy
        return EtaleElem(self.base, x, y)

    def conj(self) -> "EtaleElem":
        """The nontrivial automorphism theta -> theta + 1."""
        return EtaleElem(self.base, self.x + self.y, self.y)

    def norm(self) -> FieldElem:
        return norm_sep(self.base, self)

    def inverse(self) -> "EtaleElem":
        norm = self.norm()
        if norm.is_zero():
            raise DivisionByZeroError("etale element of norm zero is not invertible")
        conj = self.conj()
        inv = norm.inverse()
        return EtaleElem(self.base, conj.x * inv, conj.y * inv)

    def __str__(self) -> str:
        return f"({self.x}) + ({self.y})*theta"


def norm_sep(a: FieldElem, alpha: EtaleElem) -> FieldElem:
    """Norm of x + y*theta over F, theta^2 + theta = a: x^2 + xy + a*y^2."""
    if alpha.base != a:
        raise FieldMismatchError(f"etale element lives over {alpha.base}, not {a}")
    return alpha.x.square() + alpha.x * alpha.y + a * alpha.y.square()


def norm_insep(b: FieldElem, x: FieldElem, y: FieldElem) -> FieldElem:
    """Norm of x + y*sqrt(b) from F(sqrt(b)): x^2 + b*y^2."""
    if b.is_zero():
        raise UnsupportedInputError("the inseparable norm needs b != 0")
    return x.square() + b * y.square()


def square_components(f: FieldElem) -> dict[tuple[int, ...], FieldElem]:
    """
    Coordinates of f over the subfield of squares.

    f is the sum of m * c_m^2 over square-free monomials m; the result maps the
    exponent of m to c_m and leaves out zero coordinates.
    """
    field = f.field
    groups: dict[tuple[int, ...], dict] = {}
    # f = num*den / den^2.
    for exponent, coeff in (f.num * f.den).terms():
        parity = tuple(d % 2 for d in exponent)
        groups.setdefault(parity, {})[tuple(d - p for d, p in zip(exponent, parity))] = coeff
    return {parity: field.from_poly(field.poly(terms).sqrt(), f.den) for parity, terms in groups.items()}


def leading_data(f: FieldElem, name: str) -> tuple[int, FieldElem]:
    """
    Valuation at a variable and the residue of f * t^(-v) at t = 0.

    Args:
        f: Nonzero element
        name: Variable t

    Returns:
        Tuple of (v_t(f), residue in the field without t)

    Raises:
        UnsupportedInputError: If f is zero
    """
    if f.is_zero():
        raise UnsupportedInputError("zero has no valuation")
    field = f.field
    index = field.index_of(name)
    num_low, num_rest = f.num.restrict_lowest(index)
    den_low, den_rest = f.den.restrict_lowest(index)
    residue_field = field.drop(name)
    residue = residue_field.from_poly(num_rest) / residue_field.from_poly(den_rest)
    return num_low - den_low, residue


def trace(a: FieldElem) -> int:
    """Absolute trace of a constant element to GF(2)."""
    if not a.is_constant():
        raise UnsupportedInputError(f"trace of the non-constant element {a}")
    return a.field.base.trace(a.constant_value())


def artin_schreier_solve(a: FieldElem) -> Optional[FieldElem]:
    """
    Smallest lambda with lambda^2 + lambda = a for a constant a.

    Returns:
        The root with the smaller packed value, or None when trace(a) = 1

    Raises:
        UnsupportedInputError: If a is not constant (use forms.roots.wp_preimage)
    """
    if not a.is_constant():
        raise UnsupportedInputError(f"Artin-Schreier solving needs a constant, got {a}")
    root = a.field.base.artin_schreier(a.constant_value())
    if root is None:
        return None
    return a.field.const(root)
