"""Tests for GF(2^k), rational function fields and the element grammar."""

import random

import pytest

from src.exceptions import DivisionByZeroError, ElementParseError, FieldMismatchError, UnsupportedInputError
from src.fields.binary import MODULI, BinaryField
from src.fields.rational import (
    EtaleElem,
    FunctionField,
    artin_schreier_solve,
    leading_data,
    norm_insep,
    norm_sep,
    square_components,
    trace,
)
from src.forms.roots import solve_quadratic, wp_preimage, wp_reduce


def _pmod(a: int, m: int) -> int:
    while a and a.bit_length() >= m.bit_length():
        a ^= m << (a.bit_length() - m.bit_length())
    return a


def _pmulmod(a: int, b: int, m: int) -> int:
    product = 0
    while b:
        if b & 1:
            product ^= a
        a <<= 1
        b >>= 1
    return _pmod(product, m)


def _pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, _pmod(a, b)
    return a


def _frobenius_power(m: int, times: int) -> int:
    """x^(2^times) mod m."""
    x = 0b10
    for _ in range(times):
        x = _pmulmod(x, x, m)
    return x


def _prime_factors(n: int) -> set[int]:
    factors, p = set(), 2
    while p * p <= n:
        while n % p == 0:
            factors.add(p)
            n //= p
        p += 1
    if n > 1:
        factors.add(n)
    return factors


class TestBinaryField:
    """Tests for packed GF(2^k) arithmetic."""

    @pytest.mark.parametrize("k", sorted(MODULI))
    def test_moduli_are_irreducible(self, k):
        """Test that every shipped modulus passes Rabin's irreducibility test."""
        m = MODULI[k]
        assert m.bit_length() == k + 1
        assert _frobenius_power(m, k) == 0b10
        for p in _prime_factors(k):
            assert _pgcd(m, _frobenius_power(m, k // p) ^ 0b10) == 1

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_inverse_and_sqrt(self, k):
        """Test that inverses and square roots are exact for every element."""
        field = BinaryField.get(k)
        for a in field.elements():
            assert field.sqrt(field.sqr(a)) == a
            if a:
                assert field.mul(a, field.inv(a)) == 1

    def test_generator_of_f4(self):
        """Test that g^2 = g + 1 in GF(4)."""
        field = BinaryField.get(2)
        assert field.mul(field.generator, field.generator) == 0b11

    def test_trace_of_one(self):
        """Test that the trace of 1 is k mod 2."""
        assert BinaryField.get(2).trace(1) == 0
        assert BinaryField.get(3).trace(1) == 1

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_artin_schreier_roots(self, k):
        """Test that x^2 + x = a is solved exactly when the trace of a is zero."""
        field = BinaryField.get(k)
        for a in field.elements():
            root = field.artin_schreier(a)
            if field.trace(a):
                assert root is None
            else:
                assert field.sqr(root) ^ root == a

    def test_zero_inverse_raises(self):
        """Test that inverting zero raises DivisionByZeroError."""
        with pytest.raises(DivisionByZeroError):
            BinaryField.get(3).inv(0)

    def test_unsupported_degree(self):
        """Test that degrees outside the shipped table are rejected."""
        with pytest.raises(UnsupportedInputError):
            BinaryField.get(17)

    def test_format(self):
        """Test that elements print as polynomials in g."""
        assert BinaryField.get(4).format(0b1011) == "g^3 + g + 1"
        assert BinaryField.get(4).format(0) == "0"


class TestFunctionField:
    """Tests for exact rational functions."""

    def test_declaration_round_trip(self):
        """Test that declarations are parsed and printed canonically."""
        field = FunctionField.parse_declaration("F16(x, y)")
        assert field.k == 4
        assert field.variables == ("x", "y")
        assert field.declaration() == "F2^4(x,y)"
        assert FunctionField.parse_declaration(field.declaration()) == field
        assert FunctionField.parse_declaration("F2").is_finite

    def test_reduced_fractions_compare_equal(self):
        """Test that equal fractions have one canonical form."""
        field = FunctionField.create(1, ("t1", "t2"))
        assert field.parse("(t1^2+t1)/(t1*t2+t2)") == field.parse("t1/t2")
        assert field.parse("t1/t1") == field.one()
        assert str(field.parse("(t1+1)/(t1^2+1)")) == "1/(t1 + 1)"

    def test_characteristic_two(self):
        """Test that x + x = 0 and subtraction is addition."""
        field = FunctionField.create(1, ("t",))
        t = field.var("t")
        assert (t + t).is_zero()
        assert field.parse("t - 1") == field.parse("t + 1")
        assert (t + 1) ** 2 == t ** 2 + 1

    def test_generator_constants(self):
        """Test that g parses to the generator of the constant field."""
        field = FunctionField.create(2, ("t",))
        g = field.parse("g")
        assert g * g == g + 1
        assert field.parse("(g*t^2 + t)/(t+1)") * field.parse("t+1") == field.parse("g*t^2 + t")

    def test_division_by_zero(self):
        """Test that inverting zero raises DivisionByZeroError."""
        field = FunctionField.create(1, ("t",))
        with pytest.raises(DivisionByZeroError):
            field.zero().inverse()

    def test_field_mismatch(self):
        """Test that mixing fields raises FieldMismatchError."""
        first = FunctionField.create(1, ("t",))
        second = FunctionField.create(1, ("s",))
        with pytest.raises(FieldMismatchError):
            first.var("t") + second.var("s")

    def test_sqrt(self):
        """Test that square roots exist exactly for squares."""
        field = FunctionField.create(1, ("t",))
        assert field.parse("t^2 + 1").sqrt() == field.parse("t + 1")
        assert field.parse("1/t^2").sqrt() == field.parse("1/t")
        assert field.var("t").sqrt() is None

    def test_substitute(self):
        """Test that substitution applies the field map on numerator and denominator."""
        source = FunctionField.create(1, ("u1", "u2"))
        target = FunctionField.create(1, ("t",))
        t = target.var("t")
        images = {"u1": t, "u2": t + 1}
        assert source.substitute(source.parse("u1*u2"), target, images) == t * t + t
        assert source.substitute(source.parse("u1/u2"), target, images) == t / (t + 1)
        with pytest.raises(DivisionByZeroError):
            source.substitute(source.parse("1/(u1+u2+1)"), target, images)

    def test_drop_and_leading_data(self):
        """Test the valuation and residue at a variable."""
        field = FunctionField.create(1, ("t1", "t2"))
        f = field.parse("t1^2*(t2+1)/(t1+1)")
        valuation, residue = leading_data(f, "t1")
        assert valuation == 2
        assert residue.field == field.drop("t1")
        assert residue == field.drop("t1").parse("t2+1")

    def test_random_elements_are_seeded(self):
        """Test that sampling is deterministic for a fixed seed."""
        field = FunctionField.create(1, ("t1", "t2"))
        first = [field.random_element(random.Random(7), 2) for _ in range(5)]
        second = [field.random_element(random.Random(7), 2) for _ in range(5)]
        assert first == second
        assert not field.random_nonzero(random.Random(3), 1).is_zero()

    def test_enumeration_of_finite_field(self):
        """Test that a finite field lists all its elements."""
        field = FunctionField.create(3)
        assert len(list(field.elements())) == 8
        with pytest.raises(UnsupportedInputError):
            list(FunctionField.create(1, ("t",)).elements())

    def test_constant_trace_and_artin_schreier(self):
        """Test the trace and Artin-Schreier solver on constants."""
        field = FunctionField.create(2)
        g = field.gen()
        assert trace(g) == 1
        assert artin_schreier_solve(g) is None
        root = artin_schreier_solve(field.one())
        assert root in (g, g + 1)
        assert root.wp() == field.one()


class TestElementParser:
    """Tests for the element grammar error positions."""

    @pytest.mark.parametrize(
        "text,position",
        [
            ("t1 + x", 5),
            ("t1 $ t2", 3),
            ("t1 +", 4),
            ("(t1 + t2", 8),
            ("t1^t2", 3),
        ],
    )
    def test_error_positions(self, text, position):
        """Test that malformed elements report the 0-based position of the error."""
        field = FunctionField.create(1, ("t1", "t2"))
        with pytest.raises(ElementParseError) as excinfo:
            field.parse(text)
        assert excinfo.value.position == position
        assert excinfo.value.source == text

    def test_division_by_zero_literal(self):
        """Test that a literal division by zero is a parse error."""
        field = FunctionField.create(1, ("t",))
        with pytest.raises(ElementParseError):
            field.parse("t/(1+1)")

    @pytest.mark.parametrize("text", ["F3(t)", "G2(t)", "F2(t,t)", "F2(g)", "F4^2(t)"])
    def test_bad_declarations(self, text):
        """Test that malformed field declarations are rejected."""
        with pytest.raises(ElementParseError):
            FunctionField.parse_declaration(text)

    def test_printed_elements_parse_back(self):
        """Test that printing and parsing agree on canonical forms."""
        field = FunctionField.create(2, ("t1", "t2"))
        rng = random.Random(11)
        for _ in range(20):
            value = field.random_element(rng, 2, fraction=True)
            assert field.parse(str(value)) == value


class TestEtaleAlgebra:
    """Tests for F[theta]/(theta^2 + theta + a)."""

    def test_norm_is_multiplicative(self):
        """Test that N(alpha*beta) = N(alpha) * N(beta)."""
        field = FunctionField.create(1, ("t",))
        a = field.parse("t^2 + 1")
        rng = random.Random(5)
        for _ in range(10):
            alpha = EtaleElem.of(a, field.random_element(rng, 2), field.random_element(rng, 2))
            beta = EtaleElem.of(a, field.random_element(rng, 2), field.random_element(rng, 2))
            assert (alpha * beta).norm() == alpha.norm() * beta.norm()

    def test_separable_norm_values(self):
        """Test that N_a(x + y*theta) = x^2 + xy + a*y^2."""
        field = FunctionField.create(1, ("t",))
        t, one, zero = field.var("t"), field.one(), field.zero()
        assert norm_sep(t, EtaleElem.of(t, one, zero)) == one
        assert norm_sep(t, EtaleElem.of(t, zero, one)) == t
        assert norm_sep(t, EtaleElem.of(t, one, one)) == t
        with pytest.raises(FieldMismatchError):
            norm_sep(t + 1, EtaleElem.of(t, one, one))

    def test_inseparable_norm(self):
        """Test that the norm from F(sqrt(b)) is x^2 + b*y^2 and multiplicative."""
        field = FunctionField.create(1, ("t", "s"))
        t, one, zero = field.var("t"), field.one(), field.zero()
        assert norm_insep(t, t, one) == t * t + t
        assert norm_insep(t, zero, one) == t
        rng = random.Random(9)
        for _ in range(10):
            x1, y1, x2, y2 = (field.random_element(rng, 2) for _ in range(4))
            product = norm_insep(t, x1 * x2 + t * y1 * y2, x1 * y2 + x2 * y1)
            assert product == norm_insep(t, x1, y1) * norm_insep(t, x2, y2)
        with pytest.raises(UnsupportedInputError):
            norm_insep(zero, one, one)

    def test_square_components(self):
        """Test that f is recovered from its coordinates over the squares."""
        field = FunctionField.create(1, ("t", "s"))
        t, s = field.var("t"), field.var("s")
        assert square_components(t * t * s + s + t) == {(0, 1): t + 1, (1, 0): field.one()}
        assert square_components(t.inverse()) == {(1, 0): t.inverse()}
        rng = random.Random(13)
        for _ in range(10):
            f = field.random_nonzero(rng, 3, fraction=True)
            total = field.zero()
            for key, c in square_components(f).items():
                total = total + field.monomial(key) * c.square()
            assert total == f

    def test_inverse(self):
        """Test that alpha * alpha^-1 = 1."""
        field = FunctionField.create(1, ("t",))
        alpha = EtaleElem.of(field.var("t"), field.parse("t+1"), field.one())
        product = alpha * alpha.inverse()
        assert product.x == field.one()
        assert product.y.is_zero()


class TestQuadraticEquations:
    """Tests for exact Artin-Schreier and quadratic solving."""

    def test_wp_preimage(self):
        """Test that x^2 + x = c is solved or refuted exactly."""
        field = FunctionField.create(1, ("t",))
        root = wp_preimage(field.parse("t^2 + t"))
        assert root in (field.var("t"), field.parse("t + 1"))
        assert wp_preimage(field.var("t")) is None
        fraction = field.parse("1/(t^2+t)")
        solved = wp_preimage(fraction)
        assert solved is not None and solved.wp() == fraction

    def test_solve_quadratic(self):
        """Test that all roots are returned."""
        field = FunctionField.create(1, ("t",))
        t = field.var("t")
        roots = solve_quadratic(field.one(), field.one(), t * t + t)
        assert set(roots) == {t, t + 1}
        assert solve_quadratic(field.one(), field.one(), t) == []
        assert solve_quadratic(field.one(), field.zero(), t * t) == [t]

    def test_wp_reduce(self):
        """Test that reduction modulo the Artin-Schreier image is canonical."""
        field = FunctionField.create(1, ("t",))
        c = field.parse("t^3 + t")
        assert wp_reduce(c + field.parse("t^4 + t^2")) == wp_reduce(c)
        assert wp_reduce(field.parse("t^2 + t")).is_zero()
