"""Tests for the triple and quadruple descents and their verification."""

from dataclasses import replace

import pytest

from src.brauer.symbols import ProductSplitCertificate, QSymbol, verify_product_split
from src.descent import (
    FIXTURES,
    GeneratorPool,
    LinkedTriple,
    QuadInstance,
    build_fixture,
    descent_problems,
    quad_descend,
    triple_descend,
    verify_descent,
)
from src.descent.fixtures import (
    canonical_monomial,
    generic_triple,
    hyperbolic_triple,
    linked_quad,
    quad_all_split,
    quad_case_a,
    quad_case_b,
    quad_case_c,
    random_symbols,
)
from src.exceptions import CertificateError, InstanceFormatError, UnsupportedInputError
from src.fields.rational import FunctionField
from src.forms.isotropy import SearchBudget

BUDGET = SearchBudget(exhaustive_limit=1 << 16, degree_bound=2, trials=500, seed=0)


@pytest.fixture(scope="module")
def generic_report():
    return triple_descend(generic_triple(2), BUDGET)


@pytest.fixture(scope="module")
def case_a_report():
    return quad_descend(quad_case_a(0), BUDGET)


class TestGeneratorPool:
    """Tests for the generator bookkeeping of L."""

    def test_constants_and_repeats_are_skipped(self):
        """Test that constants are never generators and repeats are interned."""
        field = FunctionField.create(1, ("t1", "t2"))
        t1, t2 = field.var("t1"), field.var("t2")
        pool = GeneratorPool(field).add(t1, field.one(), t1 * t2, t1)
        assert pool.generators == (t1, t1 * t2)
        assert pool.build().variables == ("u1", "u2")

    def test_lift_and_extend(self):
        """Test that lifting a generator and extending back is the identity."""
        field = FunctionField.create(1, ("t",))
        t = field.var("t")
        pool = GeneratorPool(field).add(t * t + 1)
        lifted = pool.lift(t * t + 1)
        assert str(lifted) == "u1"
        assert pool.extend(lifted * lifted) == (t * t + 1) ** 2
        with pytest.raises(UnsupportedInputError):
            pool.lift(t)


class TestFixtures:
    """Tests for the instance families."""

    def test_generic_triple_field(self):
        """Test that generic_triple(n) lives over n+1 variables."""
        triple = generic_triple(3)
        assert triple.field.variables == ("X1", "X2", "Y1", "Y2")
        assert triple.n == 3
        assert triple.forms()[2].bilinear_slots[0] == triple.b1 * triple.b2

    def test_plus_one_variant(self):
        """Test that the plus_one family has b2 = b1 + 1."""
        for index in range(4):
            triple = hyperbolic_triple(2, "plus_one", index)
            assert triple.b2 == triple.b1 + triple.field.one()

    def test_canonical_monomial(self):
        """Test the shape of the canonical monomial family."""
        forms = canonical_monomial(4)
        assert len(forms) == 4
        ys = forms[0].field.variables[1:]
        assert ys == ("Y1", "Y2", "Y3")
        assert forms[-1].bilinear_slots[0] == forms[0].field.parse("Y1*Y2*Y3")

    @pytest.mark.parametrize("builder", [quad_case_a, quad_case_b, quad_case_c, linked_quad])
    def test_quad_fixtures_carry_split_witness(self, builder):
        """Test that every quadruple fixture ships a verifying product split certificate."""
        instance = builder()
        assert instance.split_witness is not None
        assert instance.split_witness.certificate.start == instance.symbols
        assert verify_product_split(instance.split_witness)

    @pytest.mark.parametrize("index", [1, 2, 5, 7])
    def test_disguised_fixtures_verify(self, index):
        """Test that disguised case B and C fixtures keep a valid witness."""
        for builder in (quad_case_b, quad_case_c):
            assert verify_product_split(builder(index).split_witness)

    def test_random_symbols_are_seeded(self):
        """Test that random symbols depend only on the seed."""
        assert random_symbols(4, 2, seed=3) == random_symbols(4, 2, seed=3)

    def test_build_fixture_errors(self):
        """Test that unknown kinds and bad parameters raise InstanceFormatError."""
        with pytest.raises(InstanceFormatError):
            build_fixture("no_such_family")
        with pytest.raises(InstanceFormatError):
            build_fixture("generic_triple", m=3)
        with pytest.raises(InstanceFormatError):
            build_fixture("generic_triple", n=1)
        assert set(FIXTURES) >= {"generic_triple", "quad_case_a", "quad_all_split"}


class TestTripleDescent:
    """Tests for the descent of linked triples."""

    def test_generic_triple_needs_n_plus_one(self, generic_report):
        """Test that the anisotropic branch uses exactly n+1 generators."""
        assert generic_report.succeeded
        assert generic_report.case == "anisotropic"
        assert len(generic_report.generators) == 3
        assert generic_report.rho_certificate is not None
        assert verify_descent(generic_report, generic_triple(2))

    @pytest.mark.parametrize(
        "variant,index",
        [("plus_one", 0), ("plus_one", 1), ("plus_one", 2), ("norm", 0), ("norm", 1)],
    )
    def test_hyperbolic_triples_need_at_most_n(self, variant, index):
        """Test that an isotropic rho gives at most n generators."""
        triple = hyperbolic_triple(2, variant, index)
        report = triple_descend(triple, BUDGET)
        assert report.succeeded
        assert len(report.generators) <= 2
        assert report.rho_vector is not None
        assert verify_descent(report, triple)
        if report.case == "hyperbolic":
            first, second = report.descended[0], report.descended[1]
            assert second.bilinear_slots[0] == first.bilinear_slots[0] + report.descended_field.one()

    def test_deleted_generator_fails(self, generic_report):
        """Test that a report with a deleted generator does not verify."""
        tampered = replace(generic_report, generators=generic_report.generators[:-1])
        assert not verify_descent(tampered, generic_triple(2))
        assert descent_problems(tampered, generic_triple(2))

    def test_report_for_another_triple_fails(self, generic_report):
        """Test that a report does not verify against a different triple."""
        other = hyperbolic_triple(2, "plus_one", 0)
        assert not verify_descent(generic_report, other)

    def test_kind_mismatch(self, generic_report):
        """Test that a triple report cannot describe a quadruple."""
        assert not verify_descent(generic_report, quad_case_a(0))


class TestQuadDescent:
    """Tests for the descent of four symbols with split product."""

    def test_case_a_uses_four_generators(self, case_a_report):
        """Test that case A descends to exactly four generators."""
        assert case_a_report.succeeded
        assert case_a_report.case == "A"
        assert len(case_a_report.generators) == 4
        assert case_a_report.wp_identity_verified
        assert verify_descent(case_a_report, quad_case_a(0))

    @pytest.mark.parametrize("index", [1, 2])
    def test_disguised_case_a(self, index):
        """Test that Artin-Schreier disguises do not change the generator count."""
        instance = quad_case_a(index)
        report = quad_descend(instance, BUDGET)
        assert report.succeeded
        assert report.case == "A"
        assert len(report.generators) <= 4
        assert verify_descent(report, instance)

    def test_all_split_needs_no_generators(self):
        """Test that four split symbols descend to the prime field."""
        instance = quad_all_split(2)
        report = quad_descend(instance, BUDGET)
        assert report.succeeded
        assert report.case == "degenerate"
        assert report.generators == ()
        assert verify_descent(report, instance)

    @pytest.mark.parametrize(
        "builder,index,case",
        [(quad_case_b, 0, "B"), (quad_case_b, 3, "B"), (quad_case_c, 0, "C"), (quad_case_c, 5, "C")],
    )
    def test_cases_b_and_c(self, builder, index, case):
        """Test that case B and C instances descend to at most five generators and verify."""
        instance = builder(index)
        report = quad_descend(instance, BUDGET)
        assert report.succeeded
        assert report.case == case
        assert report.wp_identity_verified
        assert len(report.generators) <= 5
        assert verify_descent(report, instance)

    def test_linked_quad(self):
        """Test that a linked quadruple either descends with a valid report or gives up."""
        instance = linked_quad()
        report = quad_descend(instance, BUDGET)
        assert not report.succeeded or verify_descent(report, instance)

    def test_bad_split_witness_raises(self):
        """Test that an instance whose split witness does not verify is rejected."""
        instance = quad_case_a(0)
        zero = instance.field.zero()
        bad = ProductSplitCertificate(instance.split_witness.certificate, ((zero, zero),) * 4)
        with pytest.raises(CertificateError):
            quad_descend(QuadInstance(instance.symbols, bad), BUDGET)

    def test_tampered_product_certificate(self, case_a_report):
        """Test that a report with broken split witnesses does not verify."""
        product = case_a_report.product_certificate
        L = case_a_report.descended_field
        broken = ProductSplitCertificate(product.certificate, ((L.one(), L.one()),) * 4)
        tampered = replace(case_a_report, product_certificate=broken)
        assert not verify_descent(tampered, quad_case_a(0))

    def test_wrong_field_instance(self, case_a_report):
        """Test that a report does not verify against an instance over another field."""
        field = FunctionField.create(1, ("t",))
        t = field.var("t")
        other = QuadInstance(tuple(QSymbol(t, t + 1) for _ in range(4)))
        assert not verify_descent(case_a_report, other)

    def test_quad_needs_four_symbols(self):
        """Test that a quadruple has exactly four symbols."""
        field = FunctionField.create(1, ("t",))
        t = field.var("t")
        with pytest.raises(UnsupportedInputError):
            QuadInstance((QSymbol(t, t),) * 3)


class TestLinkedTriple:
    """Tests for the linked triple value type."""

    def test_rho(self):
        """Test that rho is <<b1, b2; pi]]."""
        triple = generic_triple(2)
        assert triple.rho.bilinear_slots == (triple.b1, triple.b2)
        assert triple.rho.as_slot == triple.slots[-1]

    def test_zero_slots_rejected(self):
        """Test that b1 and b2 must be nonzero."""
        field = FunctionField.create(1, ("t",))
        with pytest.raises(UnsupportedInputError):
            LinkedTriple((field.var("t"),), field.zero(), field.one())
