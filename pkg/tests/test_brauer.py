"""Tests for quaternion symbols, splitting, common slots and linkage."""

from dataclasses import replace

import pytest

from src.brauer.linkage import inseparably_linked, linked_quad_to_triple, sigma_criterion
from src.brauer.slots import common_left_slot, linked_presentation
from src.brauer.splitting import (
    Division,
    Split,
    is_isomorphic,
    norm_preimage,
    recover_split_witness,
    split_test,
    split_to_trivial,
)
from src.brauer.symbols import (
    EACH,
    PRODUCT,
    Certificate,
    ProductSplitCertificate,
    QSymbol,
    RewriteMove,
    apply_move,
    is_split_witness,
    norm_form,
    symbol_norm,
    verify_certificate,
    verify_product_split,
)
from src.exceptions import SideConditionError, UnsupportedInputError
from src.fields.rational import FunctionField
from src.forms.isotropy import SearchBudget, Unknown
from src.forms.quadform import PfisterDesc
from src.forms.residue import validate

BUDGET = SearchBudget(exhaustive_limit=1 << 16, degree_bound=2, trials=500, seed=0)


@pytest.fixture
def ft2():
    return FunctionField.create(1, ("t1", "t2"))


class TestSymbols:
    """Tests for rewrite moves and their certificates."""

    def test_zero_right_slot_rejected(self, ft2):
        """Test that [a,0) is not a symbol."""
        with pytest.raises(UnsupportedInputError):
            QSymbol(ft2.var("t1"), ft2.zero())

    def test_norm_form(self, ft2):
        """Test that the norm form of [a,b) is <<b; a]]."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        assert norm_form(QSymbol(t1, t2)) == PfisterDesc((t2,), t1)
        assert QSymbol(t1, t2).norm_form().dim == 4

    def test_exchange(self, ft2):
        """Test that exchange moves the right slot and adds the left slots."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        pair = (QSymbol(t1, t2), QSymbol(t2, t1 + 1))
        out = apply_move(pair, 0, RewriteMove.exchange(1))
        assert out == (QSymbol(t1, t2 * (t1 + 1)), QSymbol(t1 + t2, t1 + 1))

    def test_slot_push(self, ft2):
        """Test that slot_push adds b*N(alpha) to the left slot."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        q = QSymbol(t1, t2)
        one, zero = ft2.one(), ft2.zero()
        (pushed,) = apply_move((q,), 0, RewriteMove.slot_push(one, one))
        norm = symbol_norm(q, one, one)
        assert norm == t1
        assert pushed == QSymbol(t1 + t2 * t1, t2 * t1)
        with pytest.raises(SideConditionError):
            apply_move((q,), 0, RewriteMove.slot_push(zero, zero))

    def test_each_certificate_rejects_exchange(self, ft2):
        """Test that exchange is only allowed in product certificates."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        pair = (QSymbol(t1, t2), QSymbol(t2, t1))
        product = Certificate.build(pair, [(0, RewriteMove.exchange(1))], PRODUCT)
        assert verify_certificate(product)
        assert not verify_certificate(replace(product, preserves=EACH))

    def test_tampered_certificate(self, ft2):
        """Test that changing the end of a certificate breaks it."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        cert = Certificate.build((QSymbol(t1, t2),), [(0, RewriteMove.as_shift(t2))])
        assert verify_certificate(cert)
        assert cert.end == (QSymbol(t1 + t2 * t2 + t2, t2),)
        assert not verify_certificate(replace(cert, end=(QSymbol(t1, t2),)))

    def test_then_requires_matching_ends(self, ft2):
        """Test that certificates compose only end to start."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        first = Certificate.identity((QSymbol(t1, t2),))
        second = Certificate.identity((QSymbol(t2, t1),))
        with pytest.raises(SideConditionError):
            first.then(second)

    def test_double_exchange(self, ft2):
        """Test that exchanging twice and rescaling by b2 returns the original pair."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        first, second = QSymbol(t1, t2 + 1), QSymbol(t2, t1 * t2)
        moves = [
            (0, RewriteMove.exchange(1)),
            (0, RewriteMove.exchange(1)),
            (0, RewriteMove.norm_scale(second.b, ft2.zero())),
        ]
        cert = Certificate.build((first, second), moves, PRODUCT)
        assert cert.end == (first, second)
        assert verify_certificate(cert)


class TestSplitting:
    """Tests for the split test and witness handling."""

    def test_division_algebra(self, ft2):
        """Test that [t1, t2) is a division algebra with a replayable certificate."""
        result = split_test(QSymbol(ft2.var("t1"), ft2.var("t2")), BUDGET)
        assert isinstance(result, Division)
        assert validate(result.certificate)

    def test_quick_split_test(self, ft2):
        """Test that the quick split test finds low-degree witnesses and never certifies division."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        assert isinstance(split_test(QSymbol(t1, t2), BUDGET, quick=True), Unknown)
        q = QSymbol(t1 * t1 + t1 + t1 * t1 * t2, t2)
        result = split_test(q, BUDGET, quick=True)
        assert isinstance(result, Split)
        assert is_split_witness(q, result.lam, result.mu)

    def test_artin_schreier_split(self, ft2):
        """Test that [lam^2 + lam, b) splits with mu = 0."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        q = QSymbol(t1 * t1 + t1, t2)
        result = split_test(q, BUDGET)
        assert isinstance(result, Split)
        assert is_split_witness(q, result.lam, result.mu)

    def test_square_right_slot_split(self, ft2):
        """Test that [a, c^2) splits."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        q = QSymbol(t1, (t2 + 1) ** 2)
        result = split_test(q, BUDGET)
        assert isinstance(result, Split)
        assert is_split_witness(q, result.lam, result.mu)

    @pytest.mark.parametrize("k", [2, 3])
    def test_wedderburn(self, k):
        """Test that every symbol over a finite field splits."""
        field = FunctionField.create(k)
        for a in field.elements():
            for b in field.elements():
                if b.is_zero():
                    continue
                q = QSymbol(a, b)
                result = split_test(q, BUDGET)
                assert isinstance(result, Split)
                assert is_split_witness(q, result.lam, result.mu)

    def test_norm_preimage(self, ft2):
        """Test that a split witness yields an element of norm b."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        for q, lam, mu in [
            (QSymbol(t1 * t1 + t1, t2), t1, ft2.zero()),
            (QSymbol(t2, t2), ft2.zero(), ft2.one()),
        ]:
            x, y = norm_preimage(q, lam, mu)
            assert symbol_norm(q, x, y) == q.b

    def test_split_to_trivial(self, ft2):
        """Test that a split symbol rewrites to [0,1) by per-symbol moves."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        q = QSymbol(t1 * t1 + t1 + t2, t2)
        cert = split_to_trivial(q, t1, ft2.one())
        assert cert.end == (QSymbol(ft2.zero(), ft2.one()),)
        assert cert.preserves == EACH
        assert verify_certificate(cert)

    def test_recover_split_witness(self):
        """Test that an isotropic vector of the norm form gives a split witness."""
        field = FunctionField.create(1, ("t",))
        t = field.var("t")
        q = QSymbol(t, t)
        lam, mu = recover_split_witness(q, (field.zero(), field.one(), field.one(), field.zero()))
        assert is_split_witness(q, lam, mu)
        with pytest.raises(UnsupportedInputError):
            recover_split_witness(q, (field.one(), field.zero(), field.zero(), field.zero()))

    def test_isomorphic_by_shift(self, ft2):
        """Test that an Artin-Schreier shift is certified."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        result = is_isomorphic(QSymbol(t1, t2), QSymbol(t1 + t2 * t2 + t2, t2), BUDGET)
        assert result.verdict is True
        assert result.certificate is not None and verify_certificate(result.certificate)

    def test_isomorphic_by_norm(self, ft2):
        """Test that scaling the right slot by a norm is certified."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        result = is_isomorphic(QSymbol(t1, t2), QSymbol(t1, t2 * t1), BUDGET)
        assert result.verdict is True
        assert result.certificate is not None and verify_certificate(result.certificate)
        assert result.certificate.end == (QSymbol(t1, t2 * t1),)

    def test_split_versus_division(self, ft2):
        """Test that a division algebra is not isomorphic to a split one."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        result = is_isomorphic(QSymbol(t1, t2), QSymbol(ft2.zero(), ft2.one()), BUDGET)
        assert result.verdict is False


class TestProductSplit:
    """Tests for product split certificates."""

    def test_linked_pair(self, ft2):
        """Test that [a,b) + [a,b) is certified split through an exchange."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        pair = (QSymbol(t1, t2), QSymbol(t1, t2))
        cert = Certificate.build(pair, [(0, RewriteMove.exchange(1))], PRODUCT)
        # End: [t1, t2^2) and [0, t2).
        witnesses = ((t1, t1 / t2), (ft2.zero(), ft2.zero()))
        assert verify_product_split(ProductSplitCertificate(cert, witnesses))
        bad = ((t1, t1), (ft2.zero(), ft2.zero()))
        assert not verify_product_split(ProductSplitCertificate(cert, bad))


class TestSlots:
    """Tests for common left slots and linked presentations."""

    def test_common_left_slot(self, ft2):
        """Test that a common left slot comes with verified certificates."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        symbols = [QSymbol(t1, t2), QSymbol(t1 + t2, t2)]
        common = common_left_slot(symbols, BUDGET)
        assert common is not None
        for symbol, cert in zip(symbols, common.certificates):
            assert cert.start == (symbol,)
            assert cert.end[0].a == common.slot
            assert verify_certificate(cert)

    def test_linked_presentation(self):
        """Test that three symbols with split product get a linked presentation."""
        field = FunctionField.create(1, ("a", "b1", "b2"))
        a, b1, b2 = field.var("a"), field.var("b1"), field.var("b2")
        symbols = [QSymbol(a, b1), QSymbol(a, b2), QSymbol(a, b1 * b2)]
        linked = linked_presentation(symbols, BUDGET)
        assert linked is not None
        ends = linked.symbols
        assert all(q.a == linked.slot for q in ends)
        assert ends[0].b == linked.b1 and ends[1].b == linked.b2
        assert ends[2].b == linked.b1 * linked.b2
        assert all(verify_certificate(c) for c in linked.certificates)


class TestLinkage:
    """Tests for inseparable linkage and the sum-of-norm-forms criterion."""

    def test_common_right_slot(self, ft2):
        """Test that symbols sharing a right slot are inseparably linked."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        symbols = [QSymbol(t1, t2), QSymbol(t2, t2), QSymbol(t1 + t2, t2)]
        linkage = inseparably_linked(symbols, BUDGET)
        assert linkage is not None
        assert linkage.b == t2
        assert all(verify_certificate(c) for c in linkage.certificates)
        assert sigma_criterion(symbols, BUDGET) is not False

    def test_linked_quad_to_triple(self, ft2):
        """Test the reduction of four linked symbols to three."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        bs = [t2, t1, t2 + 1, t1 * t2]
        triple = linked_quad_to_triple([QSymbol(t1, b) for b in bs])
        assert triple == tuple(QSymbol(t1, t2 * b) for b in bs[1:])
        with pytest.raises(UnsupportedInputError):
            linked_quad_to_triple([QSymbol(t1, t2), QSymbol(t2, t2), QSymbol(t1, t1), QSymbol(t1, t1)])

    def test_split_symbol_joins_common_slot(self, ft2):
        """Test that a split symbol is rewritten to [0,b) for the common right slot."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        symbols = [QSymbol(t1, t2), QSymbol(t1, ft2.one()), QSymbol(t1, t2)]
        assert sigma_criterion(symbols, BUDGET) is True
        linkage = inseparably_linked(symbols, BUDGET)
        assert linkage is not None
        assert linkage.b == t2
        assert linkage.certificates[1].end == (QSymbol(ft2.zero(), t2),)
        for symbol, cert in zip(symbols, linkage.certificates):
            assert cert.start == (symbol,)
            assert cert.end[0].b == linkage.b
            assert verify_certificate(cert)

    def test_norm_ratio_with_split_symbol(self, ft2):
        """Test that [t1, t1*t2) reaches the slot t2 by a norm while [t1, t1) splits."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        symbols = [QSymbol(t1, t2), QSymbol(t1, t1), QSymbol(t1, t1 * t2)]
        linkage = inseparably_linked(symbols, BUDGET)
        assert linkage is not None
        assert linkage.b == t2
        assert all(verify_certificate(c) and c.end[0].b == t2 for c in linkage.certificates)
        assert sigma_criterion(symbols, BUDGET) is not False

    def test_right_slot_replacement(self, ft2):
        """Test that t2 + 1 and t2^2 + t2 are replaced by t2 through a push and a rescale."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        one = ft2.one()
        symbols = [QSymbol(t1, t2), QSymbol(t1, t2 + one), QSymbol(t1, t2 * (t2 + one))]
        linkage = inseparably_linked(symbols, BUDGET)
        assert linkage is not None
        assert linkage.b == t2
        kinds = [move.kind for _, move in linkage.certificates[1].moves]
        assert kinds == ["slot_push", "norm_scale"]
        assert all(verify_certificate(c) and c.end[0].b == t2 for c in linkage.certificates)
        assert sigma_criterion(symbols, BUDGET) is not False

    def test_generic_triple_is_not_linked(self):
        """Test that the generic triple has no common right slot and a non-hyperbolic sum."""
        field = FunctionField.create(1, ("X1", "Y1", "Y2"))
        x1, y1, y2 = field.var("X1"), field.var("Y1"), field.var("Y2")
        symbols = [QSymbol(x1, y1), QSymbol(x1, y2), QSymbol(x1, y1 * y2)]
        small = SearchBudget(exhaustive_limit=1 << 16, degree_bound=1, trials=60, seed=0)
        assert inseparably_linked(symbols, small) is None
        assert sigma_criterion(symbols, BUDGET) is False
