"""Tests for quadratic forms, isotropy, residue certificates and Witt decomposition."""

import random
from dataclasses import replace

import pytest

from src.descent.fixtures import canonical_monomial
from src.exceptions import DimensionMismatchError, SideConditionError, UnsupportedInputError
from src.fields.rational import FunctionField
from src.forms.isotropy import Found, ProvablyAnisotropic, SearchBudget, isotropic_vector, represent, verdict_of
from src.forms.pfister_moves import (
    PfisterCertificate,
    PfisterMove,
    apply_pfister_move,
    standard_hyperbolic,
    verify_pfister_certificate,
)
from src.forms.quadform import BinaryBlock, PfisterDesc, QuadForm, ScaledBlock, arf, expand_pfister, sigma_S
from src.forms.residue import find_residue_cert, residue_anisotropy_cert, validate
from src.forms.witt import (
    is_hyperbolic,
    is_isometric,
    split_off_hyperbolic,
    verify_witt_certificate,
    witt_decompose,
    witt_equivalent,
)

BUDGET = SearchBudget(exhaustive_limit=1 << 16, degree_bound=2, trials=500, seed=0)


@pytest.fixture
def ft():
    return FunctionField.create(1, ("t",))


@pytest.fixture
def ft2():
    return FunctionField.create(1, ("t1", "t2"))


class TestQuadForm:
    """Tests for evaluation and the polar form."""

    def test_evaluate_block(self, ft):
        """Test that [a,b] evaluates as aX^2 + XY + bY^2."""
        t = ft.var("t")
        q = QuadForm.of(ft, (1, t))
        assert q.dim == 2
        assert q.evaluate((t, ft.one())) == t * t + t + t

    def test_polar_is_alternating(self, ft2):
        """Test that B(v, v) = 0 and B is symmetric."""
        rng = random.Random(1)
        q = QuadForm.of(ft2, (ft2.var("t1"), 1, ft2.var("t2")), (1, ft2.var("t1")))
        for _ in range(5):
            v = tuple(ft2.random_element(rng, 1) for _ in range(q.dim))
            w = tuple(ft2.random_element(rng, 1) for _ in range(q.dim))
            assert q.polar(v, v).is_zero()
            assert q.polar(v, w) == q.polar(w, v)
            assert q.polar(v, w) == q.evaluate(tuple(x + y for x, y in zip(v, w))) + q.evaluate(v) + q.evaluate(w)

    def test_dimension_mismatch(self, ft):
        """Test that a vector of the wrong length is rejected."""
        with pytest.raises(DimensionMismatchError):
            QuadForm.of(ft, (1, 1)).evaluate((ft.one(),))

    def test_zero_scale_rejected(self, ft):
        """Test that block scales must be nonzero."""
        with pytest.raises(UnsupportedInputError):
            QuadForm(ft, (ScaledBlock(ft.zero(), BinaryBlock(ft.one(), ft.one())),))

    def test_expand_pfister(self, ft2):
        """Test that <<b; a]] expands to [1,a] + b[1,a]."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        d = PfisterDesc((t2,), t1)
        q = expand_pfister(d)
        assert q.dim == 4
        assert [scale for scale, _ in q.blocks] == [ft2.one(), t2]
        assert all(block == BinaryBlock(ft2.one(), t1) for _, block in q.blocks)
        assert d.dim == 4 and d.fold == 2

    def test_sigma_s_dimension(self, ft2):
        """Test that sigma_S is the orthogonal sum of the expansions."""
        forms = [PfisterDesc((ft2.var("t2"),), ft2.var("t1"))] * 3
        assert sigma_S(forms).dim == 12
        with pytest.raises(UnsupportedInputError):
            sigma_S([])

    def test_arf(self, ft):
        """Test that the Arf representative is the sum of a*b."""
        t = ft.var("t")
        assert arf(QuadForm.of(ft, (1, t), (t, t))) == t + t * t


class TestIsotropy:
    """Tests for the isotropy search and anisotropy certificates."""

    def test_zero_entry_block_is_isotropic(self, ft):
        """Test that a block with a zero entry yields an isotropic vector."""
        q = QuadForm.of(ft, (ft.var("t"), 0))
        result = isotropic_vector(q, BUDGET)
        assert isinstance(result, Found)
        assert q.evaluate(result.vector).is_zero()

    def test_finite_field_anisotropic_plane(self):
        """Test that [1,g] over F4 is proved anisotropic by exhaustion."""
        f4 = FunctionField.create(2)
        q = QuadForm.of(f4, (1, f4.gen()))
        result = isotropic_vector(q, BUDGET)
        assert isinstance(result, ProvablyAnisotropic)
        assert validate(result.certificate)

    def test_finite_field_four_dimensional_isotropic(self):
        """Test that every 4-dimensional form over F4 is isotropic."""
        f4 = FunctionField.create(2)
        g = f4.gen()
        q = QuadForm.of(f4, (1, g), (g, 1, g))
        result = isotropic_vector(q, BUDGET)
        assert isinstance(result, Found)
        assert q.evaluate(result.vector).is_zero()
        assert verdict_of(result) is True

    def test_residue_certificate_for_binary_block(self, ft):
        """Test that [1,t] over F_2(t) is certified anisotropic."""
        q = QuadForm.of(ft, (1, ft.var("t")))
        result = isotropic_vector(q, BUDGET)
        assert isinstance(result, ProvablyAnisotropic)
        assert validate(result.certificate)

    def test_residue_certificate_for_norm_form(self, ft2):
        """Test that <<t2; t1]] is certified anisotropic by residues."""
        q = expand_pfister(PfisterDesc((ft2.var("t2"),), ft2.var("t1")))
        cert = find_residue_cert(q)
        assert cert is not None
        assert validate(cert)
        assert cert.node_count() >= 1

    def test_fixed_variable_chain(self, ft2):
        """Test that a residue chain over t1 then t2 certifies <<t2; t1]] and nothing isotropic."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        cert = residue_anisotropy_cert(expand_pfister(PfisterDesc((t2,), t1)), ["t1", "t2"])
        assert cert is not None and validate(cert)
        assert residue_anisotropy_cert(expand_pfister(PfisterDesc((t2,), t1 * t1 + t1)), ["t1", "t2"]) is None

    def test_tampered_certificate_fails(self, ft2):
        """Test that a certificate attached to another form does not validate."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        cert = find_residue_cert(expand_pfister(PfisterDesc((t2,), t1)))
        assert cert is not None
        isotropic = expand_pfister(PfisterDesc((t2,), t1 * t1 + t1))
        assert not validate(replace(cert, form=isotropic))

    def test_represent(self, ft):
        """Test that represented values are verified."""
        t = ft.var("t")
        q = QuadForm.of(ft, (1, t))
        v = represent(q, t, BUDGET)
        assert v is not None
        assert q.evaluate(v) == t


class TestWittDecomposition:
    """Tests for Witt index computation and its certificate."""

    def test_cancellation(self):
        """Test that q + q has full Witt index over F16."""
        f16 = FunctionField.create(4)
        rng = random.Random(3)
        elements = list(f16.elements())
        for _ in range(10):
            blocks = tuple(
                ScaledBlock(rng.choice(elements[1:]), BinaryBlock(rng.choice(elements), rng.choice(elements)))
                for _ in range(rng.randint(1, 4))
            )
            q = QuadForm(f16, blocks)
            decomposition = witt_decompose(q.perp(q), BUDGET)
            assert decomposition.index == q.dim
            assert decomposition.is_exact
            assert verify_witt_certificate(decomposition.certificate)

    def test_anisotropic_norm_form(self, ft2):
        """Test that the norm form of a division algebra has index 0 and exact status."""
        q = expand_pfister(PfisterDesc((ft2.var("t2"),), ft2.var("t1")))
        decomposition = witt_decompose(q, BUDGET)
        assert decomposition.index == 0
        assert decomposition.is_exact
        assert is_hyperbolic(q, BUDGET) is False

    def test_split_norm_form_is_hyperbolic(self, ft):
        """Test that <<t; t]] (a split symbol) is hyperbolic."""
        t = ft.var("t")
        assert is_hyperbolic(expand_pfister(PfisterDesc((t,), t)), BUDGET) is True

    def test_tampered_witt_certificate(self, ft):
        """Test that a Witt certificate with a wrong end fails to replay."""
        t = ft.var("t")
        q = QuadForm.of(ft, (1, t), (1, t))
        decomposition = witt_decompose(q, BUDGET)
        assert verify_witt_certificate(decomposition.certificate)
        tampered = replace(decomposition.certificate, end=QuadForm.of(ft, (1, t)))
        assert not verify_witt_certificate(tampered)

    def test_split_off_hyperbolic(self, ft):
        """Test that splitting along an isotropic vector keeps the blocks outside its support."""
        t = ft.var("t")
        zero, one = ft.zero(), ft.one()
        q = QuadForm.of(ft, (0, 0), (1, t))
        rest = split_off_hyperbolic(q, (one, zero, zero, zero))
        assert rest.blocks == QuadForm.of(ft, (1, t)).blocks
        with pytest.raises(UnsupportedInputError):
            split_off_hyperbolic(q, (zero, zero, one, zero))
        with pytest.raises(UnsupportedInputError):
            split_off_hyperbolic(q, (zero,) * 4)

    def test_split_off_pair(self, ft):
        """Test that q + q minus a hyperbolic plane has the dimension of q."""
        t = ft.var("t")
        zero, one = ft.zero(), ft.one()
        q = QuadForm.of(ft, (1, t), (1, t))
        rest = split_off_hyperbolic(q, (one, zero, one, zero))
        assert rest.dim == 2
        assert is_hyperbolic(rest, BUDGET) is not False

    def test_isometry_dimension_mismatch(self, ft):
        """Test that isometry of forms of different dimension is an error."""
        with pytest.raises(DimensionMismatchError):
            is_isometric(QuadForm.of(ft, (1, 1)), QuadForm.of(ft, (1, 1), (1, 1)), BUDGET)

    def test_scaled_block_isometry(self, ft):
        """Test that c[a,b] is isometric to [ca, b/c]."""
        t = ft.var("t")
        left = QuadForm.of(ft, (t, 1, t))
        right = QuadForm.of(ft, (t, 1))
        assert is_isometric(left, right, BUDGET) is True

    @pytest.mark.parametrize("m", [2, 3])
    def test_canonical_monomial_class(self, m):
        """Test the Witt class of the canonical monomial family."""
        forms = canonical_monomial(m)
        field = forms[0].field
        x = field.var("X")
        ys = [field.var(f"Y{i}") for i in range(1, m)]
        product = field.one()
        for y in ys:
            product = product * y
        target = QuadForm.of(field, (1, x * m if m % 2 else 0))
        for scale in ys + [product]:
            target = target.perp(QuadForm.of(field, (scale, 1, x)))
        assert witt_equivalent(sigma_S(forms), target, BUDGET) is True


class TestPfisterMoves:
    """Tests for certified rewrites of Pfister forms."""

    def test_as_shift(self, ft2):
        """Test that as_shift adds lam^2 + lam to the Artin-Schreier slot."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        d = PfisterDesc((t2,), t1)
        moved = apply_pfister_move(d, PfisterMove.as_shift(t2))
        assert moved.as_slot == t1 + t2 * t2 + t2

    def test_value_scale(self, ft2):
        """Test that value_scale multiplies a slot by a represented value."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        d = PfisterDesc((t2,), t1)
        cert = PfisterCertificate.build(d, [PfisterMove.value_scale(0, (ft2.one(), ft2.one()))])
        assert cert.end.bilinear_slots == (t2 * t1,)
        assert verify_pfister_certificate(cert)

    def test_value_scale_needs_nonzero_value(self, ft2):
        """Test that the zero vector violates the value_scale side condition."""
        d = PfisterDesc((ft2.var("t2"),), ft2.var("t1"))
        with pytest.raises(SideConditionError):
            apply_pfister_move(d, PfisterMove.value_scale(0, (ft2.zero(), ft2.zero())))

    def test_hyperbolic_move(self, ft):
        """Test that an isotropic Pfister form rewrites to the standard hyperbolic one."""
        t = ft.var("t")
        d = PfisterDesc((t,), t)
        # [1,t] + t[1,t] has the zero (0, 1, 1, 0): t + t = 0.
        v = (ft.zero(), ft.one(), ft.one(), ft.zero())
        cert = PfisterCertificate.build(d, [PfisterMove.hyperbolic(v)])
        assert cert.end == standard_hyperbolic(d)
        assert verify_pfister_certificate(cert)

    def test_hyperbolic_move_needs_isotropic_vector(self, ft2):
        """Test that a non-isotropic vector is rejected."""
        d = PfisterDesc((ft2.var("t2"),), ft2.var("t1"))
        one, zero = ft2.one(), ft2.zero()
        with pytest.raises(SideConditionError):
            apply_pfister_move(d, PfisterMove.hyperbolic((one, zero, zero, zero)))

    def test_tampered_certificate(self, ft2):
        """Test that a certificate whose end was changed fails."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        cert = PfisterCertificate.build(PfisterDesc((t2,), t1), [PfisterMove.as_shift(t1)])
        assert verify_pfister_certificate(cert)
        assert not verify_pfister_certificate(replace(cert, end=PfisterDesc((t2,), t1)))

    def test_swap(self, ft2):
        """Test that swap exchanges two bilinear slots."""
        t1, t2 = ft2.var("t1"), ft2.var("t2")
        d = PfisterDesc((t1, t2), t1)
        assert apply_pfister_move(d, PfisterMove.swap(0, 1)).bilinear_slots == (t2, t1)
