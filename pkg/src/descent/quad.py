"""Descent of quadruples of quaternion symbols with split tensor product.

Pipeline:
    1. Find lam and alpha_i with sum(a_i + b_i*N(alpha_i)) = lam^2 + lam.
    2. Push: Q_i = [c_i, d_i) with d_i = b_i*N(alpha_i), c_i = a_i + d_i; then
       Q_4 = [c_1 + c_2 + c_3, d_4) after shifting by lam.
    3. Exchanging each Q_i (i <= 3) with Q_4 leaves the product of
       P_i = [c_i, d_i*d_4) split.
    4. A: every P_i split, L = k(c_1, c_2, c_3, d_4).
       B: no P_i split; a common left slot gives f_i, delta_i and a split
          symbol [c_1 + delta_1*f_1*f_4, F) yielding x, L = k(f_1..f_4, x).
       C: exactly one P_j split, the other two as in B, L = k(c_j, f_p, f_q, f_4, x).

Symbols that are split from the start are sent to [0,1) and the rest are
handled through a linked presentation and the triple descent.
"""

import logging
from typing import Iterator, Optional

from src.brauer.slots import common_left_slot, linked_presentation, slot_pushes
from src.brauer.splitting import Division, Split, norm_preimage, recover_split_witness, split_test, split_to_trivial
from src.brauer.symbols import (
    PRODUCT,
    Certificate,
    ProductSplitCertificate,
    QSymbol,
    RewriteMove,
    apply_move,
    symbol_norm,
    verify_certificate,
    verify_product_split,
)
from src.descent.base import BUDGET_EXHAUSTED, SUCCESS, DescentReport, LinkedTriple, QuadInstance
from src.descent.generators import GeneratorPool
from src.descent.triple import triple_descend
from src.exceptions import CertificateError, ImpossibleCaseError, UnsupportedInputError
from src.fields.rational import FieldElem, FunctionField
from src.forms.isotropy import SearchBudget, represent
from src.forms.pfister_moves import PfisterCertificate
from src.forms.quadform import BinaryBlock, QuadForm, ScaledBlock
from src.forms.roots import wp_preimage

logger = logging.getLogger(__name__)

Alpha = tuple[FieldElem, FieldElem]


def _compositions(total: int, parts: int, limit: int) -> Iterator[tuple[int, ...]]:
    """Tuples of `parts` indices below `limit` summing to `total`, lexicographically."""
    if parts == 1:
        if total < limit:
            yield (total,)
        return
    for first in range(min(total, limit - 1) + 1):
        for rest in _compositions(total - first, parts - 1, limit):
            yield (first,) + rest


def _is_zero_alpha(alpha: Alpha) -> bool:
    return alpha[0].is_zero() and alpha[1].is_zero()


def _push_moves(alpha: Alpha) -> list[RewriteMove]:
    return [] if _is_zero_alpha(alpha) else [RewriteMove.slot_push(*alpha)]


def _inverse(symbol: QSymbol, alpha: Alpha) -> Alpha:
    """alpha^-1 = conj(alpha)/N(alpha) in the etale algebra of the left slot."""
    x, y = alpha
    norm = symbol_norm(symbol, x, y)
    return (x + y) / norm, y / norm


class _Rediscovered(Exception):
    """A symbol assumed non-split turned out split; the case choice is redone."""

    def __init__(self, index: int, witness: Split):
        super().__init__(f"P_{index + 1} is split")
        self.index = index
        self.witness = witness


class _QuadDescent:
    def __init__(self, instance: QuadInstance, budget: SearchBudget):
        self.instance = instance
        self.symbols = instance.symbols
        self.field: FunctionField = instance.field
        self.budget = budget
        self.wp_verified = False

    # -- reports ------------------------------------------------------------

    def _exhausted(self, case: str, note: str) -> DescentReport:
        logger.warning(f"Quad descent exhausted its budget ({case}): {note}")
        return DescentReport(
            kind="quad",
            case=case,
            status=BUDGET_EXHAUSTED,
            field=self.field,
            wp_identity_verified=self.wp_verified,
            notes=(note,),
        )

    def _success(
        self,
        case: str,
        L: FunctionField,
        generators: tuple[FieldElem, ...],
        descended: list[QSymbol],
        certificates: list[Certificate],
        product_moves: list[tuple[int, RewriteMove]],
        witnesses: list[tuple[FieldElem, FieldElem]],
        permutation: tuple[int, ...] = (0, 1, 2, 3),
    ) -> DescentReport:
        product = Certificate.build(descended, product_moves, PRODUCT)
        product_certificate = ProductSplitCertificate(product, tuple(witnesses))
        if not verify_product_split(product_certificate):
            raise CertificateError(f"case {case}: product certificate over L does not verify")
        logger.info(f"Quad descent: case {case}, {len(generators)} generators")
        return DescentReport(
            kind="quad",
            case=case,
            status=SUCCESS,
            field=self.field,
            generators=generators,
            descended_field=L,
            descended=tuple(descended),
            certificates=tuple(certificates),
            product_certificate=product_certificate,
            permutation=permutation,
            wp_identity_verified=self.wp_verified,
        )

    # -- degenerate branch --------------------------------------------------

    def degenerate(self, results: list) -> DescentReport:
        split = [i for i, r in enumerate(results) if isinstance(r, Split)]
        nonsplit = [i for i in range(4) if i not in split]
        logger.info(f"Quad descent: {len(split)} symbols split from the start")
        if len(nonsplit) == 1:
            return self._exhausted("degenerate", "three symbols split but the fourth has no split witness")

        certificates: list[Optional[Certificate]] = [None] * 4
        for i in split:
            certificates[i] = split_to_trivial(self.symbols[i], results[i].lam, results[i].mu)

        if not nonsplit:
            L = GeneratorPool(self.field).build()
            descended = [QSymbol(L.zero(), L.one())] * 4
            zero = L.zero()
            return self._success("degenerate", L, (), descended, certificates, [], [(zero, zero)] * 4)

        presentation = linked_presentation([self.symbols[i] for i in nonsplit], self.budget)
        if presentation is None:
            return self._exhausted("degenerate", "no linked presentation for the non-split symbols")

        if len(nonsplit) == 2:
            pool = GeneratorPool(self.field).add(presentation.slot, presentation.b1)
            L = pool.build()
            h = QSymbol(pool.lift(presentation.slot), pool.lift(presentation.b1))
            descended = [QSymbol(L.zero(), L.one())] * 4
            for k, i in enumerate(nonsplit):
                descended[i] = h
                certificates[i] = presentation.certificates[k]
            p, q = nonsplit
            zero = L.zero()
            witnesses = [(zero, zero)] * 4
            witnesses[p] = (h.a, h.a / h.b)
            return self._success(
                "degenerate", L, pool.generators, descended, certificates, [(p, RewriteMove.exchange(q))], witnesses
            )

        triple = LinkedTriple((presentation.slot,), presentation.b1, presentation.b2)
        report = triple_descend(triple, self.budget)
        if not report.succeeded:
            return self._exhausted("degenerate", "triple descent of the linked presentation gave up")
        L = report.descended_field
        descended = [QSymbol(L.zero(), L.one())] * 4
        for k, i in enumerate(nonsplit):
            psi = report.descended[k]
            descended[i] = QSymbol(psi.as_slot, psi.bilinear_slots[0])
            start = presentation.certificates[k]
            certificates[i] = start.then(_translate(report.certificates[k], start.end[0]))
        p, q, r = nonsplit
        zero = L.zero()
        witnesses = [(zero, zero)] * 4
        h = descended[p]
        folded = h.b * descended[q].b
        witnesses[p] = (h.a, h.a / folded)
        moves = [(p, RewriteMove.exchange(q)), (p, RewriteMove.exchange(r))]
        return self._success("degenerate", L, report.generators, descended, certificates, moves, witnesses)

    # -- step 1 -------------------------------------------------------------

    def step_one(self) -> Optional[tuple[FieldElem, list[Alpha]]]:
        """lam and alpha_1..alpha_4 with sum(a_i + b_i*N(alpha_i)) = lam^2 + lam."""
        base = self.field.zero()
        for q in self.symbols:
            base = base + q.a
        alphas = list(slot_pushes(self.field, self.budget.degree_bound))
        trials = 0
        for weight in range(4 * (len(alphas) - 1) + 1):
            for combo in _compositions(weight, 4, len(alphas)):
                trials += 1
                if trials > self.budget.trials:
                    break
                total = base
                chosen = []
                for q, index in zip(self.symbols, combo):
                    alpha = alphas[index]
                    if not _is_zero_alpha(alpha):
                        norm = symbol_norm(q, *alpha)
                        if norm.is_zero():
                            break
                        total = total + q.b * norm
                    chosen.append(alpha)
                else:
                    lam = wp_preimage(total)
                    if lam is not None:
                        logger.debug(f"Step one solved by enumeration after {trials} trials")
                        return lam, chosen
            if trials > self.budget.trials:
                break
        return self._step_one_by_isotropy(base)

    def _step_one_by_isotropy(self, base: FieldElem) -> Optional[tuple[FieldElem, list[Alpha]]]:
        field = self.field
        one = field.one()
        blocks = [ScaledBlock(one, BinaryBlock(one, base))]
        blocks += [ScaledBlock(q.b, BinaryBlock(one, q.a)) for q in self.symbols]
        form = QuadForm(field, tuple(blocks))
        v = represent(form, field.zero(), self.budget)
        if v is None or v[1].is_zero():
            return None
        y0 = v[1].inverse()
        lam = v[0] * y0
        alphas = []
        total = base
        for i, q in enumerate(self.symbols):
            alpha = (v[2 + 2 * i] * y0, v[3 + 2 * i] * y0)
            norm = symbol_norm(q, *alpha)
            if norm.is_zero():
                alpha = (field.zero(), field.zero())
            else:
                total = total + q.b * norm
            alphas.append(alpha)
        if lam.wp() != total:
            return None
        logger.debug("Step one solved through an isotropic vector of the 10-dimensional form")
        return lam, alphas

    # -- main pipeline ------------------------------------------------------

    def run(self) -> DescentReport:
        witness = self.instance.split_witness
        if witness is not None:
            if witness.certificate.start != tuple(self.symbols) or not verify_product_split(witness):
                raise CertificateError("the instance's split witness does not verify")

        results = [split_test(q, self.budget, quick=True) for q in self.symbols]
        if any(isinstance(r, Split) for r in results):
            return self.degenerate(results)

        solved = self.step_one()
        if solved is None:
            return self._exhausted("undecided", "no solution of the Artin-Schreier equation in step one")
        lam, alphas = solved

        current = []
        for q, alpha in zip(self.symbols, alphas):
            current.append(q if _is_zero_alpha(alpha) else apply_move((q,), 0, RewriteMove.slot_push(*alpha))[0])
        c = [q.a for q in current]
        d = [q.b for q in current]
        total = c[0] + c[1] + c[2] + c[3]
        if lam.wp() != total:
            raise CertificateError("c_1 + c_2 + c_3 + c_4 is not lam^2 + lam")
        self.wp_verified = True

        reduced = [QSymbol(c[i], d[i] * d[3]) for i in range(3)]
        tests: list = [split_test(p, self.budget, quick=True) for p in reduced]
        for _ in range(3):
            split = [i for i, r in enumerate(tests) if isinstance(r, Split)]
            try:
                if len(split) == 3:
                    return self.case_a(lam, alphas, c, d, reduced, tests)
                if len(split) == 0:
                    return self.case_linked("B", None, lam, alphas, c, d, reduced, tests)
                if len(split) == 1:
                    return self.case_linked("C", split[0], lam, alphas, c, d, reduced, tests)
            except _Rediscovered as found:
                logger.warning(f"Reclassifying: {found}")
                tests[found.index] = found.witness
                continue
            third = next(i for i in range(3) if i not in split)
            if not isinstance(tests[third], Division):
                tests[third] = split_test(reduced[third], self.budget)
                if isinstance(tests[third], Split):
                    continue
            if isinstance(tests[third], Division):
                logger.error(f"Two of the three exchanged symbols split but P_{third + 1} is certified division")
                raise ImpossibleCaseError("exactly two of [c_i, d_i d_4) split")
            return self._exhausted("undecided", f"P_{third + 1} should be split but no witness was found")
        return self._exhausted("undecided", "case choice did not settle")

    # -- case A -------------------------------------------------------------

    def case_a(self, lam, alphas, c, d, reduced, tests) -> DescentReport:
        pool = GeneratorPool(self.field).add(c[0], c[1], c[2], d[3])
        L = pool.build()
        lc = [pool.lift(x) for x in c[:3]]
        ld4 = pool.lift(d[3])
        descended = [QSymbol(lc[i], ld4) for i in range(3)] + [QSymbol(lc[0] + lc[1] + lc[2], ld4)]

        certificates = []
        for i in range(3):
            x, y = norm_preimage(reduced[i], tests[i].lam, tests[i].mu)
            moves = _push_moves(alphas[i]) + [RewriteMove.norm_scale(x / d[3], y / d[3])]
            certificates.append(Certificate.build((self.symbols[i],), [(0, m) for m in moves]))
        certificates.append(self._fourth_certificate(alphas[3], lam))

        zero = L.zero()
        witnesses = [(lc[i], lc[i] / ld4) for i in range(3)] + [(zero, zero)]
        moves = [(i, RewriteMove.exchange(3)) for i in range(3)]
        return self._success("A", L, pool.generators, descended, certificates, moves, witnesses)

    def _fourth_certificate(self, alpha: Alpha, shift: FieldElem) -> Certificate:
        moves = _push_moves(alpha)
        if not shift.is_zero():
            moves.append(RewriteMove.as_shift(shift))
        return Certificate.build((self.symbols[3],), [(0, m) for m in moves])

    # -- cases B and C ------------------------------------------------------

    def case_linked(self, case, split_index, lam, alphas, c, d, reduced, tests) -> DescentReport:
        nonsplit = [i for i in range(3) if i != split_index]
        common = common_left_slot([reduced[i] for i in nonsplit], self.budget)
        if common is None:
            return self._exhausted(case, "no common left slot within the budget")

        deltas: dict[int, bool] = {}
        betas: dict[int, Alpha] = {}
        lams: dict[int, FieldElem] = {}
        f: dict[int, FieldElem] = {}
        for k, i in enumerate(nonsplit):
            moves = [m for _, m in common.certificates[k].moves]
            push = next((m for m in moves if m.kind == "slot_push"), None)
            shift = next((m for m in moves if m.kind == "as_shift"), None)
            deltas[i] = push is not None
            lams[i] = shift.x if shift is not None else self.field.zero()
            if push is not None:
                betas[i] = (push.x, push.y)
                f[i] = d[i] * symbol_norm(reduced[i], push.x, push.y)
            else:
                f[i] = d[i]
        f4 = d[3]

        big_f = f4 if len(nonsplit) == 3 else self.field.one()
        for i in nonsplit:
            big_f = big_f * f[i]
        p = nonsplit[0]
        left = c[p] + f[p] * f4 if deltas[p] else c[p]
        folded = QSymbol(left, big_f)
        result = split_test(folded, self.budget, quick=True)
        if not isinstance(result, Split):
            result = split_test(folded, self.budget)
        if not isinstance(result, Split):
            return self._exhausted(case, "the folded symbol has no split witness")
        lam_p, x = result.lam, result.mu
        if x.is_zero():
            raise _Rediscovered(p, self._split_witness(reduced[p], lam_p, deltas[p], betas.get(p)))

        u = {p: lam_p}
        for i in nonsplit[1:]:
            u[i] = lams[i] + lams[p] + lam_p
        xx_f = x.square() * big_f
        for i in nonsplit:
            e_i = xx_f + f[i] * f4 if deltas[i] else xx_f
            if c[i] + u[i].wp() != e_i:
                raise CertificateError(f"case {case}: shifted left slot of Q_{i + 1} is not e_{i + 1}")

        pool = GeneratorPool(self.field)
        if split_index is not None:
            pool.add(c[split_index])
        pool.add(*[f[i] for i in nonsplit], f4, x)
        L = pool.build()
        lf = {i: pool.lift(f[i]) for i in nonsplit}
        lf4, lx = pool.lift(f4), pool.lift(x)
        l_big_f = lf4 if len(nonsplit) == 3 else L.one()
        for i in nonsplit:
            l_big_f = l_big_f * lf[i]
        lxx_f = lx.square() * l_big_f

        descended: list[Optional[QSymbol]] = [None] * 4
        certificates: list[Optional[Certificate]] = [None] * 4
        fourth_a = L.zero()
        for i in nonsplit:
            le = lxx_f + lf[i] * lf4 if deltas[i] else lxx_f
            descended[i] = QSymbol(le, lf[i])
            fourth_a = fourth_a + le
            moves = _push_moves(alphas[i])
            if deltas[i]:
                moves.append(RewriteMove.norm_scale(*_inverse(reduced[i], betas[i])))
            if not u[i].is_zero():
                moves.append(RewriteMove.as_shift(u[i]))
            certificates[i] = Certificate.build((self.symbols[i],), [(0, m) for m in moves])

        permutation = (0, 1, 2, 3)
        if split_index is not None:
            j = split_index
            lc = pool.lift(c[j])
            descended[j] = QSymbol(lc, lf4)
            fourth_a = fourth_a + lc
            bx, by = norm_preimage(reduced[j], tests[j].lam, tests[j].mu)
            moves = _push_moves(alphas[j]) + [RewriteMove.norm_scale(bx / d[3], by / d[3])]
            certificates[j] = Certificate.build((self.symbols[j],), [(0, m) for m in moves])
            permutation = (j,) + tuple(nonsplit) + (3,)
        descended[3] = QSymbol(fourth_a, lf4)
        shift = lam
        for i in nonsplit:
            shift = shift + u[i]
        certificates[3] = self._fourth_certificate(alphas[3], shift)

        zero = L.zero()
        witnesses = [(zero, zero)] * 4
        witnesses[p] = (zero, lx / lf4)
        if split_index is not None:
            witnesses[split_index] = (descended[split_index].a, descended[split_index].a / lf4)
        one = L.one()
        moves = [(i, RewriteMove.exchange(3)) for i in range(3)]
        moves += [(i, RewriteMove.slot_push(one, zero)) for i in nonsplit if deltas[i]]
        moves += [(p, RewriteMove.exchange(i)) for i in nonsplit[1:]]
        return self._success(case, L, pool.generators, descended, certificates, moves, witnesses, permutation)

    def _split_witness(self, reduced: QSymbol, lam_p: FieldElem, delta: bool, beta: Optional[Alpha]) -> Split:
        """Witness for P_p once its shifted left slot is known to be lam_p^2 + lam_p."""
        zero = self.field.zero()
        if not delta:
            return Split(lam_p, zero)
        if beta is not None and beta[1].is_zero():
            # c + B*x^2 = lam^2 + lam.
            return Split(lam_p, beta[0])
        result = split_test(reduced, self.budget.with_overrides(trials=2 * self.budget.trials))
        if isinstance(result, Split):
            return result
        raise UnsupportedInputError(f"{reduced} is split but no witness was recovered")


def _translate(cert: PfisterCertificate, symbol: QSymbol) -> Certificate:
    """Turn a certificate on <<b; a]] into one on [a,b)."""
    moves: list[tuple[int, RewriteMove]] = []
    current = symbol
    for move in cert.moves:
        if move.kind == "as_shift":
            step = RewriteMove.as_shift(move.value)
        elif move.kind == "value_scale":
            # b -> b*N(w) is the norm scaling by w^-1.
            step = RewriteMove.norm_scale(*_inverse(current, (move.vector[0], move.vector[1])))
        elif move.kind == "hyperbolic":
            lam, mu = recover_split_witness(current, move.vector)
            trivial = split_to_trivial(current, lam, mu)
            moves.extend(trivial.moves)
            current = trivial.end[0]
            continue
        else:
            raise UnsupportedInputError(f"no symbol counterpart for the Pfister move {move.kind!r}")
        current = apply_move((current,), 0, step)[0]
        moves.append((0, step))
    return Certificate.build((symbol,), moves)


def quad_descend(instance: QuadInstance, budget: Optional[SearchBudget] = None) -> DescentReport:
    """
    Descend four quaternion symbols with split product to at most five generators.

    Args:
        instance: The quadruple, optionally with a product split witness
        budget: Search limits

    Returns:
        DescentReport (status success or budget_exhausted)

    Raises:
        CertificateError: If the instance's split witness does not verify
        ImpossibleCaseError: If exactly two exchanged symbols split and the third
            is certified division
    """
    report = _QuadDescent(instance, budget or SearchBudget.default()).run()
    if report.succeeded:
        for cert in report.certificates:
            if not verify_certificate(cert):
                raise CertificateError("internal per-symbol certificate does not verify")
    return report
