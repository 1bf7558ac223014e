"""Built-in acceptance suites run by the `selftest` subcommand.

Every suite replays its own witnesses; `scale` shrinks the random sample sizes
(1.0 is the full run).
"""

import logging
import random
from dataclasses import dataclass
from typing import Callable

from src.brauer.linkage import inseparably_linked, sigma_criterion
from src.brauer.splitting import Division, Split, split_test
from src.brauer.symbols import Certificate, QSymbol, RewriteMove, is_split_witness, norm_form, verify_certificate
from src.descent.base import LinkedTriple
from src.descent.fixtures import (
    generic_triple,
    hyperbolic_triple,
    quad_all_split,
    quad_case_a,
    quad_case_b,
    quad_case_c,
    random_symbols,
)
from src.descent.quad import quad_descend
from src.descent.triple import triple_descend
from src.descent.verify import verify_descent
from src.exceptions import ImpossibleCaseError
from src.fields.rational import FunctionField
from src.forms.isotropy import SearchBudget
from src.forms.quadform import BinaryBlock, QuadForm, ScaledBlock, expand_pfister, sigma_S
from src.forms.witt import witt_decompose, witt_equivalent
from src.models.codec import decode_report, encode_report
from src.repositories.instance_repository import dump_json

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _count(full: int, scale: float, minimum: int = 3) -> int:
    return max(minimum, int(full * scale))


def wedderburn(budget: SearchBudget, scale: float) -> SuiteResult:
    degrees = (2, 3, 4) if scale >= 1 else (2, 3)
    checked = 0
    for k in degrees:
        field = FunctionField.create(k)
        elements = list(field.elements())
        for a in elements:
            for b in elements:
                if b.is_zero():
                    continue
                q = QSymbol(a, b)
                result = split_test(q, budget)
                if not isinstance(result, Split) or not is_split_witness(q, result.lam, result.mu):
                    return SuiteResult("wedderburn", False, f"{q} over {field} has no verified witness")
                checked += 1
    return SuiteResult("wedderburn", True, f"{checked} symbols split with verified witnesses")


def split_agreement(budget: SearchBudget, scale: float) -> SuiteResult:
    total = _count(500, scale, 10)
    symbols = random_symbols(total, degree=2, seed=budget.seed)
    decided = disagreements = 0
    for q in symbols:
        result = split_test(q, budget)
        decomposition = witt_decompose(expand_pfister(norm_form(q)), budget)
        hyperbolic = decomposition.index == 2
        if isinstance(result, Split):
            decided += 1
            disagreements += decomposition.is_exact and not hyperbolic
        elif isinstance(result, Division):
            decided += 1
            disagreements += hyperbolic
    rate = decided / total
    passed = disagreements == 0 and rate >= 0.8
    return SuiteResult("split_agreement", passed, f"{disagreements} disagreements, {rate:.0%} decided")


def exchange_rule(budget: SearchBudget, scale: float) -> SuiteResult:
    field = FunctionField.create(1, ("t1", "t2"))
    rng = random.Random(budget.seed)
    total = _count(200, scale)
    for _ in range(total):
        first = QSymbol(field.random_element(rng, 2), field.random_nonzero(rng, 2))
        second = QSymbol(field.random_element(rng, 2), field.random_nonzero(rng, 2))
        pair = (first, second)
        once = Certificate.build(pair, [(0, RewriteMove.exchange(1))], "product")
        zero = field.zero()
        twice = once.then(
            Certificate.build(
                once.end,
                [(0, RewriteMove.exchange(1)), (0, RewriteMove.norm_scale(second.b, zero))],
                "product",
            )
        )
        if not verify_certificate(once) or not verify_certificate(twice) or twice.end != pair:
            return SuiteResult("exchange_rule", False, f"double exchange of {first}, {second} failed")
    return SuiteResult("exchange_rule", True, f"{total} pairs")


def cancellation(budget: SearchBudget, scale: float) -> SuiteResult:
    field = FunctionField.create(4)
    elements = list(field.elements())
    nonzero = elements[1:]
    rng = random.Random(budget.seed)
    total = _count(100, scale)
    for _ in range(total):
        blocks = tuple(
            ScaledBlock(rng.choice(nonzero), BinaryBlock(rng.choice(elements), rng.choice(elements)))
            for _ in range(rng.randint(1, 4))
        )
        q = QuadForm(field, blocks)
        decomposition = witt_decompose(q.perp(q), budget)
        if decomposition.index != q.dim or not decomposition.is_exact:
            return SuiteResult("cancellation", False, f"{q} + {q} reached index {decomposition.index}")
    return SuiteResult("cancellation", True, f"{total} forms")


def triple_anisotropic(budget: SearchBudget, scale: float) -> SuiteResult:
    for n in (2, 3):
        triple = generic_triple(n)
        report = triple_descend(triple, budget)
        if report.case != "anisotropic" or len(report.generators) != n + 1 or not verify_descent(report, triple):
            return SuiteResult("triple_anisotropic", False, f"n={n}: case {report.case}, {len(report.generators)} generators")
    return SuiteResult("triple_anisotropic", True, "n=2 and n=3 need n+1 generators")


def triple_hyperbolic(budget: SearchBudget, scale: float) -> SuiteResult:
    total = _count(50, scale, 4)
    for i in range(total):
        n = 2 + (i % 2)
        variant = "plus_one" if (i // 2) % 2 == 0 else "norm"
        triple = hyperbolic_triple(n, variant, i // 4)
        report = triple_descend(triple, budget)
        if not report.succeeded or len(report.generators) > n or not verify_descent(report, triple):
            return SuiteResult("triple_hyperbolic", False, f"{variant} n={n} index {i // 4}: {report.case}")
        if report.case == "hyperbolic":
            first, second = report.descended[0], report.descended[1]
            if second.bilinear_slots[0] != first.bilinear_slots[0] + report.descended_field.one():
                return SuiteResult("triple_hyperbolic", False, "b2' != b1' + 1")
    return SuiteResult("triple_hyperbolic", True, f"{total} instances with at most n generators")


def quad_cases(budget: SearchBudget, scale: float) -> SuiteResult:
    runs = 0
    for index in range(3):
        instance = quad_case_a(index)
        report = quad_descend(instance, budget)
        runs += 1
        if len(report.generators) != 4 or not verify_descent(report, instance):
            return SuiteResult("quad_cases", False, f"case A index {index}: {report.case}")
        if not report.wp_identity_verified:
            return SuiteResult("quad_cases", False, "c1 + c2 + c3 + c4 not verified in wp(F)")
    total = _count(25, scale, 4)
    for i in range(total):
        builder = quad_case_b if i % 2 == 0 else quad_case_c
        instance = builder(i // 2)
        try:
            report = quad_descend(instance, budget)
        except ImpossibleCaseError as e:
            return SuiteResult("quad_cases", False, f"{builder.__name__}({i // 2}): {e}")
        runs += 1
        if not verify_descent(report, instance):
            return SuiteResult("quad_cases", False, f"{builder.__name__}({i // 2}): {report.status} {report.case}")
        if report.case != "degenerate" and not report.wp_identity_verified:
            return SuiteResult("quad_cases", False, "c1 + c2 + c3 + c4 not verified in wp(F)")
    all_split = quad_descend(quad_all_split(2), budget)
    if all_split.generators or not verify_descent(all_split, quad_all_split(2)):
        return SuiteResult("quad_cases", False, "all-split instance over F4 needs generators")
    return SuiteResult("quad_cases", True, f"{runs + 1} quadruples descended to at most 5 generators")


def linkage(budget: SearchBudget, scale: float) -> SuiteResult:
    field = FunctionField.create(1, ("t1", "t2"))
    rng = random.Random(budget.seed)
    t1, t2 = field.var("t1"), field.var("t2")
    total = _count(30, scale, 2)
    decided = linked = 0
    for i in range(total):
        if i % 2 == 0:
            b = t1 * t2 + field.one()
            a1, a2 = field.random_element(rng, 1), field.random_element(rng, 1)
            symbols = [QSymbol(a1, b), QSymbol(a2, b), QSymbol(a1 + a2, b)]
        else:
            b1, b2 = t2, field.random_nonzero(rng, 1)
            symbols = [QSymbol(t1, b1), QSymbol(t1, b2), QSymbol(t1, b1 * b2)]
        found = inseparably_linked(symbols, budget)
        verdict = sigma_criterion(symbols, budget)
        if verdict is not None:
            decided += 1
        if found is not None and verdict is False:
            return SuiteResult("linkage", False, f"instance {i}: common right slot but the sum is not hyperbolic")
        if found is None and verdict is True:
            return SuiteResult("linkage", False, f"instance {i}: the sum is hyperbolic but no common right slot")
        if found is not None:
            linked += 1
    return SuiteResult("linkage", True, f"{total} triples, {decided} decided, {linked} linked, no contradiction")


def witt_formula(budget: SearchBudget, scale: float) -> SuiteResult:
    field = FunctionField.create(1, ("t",))
    total = _count(50, scale, 2)
    confirmed = 0
    one = field.one()
    for i in range(total):
        symbols = random_symbols(4, degree=1, seed=budget.seed + i, field=field)
        total_a = symbols[0].a + symbols[1].a + symbols[2].a + symbols[3].a
        ten = QuadForm(
            field,
            (ScaledBlock(one, BinaryBlock(one, total_a)),)
            + tuple(ScaledBlock(q.b, BinaryBlock(one, q.a)) for q in symbols),
        )
        verdict = witt_equivalent(sigma_S([norm_form(q) for q in symbols]), ten, budget)
        if verdict is False:
            return SuiteResult("witt_formula", False, f"instance {i} is not Witt equivalent")
        confirmed += verdict is True
    return SuiteResult("witt_formula", True, f"{confirmed}/{total} confirmed, none refuted")


def determinism(budget: SearchBudget, scale: float) -> SuiteResult:
    triple: LinkedTriple = generic_triple(2)
    first = dump_json(encode_report(triple_descend(triple, budget)).model_dump(mode="json"))
    model = encode_report(triple_descend(triple, budget))
    second = dump_json(model.model_dump(mode="json"))
    if first != second:
        return SuiteResult("determinism", False, "two runs with one seed differ")
    report = decode_report(model)
    if not verify_descent(report, triple):
        return SuiteResult("determinism", False, "report does not re-verify after a JSON round trip")
    tampered = decode_report(model.model_copy(update={"generators": model.generators[:-1]}))
    if verify_descent(tampered, triple):
        return SuiteResult("determinism", False, "a report with a deleted generator still verifies")
    return SuiteResult("determinism", True, "byte-identical reports, round trip and negative control")


SUITES: list[tuple[str, Callable[[SearchBudget, float], SuiteResult]]] = [
    ("wedderburn", wedderburn),
    ("split_agreement", split_agreement),
    ("exchange_rule", exchange_rule),
    ("cancellation", cancellation),
    ("triple_anisotropic", triple_anisotropic),
    ("triple_hyperbolic", triple_hyperbolic),
    ("quad_cases", quad_cases),
    ("linkage", linkage),
    ("witt_formula", witt_formula),
    ("determinism", determinism),
]


def run_selftest(budget: SearchBudget, scale: float = 1.0, only: tuple[str, ...] = ()) -> list[SuiteResult]:
    results = []
    for name, suite in SUITES:
        if only and name not in only:
            continue
        try:
            result = suite(budget, scale)
        except Exception as e:  # reported as a failed suite
            logger.exception(f"Suite {name} crashed")
            result = SuiteResult(name, False, f"crashed: {e}")
        logger.info(f"Suite {name}: {'pass' if result.passed else 'FAIL'} ({result.detail})")
        results.append(result)
    return results
