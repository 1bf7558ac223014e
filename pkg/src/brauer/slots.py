"""Common left slots and linked presentations of quaternion symbols.

The left slots of [a,b) include every a + lam^2 + lam + b*N_a(alpha): push the
right slot into the left one with alpha, then shift by lam.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from src.brauer.splitting import Split, norm_preimage, split_test
from src.brauer.symbols import Certificate, QSymbol, RewriteMove, symbol_norm
from src.fields.rational import FieldElem, FunctionField
from src.forms.isotropy import SearchBudget, candidate_elements
from src.forms.roots import wp_preimage

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CommonSlot:
    """A shared left slot with one per-symbol certificate [a_i,b_i) -> [slot, b_i')."""

    slot: FieldElem
    certificates: tuple[Certificate, ...]


def slot_pushes(field: FunctionField, degree: int) -> Iterator[tuple[FieldElem, FieldElem]]:
    """Etale coordinates (x, y) in search order, starting with alpha = 0."""
    zero, one = field.zero(), field.one()
    yield zero, zero
    yield one, zero
    yield zero, one
    for e in candidate_elements(field, degree):
        if e.is_zero() or e.is_one():
            continue
        yield e, zero
        yield zero, e
        yield one, e
        yield e, one


def _pushed(symbol: QSymbol, alpha: tuple[FieldElem, FieldElem]) -> Optional[tuple[FieldElem, list]]:
    """Left slot after pushing alpha, with the moves that do it; None when N(alpha) = 0."""
    x, y = alpha
    if x.is_zero() and y.is_zero():
        return symbol.a, []
    norm = symbol_norm(symbol, x, y)
    if norm.is_zero():
        return None
    return symbol.a + symbol.b * norm, [RewriteMove.slot_push(x, y)]


def common_left_slot(
    symbols: Sequence[QSymbol], budget: Optional[SearchBudget] = None
) -> Optional[CommonSlot]:
    """
    Search a common left slot for symbols whose product is split.

    Args:
        symbols: Two or three symbols over one field
        budget: Search limits; each Artin-Schreier test counts as one trial

    Returns:
        CommonSlot, or None when the budget ran out
    """
    budget = budget or SearchBudget.default()
    if not symbols:
        return None
    field = symbols[0].field
    if all(q.a == symbols[0].a for q in symbols):
        return CommonSlot(symbols[0].a, tuple(Certificate.identity((q,)) for q in symbols))

    alphas = list(slot_pushes(field, budget.degree_bound))
    trials = 0
    for alpha_1 in alphas:
        pushed = _pushed(symbols[0], alpha_1)
        if pushed is None:
            continue
        slot, first_moves = pushed
        certificates = [Certificate.build((symbols[0],), [(0, m) for m in first_moves])]
        for symbol in symbols[1:]:
            found = None
            for alpha in alphas:
                trials += 1
                if trials > budget.trials:
                    logger.debug(f"Common slot search exhausted after {budget.trials} trials")
                    return None
                candidate = _pushed(symbol, alpha)
                if candidate is None:
                    continue
                left, moves = candidate
                lam = wp_preimage(left + slot)
                if lam is None:
                    continue
                if not lam.is_zero():
                    moves = moves + [RewriteMove.as_shift(lam)]
                found = Certificate.build((symbol,), [(0, m) for m in moves])
                break
            if found is None:
                break
            certificates.append(found)
        if len(certificates) == len(symbols):
            logger.debug(f"Common left slot {slot} after {trials} trials")
            return CommonSlot(slot, tuple(certificates))
    return None


@dataclass(frozen=True)
class LinkedPresentation:
    """Presentations [s,b1), [s,b2) (and [s,b1*b2) for three symbols) with certificates."""

    slot: FieldElem
    b1: FieldElem
    b2: FieldElem
    certificates: tuple[Certificate, ...]

    @property
    def symbols(self) -> tuple[QSymbol, ...]:
        return tuple(cert.end[0] for cert in self.certificates)


def linked_presentation(
    symbols: Sequence[QSymbol], budget: Optional[SearchBudget] = None
) -> Optional[LinkedPresentation]:
    """
    Rewrite two or three symbols with split product to a linked presentation.

    Two symbols end as [s,b1), [s,b1); three as [s,b1), [s,b2), [s,b1*b2).
    """
    budget = budget or SearchBudget.default()
    if len(symbols) not in (2, 3):
        return None
    common = common_left_slot(symbols, budget)
    if common is None:
        return None
    s = common.slot
    rights = [cert.end[0].b for cert in common.certificates]
    product = rights[0]
    for b in rights[1:]:
        product = product * b

    # [s, prod) is split, so prod = N_s(beta); the last right slot becomes the product of the others.
    total = QSymbol(s, product)
    result = split_test(total, budget)
    if not isinstance(result, Split):
        logger.debug(f"Linked presentation: product symbol not certified split ({type(result).__name__})")
        return None
    x, y = norm_preimage(total, result.lam, result.mu)
    others = rights[0]
    for b in rights[1:-1]:
        others = others * b
    # N(beta/others) = prod/others^2 = last/others.
    last_move = RewriteMove.norm_scale(x / others, y / others)
    last_cert = common.certificates[-1].then(
        Certificate.build(common.certificates[-1].end, [(0, last_move)])
    )
    certificates = common.certificates[:-1] + (last_cert,)
    b1 = rights[0]
    b2 = rights[1] if len(symbols) == 3 else rights[0]
    return LinkedPresentation(slot=s, b1=b1, b2=b2, certificates=certificates)
