"""Inseparable linkage and the linked quadruple to triple reduction.

A right slot of [a,b) is any non-square u^2 + b*N_a(beta): the square of a
pure quaternion. The search below reaches such slots by rescaling with a norm
and then replacing the right slot through u + j.
"""

import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from src.brauer.slots import slot_pushes
from src.brauer.splitting import Split, norm_preimage, split_test, split_to_trivial
from src.brauer.symbols import Certificate, QSymbol, RewriteMove, norm_form, symbol_norm
from src.exceptions import UnsupportedInputError
from src.fields.rational import FieldElem, norm_insep, square_components
from src.forms.isotropy import SearchBudget, candidate_elements
from src.forms.quadform import sigma_S
from src.forms.witt import is_hyperbolic

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InseparableLinkage:
    """A common right slot b with certificates [a_i,b_i) -> [a_i',b)."""

    b: FieldElem
    certificates: tuple[Certificate, ...]


def _split_certificate(symbol: QSymbol, split: Split, b: FieldElem) -> Certificate:
    """[a,b') -> [0,1) -> [0,b) for a split symbol."""
    cert = split_to_trivial(symbol, split.lam, split.mu)
    if b.is_one():
        return cert
    one = b.field.one()
    # N_0(x + y*theta) = x*(x + y), so (1, 1 + 1/b) has norm 1/b.
    return cert.then(Certificate.build(cert.end, [(0, RewriteMove.norm_scale(one, one + b.inverse()))]))


def _replacement(symbol: QSymbol, u: FieldElem, v: FieldElem) -> list[RewriteMove]:
    """
    Moves [a,b) -> [a*t/(v^2*b), t) with t = u^2 + v^2*b, for a != 0 and t not zero.

    With c = u/(v*b) the push by c*theta gives [a*t/(v^2*b), a*b*c^2), and
    a*b*c^2 / t = N(u/t * theta) over the new left slot.
    """
    zero = symbol.field.zero()
    if u.is_zero():
        return [RewriteMove.norm_scale(v.inverse(), zero)]
    target = norm_insep(symbol.b, u, v)
    return [RewriteMove.slot_push(zero, u / (v * symbol.b)), RewriteMove.norm_scale(zero, u / target)]


def _insep_coordinates(b: FieldElem, target: FieldElem) -> Optional[tuple[FieldElem, FieldElem]]:
    """(u, v) with target = u^2 + v^2*b and v != 0, when target lies in F^2 + F^2*b."""
    field = b.field
    square_key = (0,) * len(field.variables)
    ours, theirs = square_components(b), square_components(target)
    v: Optional[FieldElem] = None
    for key in sorted(set(ours) | set(theirs)):
        if key == square_key:
            continue
        if key not in ours:
            return None
        ratio = theirs[key] / ours[key] if key in theirs else field.zero()
        if v is None:
            v = ratio
        elif ratio != v:
            return None
    if v is None or v.is_zero():
        return None
    u = (target + v.square() * b).sqrt()
    return None if u is None else (u, v)


class _RightSlotSearch:
    """Candidate right slots and per-symbol certificates towards them, on one trial counter."""

    def __init__(self, symbols: Sequence[QSymbol], budget: SearchBudget):
        self.symbols = list(symbols)
        self.budget = budget
        self.field = self.symbols[0].field
        self.trials = 0
        self.splits = [split_test(q, budget, quick=True) for q in self.symbols]
        self.shifts = [e for e in candidate_elements(self.field, budget.degree_bound) if not e.is_zero()]

    @property
    def exhausted(self) -> bool:
        return self.trials >= self.budget.trials

    def candidates(self) -> Iterator[tuple[int, FieldElem, Certificate]]:
        """(origin, b, certificate of the origin symbol) for b = b_i * N_{a_i}(alpha)."""
        seen: set[FieldElem] = set()
        for x, y in slot_pushes(self.field, self.budget.degree_bound):
            for i, q in enumerate(self.symbols):
                if x.is_zero() and y.is_zero():
                    b, cert = q.b, Certificate.identity((q,))
                else:
                    norm = symbol_norm(q, x, y)
                    if norm.is_zero():
                        continue
                    b = q.b * norm
                    # Dividing by N(alpha^-1) multiplies the right slot by N(alpha);
                    # alpha^-1 = conj(alpha)/N(alpha) and conj(x + y*theta) = (x + y) + y*theta.
                    inverse_norm = norm.inverse()
                    move = RewriteMove.norm_scale((x + y) * inverse_norm, y * inverse_norm)
                    cert = Certificate.build((q,), [(0, move)])
                if b in seen:
                    continue
                seen.add(b)
                yield i, b, cert

    def certificate(self, i: int, b: FieldElem) -> Optional[Certificate]:
        """Certificate [a_i,b_i) -> [a_i',b), or None within the remaining trials."""
        q = self.symbols[i]
        if q.b == b:
            return Certificate.identity((q,))
        if isinstance(self.splits[i], Split):
            return _split_certificate(q, self.splits[i], b)
        coordinates = _insep_coordinates(q.b, b)
        if coordinates is not None:
            return Certificate.build((q,), [(0, m) for m in _replacement(q, *coordinates)])

        one = self.field.one()
        for u in [self.field.zero()] + self.shifts:
            if self.exhausted:
                return None
            s = b + u.square()
            if s.is_zero():
                continue
            cert = self._rescale(q, s)
            if cert is None:
                continue
            if u.is_zero():
                return cert
            return cert.then(Certificate.build(cert.end, [(0, m) for m in _replacement(cert.end[0], u, one)]))
        return None

    def _rescale(self, q: QSymbol, s: FieldElem) -> Optional[Certificate]:
        """[a,b) -> [a,s) when b/s is a norm found by a quick split test."""
        if q.b == s:
            return Certificate.identity((q,))
        self.trials += 1
        ratio = QSymbol(q.a, q.b / s)
        result = split_test(ratio, self.budget, quick=True)
        if not isinstance(result, Split):
            return None
        x, y = norm_preimage(ratio, result.lam, result.mu)
        return Certificate.build((q,), [(0, RewriteMove.norm_scale(x, y))])


def inseparably_linked(
    symbols: Sequence[QSymbol], budget: Optional[SearchBudget] = None
) -> Optional[InseparableLinkage]:
    """
    Search a common right slot.

    Candidates are b_i * N_{a_i}(alpha) for every symbol and low-degree alpha.
    Towards a candidate b each symbol is tried in turn:
        - a split symbol goes to [0,1) and then to [0,b);
        - b in F^2 + F^2*b_i is reached exactly by a push and a rescale;
        - otherwise b + u^2 for low-degree u is tested as b_i times a norm, and
          the right slot is then replaced by b through u + j.
    Artin-Schreier shifts keep the norm group of the left slot, so they never
    open new right slots and are not searched. Every quick split test of a
    norm ratio counts as one trial. There is no negative answer, only None when
    the budget runs out (see sigma_criterion).
    """
    budget = budget or SearchBudget.default()
    if not symbols:
        return None
    search = _RightSlotSearch(symbols, budget)
    for count, (origin, b, origin_cert) in enumerate(search.candidates()):
        if count >= budget.trials or search.exhausted:
            break
        certificates = []
        for i in range(len(symbols)):
            cert = origin_cert if i == origin else search.certificate(i, b)
            if cert is None:
                break
            certificates.append(cert)
        if len(certificates) == len(symbols):
            logger.debug(f"Common right slot {b} after {search.trials} trials")
            return InseparableLinkage(b, tuple(certificates))
    logger.debug(f"No common right slot within {search.trials} trials")
    return None


def sigma_criterion(symbols: Sequence[QSymbol], budget: Optional[SearchBudget] = None) -> Optional[bool]:
    """Hyperbolicity of the sum of norm forms; None when undecided."""
    return is_hyperbolic(sigma_S([norm_form(q) for q in symbols]), budget)


def linked_quad_to_triple(symbols: Sequence[QSymbol]) -> tuple[QSymbol, QSymbol, QSymbol]:
    """
    ([a,b1), [a,b2), [a,b3), [a,b4)) -> ([a,b1*b2), [a,b1*b3), [a,b1*b4)).

    Raises:
        UnsupportedInputError: If there are not four symbols with one left slot
    """
    if len(symbols) != 4:
        raise UnsupportedInputError(f"expected four symbols, got {len(symbols)}")
    a = symbols[0].a
    if any(q.a != a for q in symbols):
        raise UnsupportedInputError("the four symbols do not share their left slot")
    b1 = symbols[0].b
    return tuple(QSymbol(a, b1 * q.b) for q in symbols[1:])
