"""Instance families with their defining property built in.

Triples come in linked normal form; quadruples carry a product split
certificate. Families with an `index` are deterministic: the index picks the
disguise (Artin-Schreier shifts, which slots get pushed, which symbol splits).
"""

import logging
import random
from typing import Any, Callable, Optional, Sequence

from src.brauer.splitting import Split, split_test
from src.brauer.symbols import PRODUCT, Certificate, ProductSplitCertificate, QSymbol, RewriteMove
from src.descent.base import LinkedTriple, QuadInstance
from src.exceptions import InstanceFormatError, PfisterError
from src.fields.rational import FieldElem, FunctionField
from src.forms.quadform import PfisterDesc, expand_pfister

logger = logging.getLogger(__name__)

Witness = tuple[FieldElem, FieldElem]


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise InstanceFormatError(message)


def generic_triple(n: int = 2) -> LinkedTriple:
    """(<<Y1; pi]], <<Y2; pi]], <<Y1*Y2; pi]]) with pi = <<X1,...,X_{n-2}; X_{n-1}]] over F_2(X, Y1, Y2)."""
    _require(n >= 2, f"generic_triple needs n >= 2, got {n}")
    xs = tuple(f"X{i}" for i in range(1, n))
    field = FunctionField.create(1, xs + ("Y1", "Y2"))
    return LinkedTriple(tuple(field.var(x) for x in xs), field.var("Y1"), field.var("Y2"))


_PLUS_ONE_SHAPES = ("Y", "Y*X1", "Y + X1", "Y^2 + X1*Y", "Y/X1", "X1*Y + X1 + Y")


def hyperbolic_triple(n: int = 2, variant: str = "plus_one", index: int = 0) -> LinkedTriple:
    """
    Triples whose <<b1, b2; pi]] is hyperbolic.

    plus_one: b2 = b1 + 1, so b1*1 + b2*1 = 1.
    norm: b2 = b1 * pi(w) for a small vector w, so phi_1 and phi_2 are isometric.
    """
    _require(n >= 2, f"hyperbolic_triple needs n >= 2, got {n}")
    xs = tuple(f"X{i}" for i in range(1, n))
    field = FunctionField.create(1, xs + ("Y",))
    slots = tuple(field.var(x) for x in xs)
    if variant == "plus_one":
        b1 = field.parse(_PLUS_ONE_SHAPES[index % len(_PLUS_ONE_SHAPES)])
        return LinkedTriple(slots, b1, b1 + field.one())
    if variant == "norm":
        pi = PfisterDesc(slots[:-1], slots[-1])
        form = expand_pfister(pi)
        b1 = field.var("Y")
        one, y = field.one(), field.var("Y")
        choices = [(one, one), (y, one), (one, y), (y + one, one)]
        x_coord, y_coord = choices[index % len(choices)]
        w = list(form.zero_vector())
        w[0], w[1] = x_coord, y_coord
        value = form.evaluate(w)
        return LinkedTriple(slots, b1, b1 * value)
    raise InstanceFormatError(f"unknown hyperbolic_triple variant {variant!r}")


def canonical_monomial(m: int = 3) -> list[PfisterDesc]:
    """phi_i = <<Y_i; X]] for i < m and phi_m = <<Y_1...Y_{m-1}; X]] over F_2(X, Y_1..Y_{m-1})."""
    _require(m >= 2, f"canonical_monomial needs m >= 2, got {m}")
    ys = tuple(f"Y{i}" for i in range(1, m))
    field = FunctionField.create(1, ("X",) + ys)
    x = field.var("X")
    forms = [PfisterDesc((field.var(y),), x) for y in ys]
    product = field.one()
    for y in ys:
        product = product * field.var(y)
    return forms + [PfisterDesc((product,), x)]


def _instance(symbols: Sequence[QSymbol], moves: list, witnesses: list[Witness]) -> QuadInstance:
    cert = Certificate.build(symbols, moves, PRODUCT)
    return QuadInstance(tuple(symbols), ProductSplitCertificate(cert, tuple(witnesses)))


def linked_quad(
    field: Optional[FunctionField] = None,
    a: Optional[FieldElem] = None,
    bs: Optional[Sequence[FieldElem]] = None,
) -> QuadInstance:
    """([a,b1), [a,b2), [a,b3), [a,b1*b2*b3)); the default lives over F_2(a, b1, b2, b3)."""
    if field is None:
        field = FunctionField.create(1, ("a", "b1", "b2", "b3"))
    if a is None:
        a = field.var("a")
    if bs is None:
        bs = tuple(field.var(f"b{i}") for i in (1, 2, 3))
    _require(len(bs) == 3, f"linked_quad needs three right slots, got {len(bs)}")
    _require(all(not b.is_zero() for b in bs), "right slots must be nonzero")
    product = bs[0] * bs[1] * bs[2]
    symbols = [QSymbol(a, b) for b in bs] + [QSymbol(a, product)]
    zero = field.zero()
    witnesses = [(a, a / product), (zero, zero), (zero, zero), (zero, zero)]
    moves = [(0, RewriteMove.exchange(j)) for j in (1, 2, 3)]
    return _instance(symbols, moves, witnesses)


def _shifts(field: FunctionField, index: int) -> list[FieldElem]:
    """Artin-Schreier disguises r_1..r_4; index 0 means none."""
    if index == 0:
        return [field.zero()] * 4
    rng = random.Random(index)
    return [field.random_element(rng, degree=1) for _ in range(4)]


def _disguise(lefts: list[FieldElem], rights: list[FieldElem], shifts: list[FieldElem]) -> list[QSymbol]:
    return [QSymbol(a + r.wp(), b) for a, b, r in zip(lefts, rights, shifts)]


def quad_case_a(index: int = 0) -> QuadInstance:
    """[c_i, d4) (i <= 3) and [c1 + c2 + c3, d4) over F_2(c1, c2, c3, d4)."""
    field = FunctionField.create(1, ("c1", "c2", "c3", "d4"))
    c = [field.var(f"c{i}") for i in (1, 2, 3)]
    d4 = field.var("d4")
    r = _shifts(field, index)
    symbols = _disguise(c + [c[0] + c[1] + c[2]], [d4] * 4, r)
    moves = [(i, RewriteMove.exchange(3)) for i in range(3)]
    # [c_i + wp(r_i), d4^2) is split by (r_i + c_i, c_i/d4); the last symbol ends with a = wp(sum r).
    witnesses = [(r[i] + c[i], c[i] / d4) for i in range(3)]
    witnesses.append((r[0] + r[1] + r[2] + r[3], field.zero()))
    return _instance(symbols, moves, witnesses)


def _exchanged_instance(
    field: FunctionField,
    lefts: list[FieldElem],
    rights: list[FieldElem],
    deltas: dict[int, bool],
    nonsplit: list[int],
    x: FieldElem,
    f4: FieldElem,
    index: int,
    split: Optional[int] = None,
) -> QuadInstance:
    r = _shifts(field, index)
    symbols = _disguise(lefts, rights, r)
    zero, one = field.zero(), field.one()
    moves = [(i, RewriteMove.exchange(3)) for i in range(3)]
    moves += [(i, RewriteMove.slot_push(one, zero)) for i in nonsplit if deltas[i]]
    p = nonsplit[0]
    moves += [(p, RewriteMove.exchange(i)) for i in nonsplit[1:]]
    witnesses: list[Witness] = [(zero, zero)] * 4
    witnesses[p] = (r[p], x / f4)
    for i in nonsplit[1:]:
        witnesses[i] = (r[p] + r[i], zero)
    if split is not None:
        c = lefts[split]
        witnesses[split] = (r[split] + c, c / f4)
    witnesses[3] = (r[0] + r[1] + r[2] + r[3], zero)
    return _instance(symbols, moves, witnesses)


def quad_case_b(index: int = 0) -> QuadInstance:
    """
    [x^2*F + delta_i*f_i*f4, f_i) and [x^2*F + sum(delta_i*f_i)*f4, f4) with F = f1*f2*f3*f4.

    Built over F_2(f1, f2, f3, f4, x); bit i of the index sets delta_i.
    """
    field = FunctionField.create(1, ("f1", "f2", "f3", "f4", "x"))
    f = [field.var(f"f{i}") for i in (1, 2, 3)]
    f4, x = field.var("f4"), field.var("x")
    big_f = f[0] * f[1] * f[2] * f4
    deltas = {i: bool((index >> i) & 1) for i in range(3)}
    xx_f = x.square() * big_f
    lefts = [xx_f + f[i] * f4 if deltas[i] else xx_f for i in range(3)]
    lefts.append(lefts[0] + lefts[1] + lefts[2])
    return _exchanged_instance(field, lefts, f + [f4], deltas, [0, 1, 2], x, f4, index)


def quad_case_c(index: int = 0) -> QuadInstance:
    """
    One exchanged symbol splits: [e1, f4) at position j = index mod 3, the other two
    as in case B with F = f_p*f_q, over F_2(e1, f2, f3, f4, x).
    """
    field = FunctionField.create(1, ("e1", "f2", "f3", "f4", "x"))
    j = index % 3
    nonsplit = [i for i in range(3) if i != j]
    f_p, f_q = field.var("f2"), field.var("f3")
    f4, x = field.var("f4"), field.var("x")
    big_f = f_p * f_q
    deltas = {nonsplit[0]: bool((index >> 2) & 1), nonsplit[1]: bool((index >> 3) & 1), j: False}
    xx_f = x.square() * big_f
    lefts: list[Optional[FieldElem]] = [None] * 3
    rights: list[Optional[FieldElem]] = [None] * 3
    for i, fi in zip(nonsplit, (f_p, f_q)):
        lefts[i] = xx_f + fi * f4 if deltas[i] else xx_f
        rights[i] = fi
    lefts[j], rights[j] = field.var("e1"), f4
    lefts.append(lefts[0] + lefts[1] + lefts[2])
    return _exchanged_instance(field, lefts, rights + [f4], deltas, nonsplit, x, f4, index, split=j)


def quad_all_split(k: int = 2) -> QuadInstance:
    """Four symbols over GF(2^k); every quaternion algebra over a finite field is split."""
    _require(1 <= k <= 8, f"quad_all_split needs 1 <= k <= 8, got {k}")
    field = FunctionField.create(k, ())
    nonzero = [e for e in field.elements() if not e.is_zero()]
    symbols = [QSymbol(nonzero[(3 * i + 1) % len(nonzero)], nonzero[(5 * i + 2) % len(nonzero)]) for i in range(4)]
    witnesses = []
    for q in symbols:
        result = split_test(q)
        if not isinstance(result, Split):
            raise PfisterError(f"{q} over a finite field has no split witness")
        witnesses.append((result.lam, result.mu))
    cert = Certificate.identity(symbols, PRODUCT)
    return QuadInstance(tuple(symbols), ProductSplitCertificate(cert, tuple(witnesses)))


def random_symbols(
    count: int = 4,
    degree: int = 2,
    seed: int = 0,
    field: Optional[FunctionField] = None,
) -> list[QSymbol]:
    """Seeded random symbols with polynomial entries of bounded degree."""
    _require(count >= 1 and degree >= 0, "random_symbols needs count >= 1 and degree >= 0")
    field = field or FunctionField.create(1, ("t",))
    rng = random.Random(seed)
    return [
        QSymbol(field.random_element(rng, degree), field.random_nonzero(rng, degree)) for _ in range(count)
    ]


FIXTURES: dict[str, Callable[..., Any]] = {
    "generic_triple": generic_triple,
    "hyperbolic_triple": hyperbolic_triple,
    "canonical_monomial": canonical_monomial,
    "linked_quad": linked_quad,
    "quad_case_a": quad_case_a,
    "quad_case_b": quad_case_b,
    "quad_case_c": quad_case_c,
    "quad_all_split": quad_all_split,
    "random_symbols": random_symbols,
}


def build_fixture(kind: str, **params: Any):
    """
    Build a named fixture.

    Raises:
        InstanceFormatError: If the kind is unknown or the parameters are malformed
    """
    builder = FIXTURES.get(kind)
    if builder is None:
        raise InstanceFormatError(f"unknown fixture kind {kind!r}; expected one of {sorted(FIXTURES)}")
    try:
        instance = builder(**params)
    except TypeError as e:
        raise InstanceFormatError(f"bad parameters for {kind}: {e}") from None
    logger.debug(f"Built fixture {kind} with {params}")
    return instance
