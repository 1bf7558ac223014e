"""Parsers for field declarations and element expressions.

Declarations look like "F2", "F4", "F2^3(t1,t2)" or "F16(x,y)". Elements are
polynomial expressions in the declared variables with coefficients written in the
generator symbol g, e.g. "(g*t1^2 + t2)/(t1+1)". Integer literals are read modulo 2
and '-' is the same as '+'.
"""

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Optional

from src.exceptions import ElementParseError

if TYPE_CHECKING:
    from src.fields.rational import FieldElem, FunctionField

GENERATOR_SYMBOL = "g"

_DECLARATION = re.compile(
    r"^\s*F\s*(?P<base>\d+)(?:\s*\^\s*(?P<exp>\d+))?\s*(?:\(\s*(?P<vars>[^()]*?)\s*\))?\s*$"
)
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


@dataclass(frozen=True)
class FieldDeclaration:
    """Parsed field declaration: GF(2^k) plus ordered variable names."""

    k: int
    variables: tuple[str, ...]


def parse_declaration(text: str) -> FieldDeclaration:
    """
    Parse a field declaration string.

    Args:
        text: Declaration such as "F2^4(t1,t2)" or "F8"

    Returns:
        FieldDeclaration with degree and variables

    Raises:
        ElementParseError: If the declaration is malformed
    """
    match = _DECLARATION.match(text)
    if not match:
        raise ElementParseError("malformed field declaration", text, 0)

    base = int(match.group("base"))
    exponent = match.group("exp")
    if exponent is not None:
        if base != 2:
            raise ElementParseError("only characteristic 2 is supported", text, match.start("base"))
        k = int(exponent)
    else:
        if base < 2 or base & (base - 1):
            raise ElementParseError("field order must be a power of 2", text, match.start("base"))
        k = base.bit_length() - 1

    variables: tuple[str, ...] = ()
    names = match.group("vars")
    if names:
        variables = tuple(name.strip() for name in names.split(","))
        offset = match.start("vars")
        for name in variables:
            if not _NAME.fullmatch(name):
                raise ElementParseError(f"bad variable name {name!r}", text, offset)
            if name == GENERATOR_SYMBOL:
                raise ElementParseError("'g' is reserved for the field generator", text, offset)
        if len(set(variables)) != len(variables):
            raise ElementParseError("duplicate variable name", text, offset)
    return FieldDeclaration(k=k, variables=variables)


class _Parser:
    """Recursive-descent parser over a token list."""

    def __init__(self, field: "FunctionField", text: str):
        self.field = field
        self.text = text
        self.tokens = self._tokenize(text)
        self.index = 0

    def _tokenize(self, text: str) -> list[tuple[str, str, int]]:
        tokens = []
        position = 0
        while position < len(text):
            if text[position:].strip() == "":
                break
            match = _TOKEN.match(text, position)
            if not match:
                start = len(text) - len(text[position:].lstrip())
                raise ElementParseError(f"unexpected character {text[start]!r}", text, start)
            kind = match.lastgroup or "op"
            tokens.append((kind, match.group(kind), match.start(kind)))
            position = match.end()
        return tokens

    def _peek(self) -> Optional[tuple[str, str, int]]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def _position(self) -> int:
        token = self._peek()
        return token[2] if token else len(self.text)

    def _accept(self, op: str) -> bool:
        token = self._peek()
        if token and token[0] == "op" and token[1] == op:
            self.index += 1
            return True
        return False

    def parse(self) -> "FieldElem":
        if not self.tokens:
            raise ElementParseError("empty element", self.text, 0)
        value = self._expression()
        if self._peek() is not None:
            raise ElementParseError("unexpected token", self.text, self._position())
        return value

    def _expression(self) -> Any:
        value = self._term()
        while self._accept("+") or self._accept("-"):
            value = value + self._term()
        return value

    def _term(self) -> Any:
        value = self._unary()
        while True:
            if self._accept("*"):
                value = value * self._unary()
            elif self._accept("/"):
                position = self._position()
                divisor = self._unary()
                if divisor.is_zero():
                    raise ElementParseError("division by zero", self.text, position)
                value = value / divisor
            else:
                return value

    def _unary(self) -> Any:
        if self._accept("-") or self._accept("+"):
            return self._unary()
        return self._power()

    def _power(self) -> Any:
        base = self._atom()
        if not self._accept("^"):
            return base
        negative = self._accept("-")
        token = self._peek()
        if token is None or token[0] != "int":
            raise ElementParseError("expected integer exponent", self.text, self._position())
        self.index += 1
        exponent = int(token[1])
        if negative:
            if base.is_zero():
                raise ElementParseError("zero to a negative power", self.text, token[2])
            exponent = -exponent
        return base ** exponent

    def _atom(self) -> Any:
        token = self._peek()
        if token is None:
            raise ElementParseError("unexpected end of input", self.text, len(self.text))
        kind, value, position = token
        if kind == "int":
            self.index += 1
            return self.field.const(int(value) % 2)
        if kind == "name":
            self.index += 1
            if value == GENERATOR_SYMBOL:
                return self.field.gen()
            if value not in self.field.variables:
                raise ElementParseError(f"unknown variable {value!r}", self.text, position)
            return self.field.var(value)
        if self._accept("("):
            inner = self._expression()
            if not self._accept(")"):
                raise ElementParseError("expected ')'", self.text, self._position())
            return inner
        raise ElementParseError(f"unexpected token {value!r}", self.text, position)


def parse_element(field: "FunctionField", text: str) -> "FieldElem":
    """
    Parse an element expression over the given field.

    Raises:
        ElementParseError: On malformed input, with the 0-based position
    """
    return _Parser(field, text).parse()
