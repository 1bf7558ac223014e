"""Generators of a descent field L = k(u1,...,ur) inside F."""

import logging

from src.exceptions import UnsupportedInputError
from src.fields.rational import FieldElem, FunctionField

logger = logging.getLogger(__name__)


class GeneratorPool:
    """
    Collects the elements of F that generate L.

    Constants are never generators and equal elements are interned, so the
    number of variables of L is an upper bound for its transcendence degree.
    """

    def __init__(self, field: FunctionField):
        self.field = field
        self._elements: list[FieldElem] = []

    def add(self, *elements: FieldElem) -> "GeneratorPool":
        for element in elements:
            if element.field != self.field:
                raise UnsupportedInputError(f"generator {element} is not in {self.field}")
            if element.is_constant() or element in self._elements:
                continue
            self._elements.append(element)
        return self

    @property
    def generators(self) -> tuple[FieldElem, ...]:
        return tuple(self._elements)

    def __len__(self) -> int:
        return len(self._elements)

    def build(self) -> FunctionField:
        names = tuple(f"u{j + 1}" for j in range(len(self._elements)))
        return FunctionField.create(self.field.k, names)

    def lift(self, element: FieldElem) -> FieldElem:
        """The element of L mapping to `element` (a constant or a registered generator)."""
        target = self.build()
        if element.is_constant():
            return target.const(element.constant_value())
        try:
            index = self._elements.index(element)
        except ValueError:
            raise UnsupportedInputError(f"{element} is not a registered generator") from None
        return target.var(f"u{index + 1}")

    def images(self) -> dict[str, FieldElem]:
        return {f"u{j + 1}": element for j, element in enumerate(self._elements)}

    def extend(self, value: FieldElem) -> FieldElem:
        """Image in F of an element of L."""
        return value.field.substitute(value, self.field, self.images())
