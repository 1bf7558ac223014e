"""Exact arithmetic in GF(2^k) and rational function fields over it."""

from src.fields.binary import BinaryField
from src.fields.mpoly import MPoly
from src.fields.rational import (
    EtaleElem,
    FieldElem,
    FunctionField,
    artin_schreier_solve,
    leading_data,
    norm_insep,
    norm_sep,
    trace,
)

__all__ = [
    "BinaryField",
    "EtaleElem",
    "FieldElem",
    "FunctionField",
    "MPoly",
    "artin_schreier_solve",
    "leading_data",
    "norm_insep",
    "norm_sep",
    "trace",
]
