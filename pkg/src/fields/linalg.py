"""Linear algebra over GF(2) on integer bit vectors."""

from typing import Optional, Sequence


def gf2_solve(columns: Sequence[int], target: int) -> Optional[int]:
    """
    Solve sum of selected columns == target over GF(2).

    Columns and target are bit vectors packed into ints. Free variables are
    fixed to zero, so the answer is deterministic for a given column order.

    Args:
        columns: Column vectors of the system matrix
        target: Right-hand side

    Returns:
        Bit mask of the columns to add up, or None when the system is inconsistent
    """
    basis: dict[int, tuple[int, int]] = {}
    for index, column in enumerate(columns):
        vector, combo = _reduce(basis, column, 1 << index)
        if vector:
            basis[vector.bit_length() - 1] = (vector, combo)

    vector, combo = _reduce(basis, target, 0)
    if vector:
        return None
    return combo


def _reduce(basis: dict[int, tuple[int, int]], vector: int, combo: int) -> tuple[int, int]:
    """Eliminate pivots from the top bit down."""
    while vector:
        pivot = vector.bit_length() - 1
        entry = basis.get(pivot)
        if entry is None:
            break
        vector ^= entry[0]
        combo ^= entry[1]
    return vector, combo


def gf2_rank(vectors: Sequence[int]) -> int:
    """Rank of a family of GF(2) bit vectors."""
    basis: dict[int, tuple[int, int]] = {}
    for vector in vectors:
        reduced, _ = _reduce(basis, vector, 0)
        if reduced:
            basis[reduced.bit_length() - 1] = (reduced, 0)
    return len(basis)
