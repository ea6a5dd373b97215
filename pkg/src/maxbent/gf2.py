"""Linear algebra over F_2 with rows stored as integer bitmasks.

A matrix is a list of ints; bit ``j`` of ``rows[i]`` is the entry (i, j).
"""

from __future__ import annotations

from typing import Iterable, List, Sequence


def rank(rows: Iterable[int]) -> int:
    basis: List[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
    return len(basis)


def echelon(rows: Iterable[int]) -> List[int]:
    """Reduced row echelon form, pivots on the highest set bit."""
    basis: List[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            hb = r.bit_length() - 1
            basis = [b ^ r if (b >> hb) & 1 else b for b in basis]
            basis.append(r)
    return sorted(basis, reverse=True)


def is_independent(vectors: Sequence[int]) -> bool:
    return rank(vectors) == len(vectors)


def kernel(rows: Sequence[int], ncols: int) -> List[int]:
    """Basis of {v : rows . v = 0}, i.e. the right null space of the matrix."""
    red = echelon(rows)
    pivots = {}
    for r in red:
        pivots[r.bit_length() - 1] = r
    out = []
    for free in range(ncols):
        if free in pivots:
            continue
        v = 1 << free
        for p, r in pivots.items():
            if (r >> free) & 1:
                v |= 1 << p
        out.append(v)
    return out


def span(basis: Sequence[int]) -> List[int]:
    """All 2^len(basis) combinations, ordered by the combination index."""
    out = [0]
    for b in basis:
        out += [v ^ b for v in out]
    return out


def transpose(rows: Sequence[int], ncols: int) -> List[int]:
    return [sum(((r >> j) & 1) << i for i, r in enumerate(rows)) for j in range(ncols)]


def inverse(rows: Sequence[int]) -> List[int]:
    """Inverse of a square matrix by Gauss-Jordan; raises ValueError if singular."""
    k = len(rows)
    aug = [(r & ((1 << k) - 1)) | (1 << (k + i)) for i, r in enumerate(rows)]
    for col in range(k):
        piv = next((i for i in range(col, k) if (aug[i] >> col) & 1), None)
        if piv is None:
            raise ValueError("matrix is singular over F_2")
        aug[col], aug[piv] = aug[piv], aug[col]
        for i in range(k):
            if i != col and (aug[i] >> col) & 1:
                aug[i] ^= aug[col]
    return [r >> k for r in aug]


def matvec(rows: Sequence[int], v: int) -> int:
    return sum((((r & v).bit_count()) & 1) << i for i, r in enumerate(rows))
