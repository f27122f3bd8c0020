"""Exact linear algebra over prime fields and the integers.

Matrices are plain lists of Python-int rows, so all arithmetic is exact.
Used for randomized generic-rank computation (mod a large prime) and for
invariant checks over the rationals (fraction-free elimination).
"""

from __future__ import annotations

from typing import Sequence

# Primes near 2^61 used for randomized rank computation.  Both verified
# prime; the first is the Mersenne prime 2^61 - 1.
RANK_PRIMES: tuple[int, int] = (2305843009213693951, 2305843009213693967)


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank of an integer matrix over GF(p) by Gaussian elimination.

    Always a lower bound on the rational rank of the same matrix.
    """
    a = [[x % p for x in row] for row in rows]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    rank = 0
    for col in range(n):
        pivot = next((i for i in range(rank, m) if a[i][col]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        inv = pow(a[rank][col], p - 2, p)
        prow = a[rank]
        for i in range(rank + 1, m):
            f = a[i][col]
            if f:
                f = (f * inv) % p
                row = a[i]
                for j in range(col, n):
                    row[j] = (row[j] - f * prow[j]) % p
        rank += 1
        if rank == m:
            break
    return rank


def rank_rational(rows: Sequence[Sequence[int]]) -> int:
    """Exact rank of an integer matrix over Q (Bareiss fraction-free form)."""
    a = [[int(x) for x in row] for row in rows]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    rank = 0
    prev = 1
    for col in range(n):
        pivot = next((i for i in range(rank, m) if a[i][col]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        prow = a[rank]
        for i in range(rank + 1, m):
            row = a[i]
            f = row[col]
            for j in range(col, n):
                row[j] = (prow[col] * row[j] - f * prow[j]) // prev
        prev = prow[col]
        rank += 1
        if rank == m:
            break
    return rank


class IncrementalRankModP:
    """Row-by-row rank tracking over GF(p) for greedy basis extraction.

    ``offer(row)`` reports whether the row enlarges the span; accepted rows
    are kept in echelon form.
    """

    def __init__(self, ncols: int, p: int) -> None:
        self.ncols = ncols
        self.p = p
        self._echelon: list[list[int]] = []
        self._pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self._echelon)

    def reduce(self, row: Sequence[int]) -> list[int]:
        p = self.p
        r = [x % p for x in row]
        for erow, piv in zip(self._echelon, self._pivots):
            f = r[piv]
            if f:
                f = (f * pow(erow[piv], p - 2, p)) % p
                for j in range(piv, self.ncols):
                    r[j] = (r[j] - f * erow[j]) % p
        return r

    def offer(self, row: Sequence[int]) -> bool:
        r = self.reduce(row)
        piv = next((j for j, x in enumerate(r) if x), None)
        if piv is None:
            return False
        # keep echelon rows ordered by pivot column
        pos = next((i for i, q in enumerate(self._pivots) if q > piv), len(self._pivots))
        self._echelon.insert(pos, r)
        self._pivots.insert(pos, piv)
        return True
