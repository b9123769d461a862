"""Abelianization of finitely presented groups via integer Smith normal form."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

__all__ = ["smith_normal_form", "abelianization_invariants", "Abelianization", "is_perfect"]


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors ``d1 | d2 | ... | dr`` of an integer matrix.

    Entries are Python ints, so there is no overflow.

    >>> smith_normal_form([[2, 0], [0, 3]])
    [1, 6]
    """
    A = [list(map(int, row)) for row in matrix]
    if not A or not A[0]:
        return []
    rows, cols = len(A), len(A[0])
    diag = []
    t = 0
    while t < min(rows, cols):
        # pivot: nonzero entry of least absolute value in the trailing block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, rows):
                q = A[i][t] // p
                if q:
                    Ai, At = A[i], A[t]
                    for j in range(t, cols):
                        Ai[j] -= q * At[j]
                if A[i][t]:
                    done = False
            for j in range(t + 1, cols):
                q = A[t][j] // p
                if q:
                    for row in A[t:]:
                        row[j] -= q * row[t]
                if A[t][j]:
                    done = False
            if done:
                # the pivot must divide everything left, or the chain breaks
                bad = next(
                    ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % p),
                    None,
                )
                if bad is None:
                    break
                i, _ = bad
                At, Ai = A[t], A[i]
                for j in range(t, cols):
                    At[j] += Ai[j]
                continue
            # move the smallest remaining entry of row/column t to the pivot
            cands = [(abs(A[i][t]), i, t) for i in range(t, rows) if A[i][t]]
            cands += [(abs(A[t][j]), t, j) for j in range(t, cols) if A[t][j]]
            _, i, j = min(cands)
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    # normalise the divisibility chain (the loop above already ensures it,
    # this only guards against pathological orderings)
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            a, b = diag[i], diag[j]
            g = gcd(a, b)
            diag[i], diag[j] = g, a * b // g
    return diag


@dataclass(frozen=True)
class Abelianization:
    free_rank: int
    torsion: tuple[int, ...]

    @property
    def trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) or "0"


def abelianization_invariants(P) -> Abelianization:
    """H_1 of the presented group as free rank plus torsion factors (units dropped)."""
    k = P.rank
    if k == 0:
        return Abelianization(0, ())
    factors = smith_normal_form(P.exponent_matrix()) if P.relators else []
    free_rank = k - len(factors)
    return Abelianization(free_rank, tuple(d for d in factors if d != 1))


def is_perfect(P) -> bool:
    return abelianization_invariants(P).trivial
