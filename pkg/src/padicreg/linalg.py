"""Exact linear algebra over the rationals."""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .kernels import bareiss_solve


def clear_denominators(values: Sequence[Fraction]) -> tuple[list[int], int]:
    """Return integers ``ints`` and ``scale`` with ``ints[i] = scale * values[i]``."""
    scale = lcm(*(Fraction(v).denominator for v in values)) if values else 1
    return [int(Fraction(v) * scale) for v in values], scale


def primitive(values: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a nonzero vector to coprime integers with positive leading entry."""
    ints, _ = clear_denominators(values)
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    lead = next(v for v in ints if v != 0)
    if lead < 0:
        g = -g
    return tuple(v // g for v in ints)


def solve(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction] | None:
    """Unique solution of the square rational system ``A x = b``, or None if singular."""
    rows = []
    rhs = []
    for row, bi in zip(A, b):
        ints, _ = clear_denominators(list(row) + [bi])
        rows.append(ints[:-1])
        rhs.append(ints[-1])
    out = bareiss_solve(rows, rhs)
    if out is None:
        return None
    num, den = out
    return [Fraction(v, den) for v in num]


def rref(A: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and the pivot column indices."""
    M = [[Fraction(v) for v in row] for row in A]
    ncols = len(M[0]) if M else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if pr is None:
            continue
        M[r], M[pr] = M[pr], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(A: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(A)[1]) if A else 0


def nullspace(A: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{v : A v = 0}``, one vector per free column in increasing order.

    Each basis vector has its own free column set to 1 and the other free
    columns set to 0.
    """
    if not A:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis
