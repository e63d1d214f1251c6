"""Exact dense linear algebra over Q or F_p (python-flint backend)."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

import flint

from ..scalar_poly import Field


def _int_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    # scaling a row by a nonzero constant changes neither rank nor kernel
    out = []
    for r in rows:
        den = 1
        for v in r:
            if isinstance(v, Fraction):
                den = lcm(den, v.denominator)
        out.append([int(v * den) for v in r])
    return out


def _ncols(rows) -> int:
    return len(rows[0]) if rows else 0


def rank(rows: Sequence[Sequence], fld: Field) -> int:
    if not rows or not _ncols(rows):
        return 0
    if fld.p is None:
        return flint.fmpz_mat(_int_rows(rows)).rank()
    return flint.nmod_mat([[int(v) % fld.p for v in r] for r in rows], fld.p).rank()


def nullspace(rows: Sequence[Sequence], fld: Field, ncols: int | None = None) -> list[list]:
    """Basis of {v : rows * v = 0}, as field elements."""
    n = _ncols(rows) if ncols is None else ncols
    if n == 0:
        return []
    if not rows:
        one, zero = (Fraction(1), Fraction(0)) if fld.p is None else (1, 0)
        return [[one if i == j else zero for j in range(n)] for i in range(n)]
    if fld.p is None:
        K, nul = flint.fmpz_mat(_int_rows(rows)).nullspace()
        cols = []
        for j in range(nul):
            cols.append([Fraction(int(K[i, j])) for i in range(n)])
        return cols
    K, nul = flint.nmod_mat([[int(v) % fld.p for v in r] for r in rows], fld.p).nullspace()
    return [[int(K[i, j]) for i in range(n)] for j in range(nul)]


def rref(rows: Sequence[Sequence], fld: Field) -> tuple[list[list], list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    if not rows or not _ncols(rows):
        return [], []
    if fld.p is None:
        R, r = flint.fmpq_mat(_int_rows(rows)).rref()
        out = [[Fraction(int(R[i, j].p), int(R[i, j].q)) for j in range(R.ncols())] for i in range(r)]
    else:
        R, r = flint.nmod_mat([[int(v) % fld.p for v in rw] for rw in rows], fld.p).rref()
        out = [[int(R[i, j]) for j in range(R.ncols())] for i in range(r)]
    pivots = [next(j for j, v in enumerate(row) if v) for row in out]
    return out, pivots


def independent_rows(rows: Sequence[Sequence], fld: Field, start: int = 0) -> list[int]:
    """Indices i >= start of rows not in the span of the rows before them."""
    if not rows or not _ncols(rows):
        return []
    if fld.p is None:
        M = flint.fmpz_mat(_int_rows(rows))
    else:
        M = flint.nmod_mat([[int(v) % fld.p for v in r] for r in rows], fld.p)
    T = M.transpose()
    if fld.p is None:
        R, _, r = T.rref()
    else:
        R, r = T.rref()
    out, j = [], 0
    for i in range(r):
        while R[i, j] == 0:
            j += 1
        if j >= start:
            out.append(j)
        j += 1
    return out
