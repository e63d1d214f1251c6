"""Hilbert functions by degreewise linear algebra (no Gröbner machinery)."""
from __future__ import annotations

from functools import lru_cache
from math import comb

from .linalg import rank


@lru_cache(maxsize=None)
def monomials_of_degree(n: int, d: int) -> tuple:
    """All exponent vectors of length n and total degree d, in a fixed order."""
    if d < 0:
        return ()
    if n == 1:
        return ((d,),)
    out = []
    for a in range(d, -1, -1):
        for rest in monomials_of_degree(n - 1, d - a):
            out.append((a,) + rest)
    return tuple(out)


def dim_free(n: int, shifts, d: int) -> int:
    """dim of (⊕ S[-a])_d over a polynomial ring in n variables."""
    return sum(comb(d - a + n - 1, n - 1) for a in shifts if d >= a)


def graded_piece_rows(pres, d: int) -> list[list]:
    """Coefficient vectors spanning the degree-d piece of the submodule."""
    n = pres.nvars
    index = {}
    for pos, a in enumerate(pres.shifts):
        for m in monomials_of_degree(n, d - a):
            index[(pos, m)] = len(index)
    rows = []
    for g in pres.generators:
        gd = g.degree()
        if gd is None or gd > d:
            continue
        for mult in monomials_of_degree(n, d - gd):
            row = [0] * len(index)
            for pos, c in enumerate(g.coords):
                for m, v in c.terms.items():
                    row[index[(pos, tuple(x + y for x, y in zip(m, mult)))]] = v
            rows.append(row)
    return rows


def hilbert_function(pres, d_min: int, d_max: int) -> dict[int, int]:
    """dim_K M_d for d in [d_min, d_max], M given by homogeneous generators."""
    out = {}
    for d in range(d_min, d_max + 1):
        rows = graded_piece_rows(pres, d)
        out[d] = rank(rows, pres.field) if rows and rows[0] else 0
    return out


def hilbert_from_betti(betti, n: int, d_min: int, d_max: int) -> dict[int, int]:
    """Alternating sum over a resolution: Σ (-1)^i β_{i,j} dim S[-j]_d."""
    out = {}
    for d in range(d_min, d_max + 1):
        tot = 0
        for (i, j), b in betti.data.items():
            if d >= j:
                tot += (-1) ** i * b * comb(d - j + n - 1, n - 1)
        out[d] = tot
    return out
