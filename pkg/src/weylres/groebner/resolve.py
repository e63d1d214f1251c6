"""Resolutions by degreewise syzygy kernels, certified by Buchsbaum-Eisenbud.

Minimal syzygies are found degree by degree as kernels of the multiplication
map F_d -> (ambient)_d.  A complex assembled this way is only known to be
exact up to the degrees inspected, so it is certified with the
Buchsbaum-Eisenbud criterion: for the complex

    0 -> G_m -> ... -> G_1 -> G_0 = ambient

exactness holds iff rank G_k = r_k + r_{k+1} and depth I_{r_k}(psi_k) >= k
for k >= 1.  Ranks come from exact point evaluations (lower bounds that meet
the upper bound forced by psi_k psi_{k+1} = 0).  Depth 2 is a gcd test on the
maximal minors; higher depth is read off a Gröbner basis of the minor ideal.
"""
from __future__ import annotations

import itertools
import random
from typing import Sequence

import flint

from ..scalar_poly import Field, Polynomial
from .hilbert import monomials_of_degree
from .linalg import independent_rows, nullspace, rank


def _monomial_index(n: int, shifts: Sequence[int], d: int) -> dict:
    index = {}
    for pos, a in enumerate(shifts):
        for m in monomials_of_degree(n, d - a):
            index[(pos, m)] = len(index)
    return index


def _rows_for(gens, n: int, shifts, d: int, index: dict):
    """Rows = m * g for every generator g and monomial m of degree d - deg g."""
    rows, labels = [], []
    for gi, g in enumerate(gens):
        gd = g.degree()
        if gd is None or gd > d:
            continue
        for mult in monomials_of_degree(n, d - gd):
            row = [0] * len(index)
            for pos, c in enumerate(g.coords):
                for m, v in c.terms.items():
                    row[index[(pos, tuple(x + y for x, y in zip(m, mult)))]] = v
            rows.append(row)
            labels.append((gi, mult))
    return rows, labels


def linear_syzygies(gens, d_max: int, found: list | None = None, d_from: int | None = None):
    """Minimal syzygies of ``gens`` in degrees d_from..d_max.

    ``found`` holds minimal syzygies already known in lower degrees (extended
    in place).  Returns the extended list.
    """
    from .modules import FreeModuleElement
    n, fld = gens[0].nvars, gens[0].field
    src = tuple(g.degree() for g in gens)
    amb = gens[0].shifts
    found = [] if found is None else found
    start = min(src) + 1 if d_from is None else d_from
    zero = Polynomial.zero(n, fld)
    for d in range(start, d_max + 1):
        idx = _monomial_index(n, amb, d)
        rows, labels = _rows_for(gens, n, amb, d, idx)
        if not rows:
            continue
        if idx:
            transpose = [[rows[i][j] for i in range(len(rows))] for j in range(len(idx))]
            kernel = nullspace(transpose, fld, ncols=len(rows))
        else:
            kernel = nullspace([], fld, ncols=len(rows))
        if not kernel:
            continue
        # multiples of lower syzygies share the label order of F_d
        span = _rows_for(found, n, src, d, _monomial_index(n, src, d))[0] if found else []
        span = [r for r in span if any(r)]
        for j in independent_rows(span + kernel, fld, len(span)):
            v = kernel[j - len(span)]
            coords: list[dict] = [dict() for _ in gens]
            for (gi, mult), c in zip(labels, v):
                if c:
                    coords[gi][mult] = c
            found.append(FreeModuleElement(
                [Polynomial(n, t, fld) if t else zero for t in coords], src))
    return found


# certification ----------------------------------------------------------

class _FlintRing:
    def __init__(self, n: int, fld: Field):
        names = tuple(f"x{i}" for i in range(n))
        if fld.p is None:
            self.ctx = flint.fmpq_mpoly_ctx.get(names, ordering="degrevlex")
        else:
            self.ctx = flint.nmod_mpoly_ctx.get(names, ordering="degrevlex", modulus=fld.p)
        self.fld = fld

    def conv(self, f: Polynomial):
        if self.fld.p is None:
            return self.ctx.from_dict({m: flint.fmpq(c.numerator, c.denominator)
                                       for m, c in f.terms.items()})
        return self.ctx.from_dict({m: int(c) for m, c in f.terms.items()})

    def back(self, g, n: int) -> Polynomial:
        from fractions import Fraction
        terms = {}
        for m, c in g.to_dict().items():
            if self.fld.p is None:
                terms[tuple(m)] = Fraction(int(c.p), int(c.q))
            else:
                terms[tuple(m)] = int(c)
        return Polynomial(n, terms, self.fld)


def _det(mat: list[list]):
    """Bareiss fraction-free determinant over a polynomial ring."""
    m = [row[:] for row in mat]
    k = len(m)
    if k == 0:
        return None
    sign = 1
    prev = None
    for i in range(k - 1):
        if m[i][i].is_zero():
            swap = next((r for r in range(i + 1, k) if not m[r][i].is_zero()), None)
            if swap is None:
                return m[i][i] * 0
            m[i], m[swap] = m[swap], m[i]
            sign = -sign
        for r in range(i + 1, k):
            for c in range(i + 1, k):
                num = m[r][c] * m[i][i] - m[r][i] * m[i][c]
                m[r][c] = num if prev is None else num / prev
        prev = m[i][i]
    d = m[k - 1][k - 1]
    return d if sign == 1 else -d


def _matrix_rank(cols, fld: Field, rng: random.Random, tries: int = 3) -> int:
    """Lower bound for the rank over the fraction field (exact at a point)."""
    if not cols:
        return 0
    n = cols[0].nvars
    best = 0
    for _ in range(tries):
        pt = [rng.randint(-97, 97) for _ in range(n)]
        rows = [[c.evaluate(pt) for c in v.coords] for v in cols]
        best = max(best, rank(rows, fld))
        if best == min(len(cols), len(cols[0].coords)):
            break
    return best


def _minors(cols, r: int, ring: _FlintRing):
    """All r x r minors of the matrix whose columns are ``cols``."""
    nrows = len(cols[0].coords)
    conv = [[ring.conv(v.coords[i]) for v in cols] for i in range(nrows)]
    for rsel in itertools.combinations(range(nrows), r):
        for csel in itertools.combinations(range(len(cols)), r):
            yield _det([[conv[i][j] for j in csel] for i in rsel])


def _minor_ideal_depth_at_least(cols, r: int, k: int, fld: Field) -> bool:
    n = cols[0].nvars
    ring = _FlintRing(n, fld)
    if k <= 1:
        return any(not m.is_zero() for m in _minors(cols, r, ring))
    if k == 2:
        g = None
        for m in _minors(cols, r, ring):
            if m.is_zero():
                continue
            g = m if g is None else g.gcd(m)
            if g.is_constant():
                return True
        return False
    # depth k >= 3: codimension of the minor ideal from a Gröbner basis
    from .modules import FreeModuleElement, buchberger_module
    polys = [ring.back(m, n) for m in _minors(cols, r, ring) if not m.is_zero()]
    if not polys:
        return False
    gb = buchberger_module([FreeModuleElement([f], (0,)) for f in polys])
    lead = [set(i for i, e in enumerate(mono) if e) for _, mono in gb.leading_terms()]
    return _monomial_codim(lead, n) >= k


def _monomial_codim(supports: list[set], n: int) -> int:
    """Height of a monomial ideal: smallest variable set meeting every support."""
    for size in range(0, n + 1):
        for cover in itertools.combinations(range(n), size):
            cs = set(cover)
            if all(s & cs for s in supports):
                return size
    return n + 1


def buchsbaum_eisenbud(stages: Sequence[Sequence], ambient_rank: int, fld: Field,
                       seed: int = 0) -> tuple[bool, str]:
    """Check exactness of 0 -> G_m -> ... -> G_1 -> G_0 (G_0 of rank ambient_rank).

    ``stages[k-1]`` are the columns of psi_k : G_k -> G_{k-1}.
    """
    rng = random.Random(seed)
    ranks = [_matrix_rank(cols, fld, rng) for cols in stages] + [0]
    sizes = [ambient_rank] + [len(cols) for cols in stages]
    for k in range(1, len(stages) + 1):
        if sizes[k] != ranks[k - 1] + ranks[k]:
            return False, f"rank condition fails at stage {k}"
    for k in range(1, len(stages) + 1):
        if not _minor_ideal_depth_at_least(stages[k - 1], ranks[k - 1], k, fld):
            return False, f"depth condition fails at stage {k}"
    return True, "exact"


def minimal_subset(gens) -> list[int]:
    """Indices of a minimal generating subset, chosen degree by degree.

    A generator of degree d is kept iff it is not in the span of the degree-d
    multiples of the kept lower generators and the earlier kept ones of degree d.
    """
    live = [i for i, g in enumerate(gens) if not g.is_zero()]
    if not live:
        return []
    n, fld = gens[live[0]].nvars, gens[live[0]].field
    amb = gens[live[0]].shifts
    kept: list[int] = []
    for d in sorted({gens[i].degree() for i in live}):
        cands = [i for i in live if gens[i].degree() == d]
        idx = _monomial_index(n, amb, d)
        lower = _rows_for([gens[i] for i in kept], n, amb, d, idx)[0] if kept else []
        cand_rows = _rows_for([gens[i] for i in cands], n, amb, d, idx)[0]
        base = rank(lower, fld) if lower else 0
        if rank(lower + cand_rows, fld) == base + len(cands):
            kept.extend(cands)
            continue
        kept.extend(cands[j - len(lower)]
                    for j in independent_rows(lower + cand_rows, fld, len(lower)))
    return sorted(kept)
