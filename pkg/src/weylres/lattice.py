"""Intersection lattice, Möbius function, characteristic polynomial, local freeness."""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .arrangement import Arrangement, Flat, Hyperplane, cone, essentialize
from .scalar_poly import QQ, Field


def _reduce(eqs: tuple, v: Sequence[Fraction]) -> list[Fraction]:
    """Remainder of v against an RREF system (zero iff v lies in the row span)."""
    v = list(v)
    for row in eqs:
        p = next(i for i, c in enumerate(row) if c)
        if v[p]:
            f = v[p]
            v = [a - f * b for a, b in zip(v, row)]
    return v


@dataclass
class FlatRecord:
    flat: Flat
    mask: int
    mobius: int = 0

    @property
    def codim(self) -> int:
        return self.flat.codim

    def hyperplane_indices(self) -> list[int]:
        m, i, out = self.mask, 0, []
        while m:
            if m & 1:
                out.append(i)
            m >>= 1
            i += 1
        return out


@dataclass
class IntersectionLattice:
    arrangement: Arrangement
    levels: list = field(default_factory=list)   # levels[c] = flats of codimension c

    def flats(self, codim: int | None = None) -> list[FlatRecord]:
        if codim is None:
            return [f for lev in self.levels for f in lev]
        return self.levels[codim] if codim < len(self.levels) else []

    @property
    def rank(self) -> int:
        return len(self.levels) - 1


def _mask_of(A: Arrangement, flat: Flat) -> int:
    m = 0
    for i, h in enumerate(A.hyperplanes):
        if not any(_reduce(flat.equations, h.coeffs)):
            m |= 1 << i
    return m


def _enumerate(A: Arrangement, start: FlatRecord, max_codim: int | None = None) -> list[list[FlatRecord]]:
    """Flats contained in ``start`` level by level (pairwise intersection + RREF dedup)."""
    n = len(A)
    levels = [[start]]
    top = A.rank if max_codim is None else min(max_codim, A.rank)
    while levels[-1] and levels[-1][0].codim < top:
        seen: dict = {}
        for X in levels[-1]:
            for i in range(n):
                if X.mask >> i & 1:
                    continue
                Y = X.flat.intersect(A.hyperplanes[i].coeffs)
                if Y in seen:
                    continue
                seen[Y] = FlatRecord(Y, _mask_of(A, Y))
        levels.append(sorted(seen.values(), key=lambda r: r.flat.equations))
    return levels


def _mobius(levels: list[list[FlatRecord]]) -> None:
    levels[0][0].mobius = 1
    below = [levels[0][0]]
    for c in range(1, len(levels)):
        for X in levels[c]:
            if c == 1:
                X.mobius = -1
            elif c == 2:
                X.mobius = bin(X.mask).count("1") - 1
            else:
                X.mobius = -sum(Y.mobius for Y in below if Y.mask & ~X.mask == 0)
        below.extend(levels[c])


_LATTICES: dict = {}
_LOCK = threading.Lock()


def intersection_lattice(A: Arrangement) -> IntersectionLattice:
    if not A.central:
        raise ValueError("the lattice is built for central arrangements; cone first")
    hit = _LATTICES.get(A)
    if hit is not None:
        return hit
    top = FlatRecord(Flat(()), 0)
    levels = _enumerate(A, top)
    _mobius(levels)
    L = IntersectionLattice(A, levels)
    with _LOCK:
        return _LATTICES.setdefault(A, L)


@dataclass(frozen=True)
class CharPoly:
    coeffs: tuple            # highest degree first
    chi0: tuple | None       # chi / (t - 1), highest degree first

    def __call__(self, t):
        v = 0
        for c in self.coeffs:
            v = v * t + c
        return v

    def chi0_at(self, t):
        if self.chi0 is None:
            raise ValueError("chi is not divisible by t - 1")
        v = 0
        for c in self.chi0:
            v = v * t + c
        return v

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def _divide_t_minus_1(coeffs: Sequence[int]) -> tuple | None:
    out, acc = [], 0
    for c in coeffs[:-1]:
        acc = acc + c
        out.append(acc)
    return tuple(out) if acc + coeffs[-1] == 0 else None


def characteristic_polynomial(A: Arrangement) -> CharPoly:
    """chi(A; t) = sum over flats of mu(X) t^{dim X}; affine input goes through the cone."""
    if not A.central:
        c = characteristic_polynomial(cone(A))
        return CharPoly(c.chi0, _divide_t_minus_1(c.chi0) if len(c.chi0) > 1 else None)
    n = A.dim
    L = intersection_lattice(A)
    coeffs = [0] * (n + 1)
    for X in L.flats():
        coeffs[X.codim] += X.mobius
    coeffs = tuple(coeffs)  # index = codim, so highest degree t^n comes first
    chi0 = _divide_t_minus_1(coeffs) if A.hyperplanes else None
    return CharPoly(coeffs, chi0)


def flats_in(A: Arrangement, H: Hyperplane, codim: int) -> list[FlatRecord]:
    """Flats X of A with X inside H and codim_V X = codim."""
    i = A.index(H)
    start = FlatRecord(Flat.from_forms([H.coeffs]), 0)
    start.mask = _mask_of(A, start.flat)
    levels = _enumerate(A, start, max_codim=codim)
    return [X for X in levels[-1] if X.codim == codim] if codim >= 1 else []


def localization(A: Arrangement, X: FlatRecord) -> Arrangement:
    return Arrangement(A.dim, [h for i, h in enumerate(A.hyperplanes) if X.mask >> i & 1], central=True)


@dataclass
class LocalCheck:
    flat: Flat
    size: int
    free: bool
    exponents: tuple | None


@dataclass
class LocalFreenessReport:
    hyperplane: Hyperplane
    codim: int
    checks: list
    ok: bool

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.free]


def is_locally_free_along(A: Arrangement, H: Hyperplane, codim: int, field: Field = QQ) -> LocalFreenessReport:
    """Freeness of A_X for every flat X inside H of the given codimension (center excluded)."""
    from .logder import exponents_if_free
    center = A.rank
    checks = []
    for X in flats_in(A, H, codim):
        if X.codim == center:
            continue
        loc = essentialize(localization(A, X))
        exps = exponents_if_free(loc, field)
        checks.append(LocalCheck(X.flat, bin(X.mask).count("1"), exps is not None, exps))
    return LocalFreenessReport(H, codim, checks, all(c.free for c in checks))
