"""Positive roots, heights and Coxeter data for types A_l, B_2 and D_l.

Roots are stored in the usual ambient coordinates (x_1 - x_2 for A_l lives
in l+1 coordinates).  ``essential_forms`` rewrites them in rank-many
coordinates, which is what the arrangement constructors use.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property


SUPPORTED = ("A", "B", "D")


def _parse(kind: str, rank: int | None) -> tuple[str, int]:
    kind = kind.strip().upper()
    if rank is None:
        if len(kind) < 2 or not kind[1:].isdigit():
            raise ValueError(f"cannot read root system type {kind!r}")
        kind, rank = kind[0], int(kind[1:])
    if kind not in SUPPORTED:
        raise ValueError(f"unsupported root system type {kind!r}")
    if kind == "A" and rank < 1:
        raise ValueError("A_l needs l >= 1")
    if kind == "B" and rank != 2:
        raise ValueError("only B_2 is supported in type B")
    if kind == "D" and rank < 4:
        raise ValueError("D_l needs l >= 4")
    return kind, rank


def _unit(n: int, i: int, c: int = 1) -> list[int]:
    v = [0] * n
    v[i] = c
    return v


@dataclass(frozen=True)
class RootSystem:
    kind: str
    rank: int
    roots: tuple       # positive roots, ambient integer coordinates
    simple: tuple      # simple roots, same coordinates

    @property
    def name(self) -> str:
        return f"{self.kind}{self.rank}"

    @property
    def ambient_dim(self) -> int:
        return len(self.roots[0])

    @cached_property
    def meta(self) -> "RootMeta":
        return _meta(self)

    def essential_forms(self) -> list[tuple[int, ...]]:
        """Roots as forms on a rank-dimensional space.

        For A_l we use y_i = x_i - x_{l+1}; the other types are already
        essential in their ambient coordinates.
        """
        if self.kind != "A":
            return [tuple(r) for r in self.roots]
        n = self.rank
        out = []
        for r in self.roots:
            out.append(tuple(r[:n]))  # the last coordinate is minus the sum of the rest
        return out


@dataclass(frozen=True)
class RootMeta:
    heights: tuple
    simple_flags: tuple
    highest: int              # index of the highest root
    coxeter_number: int
    exponents: tuple
    simple_coefficients: tuple = field(default=())


def positive_roots(kind: str, rank: int | None = None) -> RootSystem:
    """Canonical positive roots of A_l, B_2 or D_l ("A3" or ("A", 3) both work)."""
    kind, rank = _parse(kind, rank)
    if kind == "A":
        n = rank + 1
        roots = []
        for i in range(n):
            for j in range(i + 1, n):
                v = [0] * n
                v[i], v[j] = 1, -1
                roots.append(tuple(v))
        simple = [tuple(_unit(n, i)[k] - _unit(n, i + 1)[k] for k in range(n)) for i in range(rank)]
    elif kind == "B":
        roots = [(1, 0), (0, 1), (1, -1), (1, 1)]
        simple = [(1, -1), (0, 1)]
    else:
        n = rank
        roots = []
        for i in range(n):
            for j in range(i + 1, n):
                for s in (-1, 1):
                    v = [0] * n
                    v[i], v[j] = 1, s
                    roots.append(tuple(v))
        simple = [tuple(_unit(n, i)[k] - _unit(n, i + 1)[k] for k in range(n)) for i in range(n - 1)]
        v = [0] * n
        v[n - 2] = v[n - 1] = 1
        simple.append(tuple(v))
    return RootSystem(kind, rank, tuple(roots), tuple(simple))


def _solve_simple(rs: RootSystem, root) -> tuple[int, ...]:
    # coefficients in the simple basis; the simple roots are independent so
    # least squares via the Gram system is exact
    S = rs.simple
    k = len(S)
    gram = [[Fraction(sum(a * b for a, b in zip(S[i], S[j]))) for j in range(k)] for i in range(k)]
    rhs = [Fraction(sum(a * b for a, b in zip(S[i], root))) for i in range(k)]
    # Gaussian elimination
    m = [row + [r] for row, r in zip(gram, rhs)]
    for c in range(k):
        p = next(r for r in range(c, k) if m[r][c] != 0)
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [v / piv for v in m[c]]
        for r in range(k):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    coeffs = [m[i][k] for i in range(k)]
    if any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError(f"{root} is not an integral combination of simple roots")
    return tuple(int(c) for c in coeffs)


def _meta(rs: RootSystem) -> RootMeta:
    coeffs = tuple(_solve_simple(rs, r) for r in rs.roots)
    heights = tuple(sum(c) for c in coeffs)
    if any(h <= 0 for h in heights) or any(min(c) < 0 for c in coeffs):
        raise ArithmeticError("stored roots are not positive for the chosen simple system")
    top = max(heights)
    highest = [i for i, h in enumerate(heights) if h == top]
    if len(highest) != 1:
        raise ArithmeticError("no unique highest root")
    simple_set = set(rs.simple)
    h, exps = _coxeter(rs)
    if h != top + 1:
        raise ArithmeticError("Coxeter number disagrees with the highest root")
    return RootMeta(heights, tuple(r in simple_set for r in rs.roots), highest[0], h, exps, coeffs)


def _coxeter(rs: RootSystem) -> tuple[int, tuple]:
    l = rs.rank
    if rs.kind == "A":
        return l + 1, tuple(range(1, l + 1))
    if rs.kind == "B":
        return 4, (1, 3)
    return 2 * l - 2, tuple(sorted(list(range(1, 2 * l - 2, 2)) + [l - 1]))


def coxeter_data(rs: RootSystem) -> tuple[int, tuple]:
    """(h, Weyl exponents)."""
    return rs.meta.coxeter_number, rs.meta.exponents


def heights(rs: RootSystem) -> dict:
    return dict(zip(rs.roots, rs.meta.heights))


def root_order_by_height(rs: RootSystem) -> list[tuple]:
    """Positive roots by non-increasing height; ties go to the lexicographically
    larger coefficient vector first."""
    hs = rs.meta.heights
    idx = sorted(range(len(rs.roots)), key=lambda i: (-hs[i], tuple(-c for c in rs.roots[i])))
    return [rs.roots[i] for i in idx]
