"""Rank-2 bundles on the projective plane from D_0 of a line arrangement.

For a rank-3 central arrangement with pd D_0 <= 1 the sheafified resolution

    0 -> (+) O(-b_j) --M--> (+) O(-a_i) -> E -> 0

gives Chern classes by power series division and, restricted to a line,
the splitting type through the long exact cohomology sequence on P^1.
"""
from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .arrangement import Arrangement, Hyperplane
from .groebner import BettiTable, FreeResolution, hilbert_from_betti
from .groebner.linalg import nullspace, rank
from .logder import derivation_module
from .scalar_poly import QQ, Field, Polynomial


@dataclass(frozen=True)
class ChernClasses:
    c1: int
    c2: int
    twist: int = 0

    def twisted(self, t: int) -> "ChernClasses":
        return ChernClasses(self.c1 + 2 * t, self.c2 + t * self.c1 + t * t, self.twist + t)


def chern_from_betti(b: BettiTable, twist: int = 0) -> ChernClasses:
    """c(E) = prod(1 - a h) / prod(1 - b h) truncated at h^2, then twisted."""
    if b.pd > 1:
        raise ValueError("Chern classes are read off pd <= 1 tables")
    a, s = b.degrees(0), b.degrees(1)
    if len(a) - len(s) != 2:
        raise ValueError(f"module has rank {len(a) - len(s)}, expected 2")
    e1 = sum(a)
    e2 = (e1 * e1 - sum(x * x for x in a)) // 2
    p1 = sum(s)
    h2 = (p1 * p1 + sum(x * x for x in s)) // 2
    c1 = -e1 + p1
    c2 = e2 - e1 * p1 + h2
    return ChernClasses(c1, c2).twisted(twist)


def normalizing_twist(c1: int) -> int:
    """The t with c1 + 2t = 0 (c1 must be even)."""
    if c1 % 2:
        raise ValueError("c1 is odd; no twist makes it vanish")
    return -c1 // 2


def stability_check(b: BettiTable, nvars: int = 3) -> str:
    """Hoppe's criterion on F = E(t) with c1(F) = 0, using h^0(E(d)) = dim (D_0)_d.

    Returns "stable", "semistable-not-stable", "unstable" or "undetermined".
    """
    c1 = chern_from_betti(b).c1
    if c1 % 2:
        return "undetermined"
    t = normalizing_twist(c1)
    hf = hilbert_from_betti(b, nvars, t - 1, t)
    if hf[t] == 0:
        return "stable"
    if hf[t - 1] == 0:
        return "semistable-not-stable"
    return "unstable"


# lines ----------------------------------------------------------------------------

def _int_vec(v: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for c in v:
        den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
    w = [int(Fraction(c) * den) for c in v]
    g = 0
    for c in w:
        g = gcd(g, c)
    return tuple(c // g for c in w) if g else tuple(w)


@dataclass(frozen=True)
class ProjLine:
    """A line {a x + b y + c z = 0} in P^2 with a fixed parametrization (s : t) -> s p + t q."""
    hyperplane: Hyperplane
    p: tuple
    q: tuple

    @classmethod
    def of(cls, coeffs: Sequence) -> "ProjLine":
        H = Hyperplane(tuple(coeffs))
        basis = nullspace([list(H.coeffs)], QQ, ncols=3)
        p, q = (_int_vec(v) for v in basis)
        return cls(H, p, q)

    @property
    def coeffs(self) -> tuple:
        return self.hyperplane.coeffs

    def images(self, fld: Field) -> list[Polynomial]:
        """x_i as linear forms in (s, t)."""
        return [Polynomial.linear([fld(self.p[i]), fld(self.q[i])], 0, fld) for i in range(3)]

    def to_json(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs]}

    def to_str(self) -> str:
        return self.hyperplane.to_str(["x", "y", "z"])


def _presentation_matrix(res: FreeResolution) -> tuple[list[int], list[int], list[list[Polynomial]]]:
    """Generator degrees a, syzygy degrees b and M with M[i][j] of degree b_j - a_i."""
    if res.pd > 1:
        raise ValueError("restriction to lines needs pd <= 1")
    gens = res.maps[0]
    a = [g.degree() for g in gens]
    syz = res.maps[1] if len(res.maps) > 1 else []
    b = [s.degree() for s in syz]
    M = [[s.coords[i] for s in syz] for i in range(len(gens))]
    return a, b, M


def restrict_to_line(res: FreeResolution, line: ProjLine) -> tuple[list[int], list[int], list[list[Polynomial]]]:
    a, b, M = _presentation_matrix(res)
    imgs = line.images(res.field)
    return a, b, [[f.substitute(imgs) for f in row] for row in M]


def _h0(e: int) -> int:
    return max(e + 1, 0)


def _h1_basis(e: int) -> list[tuple[int, int]]:
    """Cech basis s^-i t^-j (i, j >= 1, i + j = -e) of H^1(O(e)) on P^1."""
    return [(i, -e - i) for i in range(1, -e)]


def _h0_of_restriction(a, b, Mr, d: int, fld: Field) -> int:
    """h^0(E|_L(d)) = h^0(A(d)) - h^0(B(d)) + dim ker(H^1(B(d)) -> H^1(A(d)))."""
    h0 = sum(_h0(d - x) for x in a) - sum(_h0(d - x) for x in b)
    src = [(j, mono) for j, x in enumerate(b) for mono in _h1_basis(d - x)]
    if not src:
        return h0
    tgt = {(i, mono): n for n, (i, mono) in enumerate(
        (i, mono) for i, x in enumerate(a) for mono in _h1_basis(d - x))}
    cols = []
    for j, (si, ti) in src:
        col = [0] * len(tgt)
        for i in range(len(a)):
            for (ps, pt), c in Mr[i][j].terms.items():
                key = (i, (si - ps, ti - pt))
                if key in tgt:
                    col[tgt[key]] += c
        cols.append(col)
    r = rank(cols, fld) if tgt else 0
    return h0 + len(src) - r


@dataclass
class SplittingReport:
    line: ProjLine
    splitting: tuple          # (e1 <= e2) for E
    twist: int                # F = E(twist)
    seed: int | None = None

    @property
    def f_splitting(self) -> tuple:
        return (self.splitting[0] + self.twist, self.splitting[1] + self.twist)

    @property
    def order(self) -> int:
        e1, e2 = self.f_splitting
        return (e2 - e1) // 2

    def to_json(self) -> dict:
        return {"line": self.line.to_json(), "splitting": list(self.f_splitting),
                "order": self.order, "normalization": "F",
                "splitting_E": list(self.splitting), "twist": self.twist}


def splitting_type(res: FreeResolution, line: ProjLine) -> SplittingReport:
    a, b, Mr = restrict_to_line(res, line)
    fld = res.field
    c1 = -sum(a) + sum(b)
    d = -(c1 // 2)          # ceil(-c1 / 2): some section exists here since e2 >= c1 / 2
    if _h0_of_restriction(a, b, Mr, d, fld) == 0:
        raise ArithmeticError("no section at the balanced degree; the restriction is not exact")
    while _h0_of_restriction(a, b, Mr, d - 1, fld) > 0:
        d -= 1
    e2 = -d
    e1 = c1 - e2
    twist = c1 // -2 if c1 % 2 == 0 else 0
    return SplittingReport(line, (e1, e2), twist)


def predicted_splitting(size: int, t: int, member: bool) -> tuple | None:
    """Splitting of E on a line from hyperplane counts alone.

    member=True: the line is in A and t = |A^H|, needs 2t >= |A|.
    member=False: the line is not in A and t = |A cap L|, needs 2t <= |A| + 2.
    Either way E|_L = O(t - |A|) + O(1 - t).
    """
    if member and 2 * t < size:
        return None
    if not member and 2 * t > size + 2:
        return None
    return tuple(sorted((t - size, 1 - t)))


def _random_forms(seed: int, bound: int = 9):
    rng = random.Random(seed)
    while True:
        v = tuple(rng.randint(-bound, bound) for _ in range(3))
        if any(v):
            yield Hyperplane(v)


def random_lines(n: int, seed: int, exclude: Iterable[Hyperplane] = ()) -> list[ProjLine]:
    """n distinct seeded lines with small integer coefficients, avoiding ``exclude``."""
    seen, out = set(exclude), []
    for H in _random_forms(seed):
        if len(out) == n:
            break
        if H not in seen:
            seen.add(H)
            out.append(ProjLine.of(H.coeffs))
    return out


@dataclass
class JumpingScan:
    reports: list
    max_order: int
    seed: int
    violations: list

    def lines_of_order(self, b: int) -> list[ProjLine]:
        return [r.line for r in self.reports if r.order == b]

    @property
    def observed_max(self) -> int:
        return max((r.order for r in self.reports), default=0)

    def to_json(self) -> dict:
        return {"seed": self.seed, "max_order": self.max_order,
                "observed_max": self.observed_max,
                "violations": [r.to_json() for r in self.violations],
                "lines": [r.to_json() for r in self.reports]}


def candidate_lines(A: Arrangement, extra: Iterable = (), n_random: int = 50, seed: int = 0) -> list[ProjLine]:
    """Arrangement lines, then ``extra`` forms, then seeded random lines."""
    out, seen = [], set()
    for v in [h.coeffs for h in A.hyperplanes] + [tuple(getattr(e, "coeffs", e)) for e in extra]:
        H = Hyperplane(tuple(v))
        if H not in seen:
            seen.add(H)
            out.append(ProjLine.of(H.coeffs))
    return out + random_lines(n_random, seed, seen)


def jumping_scan(res: FreeResolution, candidates: Sequence[ProjLine], max_order: int | None = None,
                 seed: int = 0, workers: int = 1) -> JumpingScan:
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            reports = list(pool.map(lambda L: splitting_type(res, L), candidates))
    else:
        reports = [splitting_type(res, L) for L in candidates]
    for r in reports:
        r.seed = seed
    bound = max_order if max_order is not None else max((r.order for r in reports), default=0)
    bad = [r for r in reports if r.order > bound]
    return JumpingScan(reports, bound, seed, bad)


def d0_resolution(A: Arrangement, field: Field = QQ) -> FreeResolution:
    if A.dim != 3:
        raise ValueError("sheaf invariants are implemented on the projective plane")
    return derivation_module(A, field).resolution_d0()
