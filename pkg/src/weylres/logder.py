"""Logarithmic derivation modules D(A), D_0(A), Saito's criterion, exponents.

D(A) is assembled one hyperplane at a time.  Fix H_0 in A; every derivation
splits as f*theta_E plus one killing alpha_0, so D(A) = S theta_E + D_{H_0}(A)
with D_{H_0}(A) = {theta in D(A) : theta(alpha_0) = 0}.  Adding a hyperplane H
to the current arrangement cuts D_{H_0} down to the theta whose value on
alpha_H vanishes modulo alpha_H.  Writing theta = sum c_i g_i over the current
generators, that is the multiplier system sum c_i g_i(alpha_H) = h_H alpha_H,
solved as syzygies of the values modulo alpha_H, lifted, together with
alpha_H * g_i.  The result is minimalized by degreewise linear algebra.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb, gcd, lcm
from typing import Sequence

import flint

from .arrangement import Arrangement, Hyperplane, Multiarrangement, cone_variable_hyperplane
from .groebner import (BettiTable, FreeModuleElement, FreeResolution, GradedModulePresentation,
                       betti_table, kernel_of_map, minimal_free_resolution, minimalize, syzygies)
from .groebner.hilbert import monomials_of_degree
from .groebner.linalg import rank
from .groebner.resolve import minimal_subset
from .scalar_poly import QQ, DerivationVector, Field, Polynomial


# helpers ------------------------------------------------------------------

def _primitive(g: FreeModuleElement) -> FreeModuleElement:
    """Scale a rational vector to coprime integer coordinates (same submodule)."""
    if g.field.p is not None:
        return g
    den, num = 1, 0
    for c in g.coords:
        for v in c.terms.values():
            den = lcm(den, v.denominator)
            num = gcd(num, v.numerator)
    if not num:
        return g
    s = Fraction(den, num)
    return g if s == 1 else g * s


def _chart_images(H: Hyperplane, fld: Field) -> list[Polynomial]:
    """Variable images for the substitution x_p -> solution of alpha_H = 0."""
    n, p = H.dim, H.pivot
    imgs = [Polynomial.var(n, i, fld) for i in range(n)]
    imgs[p] = Polynomial.linear([fld(0) if i == p else fld(-H.coeffs[i]) for i in range(n)], 0, fld)
    return imgs


def _apply_form(g: FreeModuleElement, H: Hyperplane, fld: Field) -> Polynomial:
    n = H.dim
    out = Polynomial.zero(n, fld)
    for c, poly in zip(H.coeffs, g.coords):
        if c and not poly.is_zero():
            out = out + poly.scale(fld(c))
    return out


def _inverse(rows: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    inv = flint.fmpq_mat([[flint.fmpq(c.numerator, c.denominator) for c in r] for r in rows]).inv()
    n = len(rows)
    return [[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(n)] for i in range(n)]


def euler_split_hyperplane(A: Arrangement) -> Hyperplane:
    """H_0 used to split off theta_E: the cone hyperplane z = 0 when present."""
    z = cone_variable_hyperplane(A.dim)
    return z if z in A else A.hyperplanes[0]


def _complement_generators(A: Arrangement, fld: Field) -> list[FreeModuleElement]:
    """Minimal generators of D_{H_0}(A) (possibly empty rank)."""
    n = A.dim
    shifts = (0,) * n
    zero = Polynomial.zero(n, fld)
    if not A.hyperplanes:
        return [FreeModuleElement([Polynomial.constant(n, 1, fld) if i == j else zero
                                   for i in range(n)], shifts) for j in range(n)]
    H0 = euler_split_hyperplane(A)
    chosen: list[Hyperplane] = [H0]
    for H in A.hyperplanes:
        if len(chosen) == n:
            break
        if H != H0 and rank([list(h.coeffs) for h in chosen] + [list(H.coeffs)], QQ) > len(chosen):
            chosen.append(H)
    real = len(chosen)
    basis = [list(h.coeffs) for h in chosen]
    for i in range(n):  # complete with coordinate forms that are not hyperplanes of A
        if len(basis) == n:
            break
        e = [Fraction(int(i == j)) for j in range(n)]
        if rank(basis + [e], QQ) > len(basis):
            basis.append(e)
    Ci = _inverse(basis)
    gens = []
    for j in range(1, n):
        coords = [Polynomial.constant(n, fld(Ci[i][j]), fld) for i in range(n)]
        g = FreeModuleElement(coords, shifts)
        if j < real:
            g = g * chosen[j].form(fld)
        gens.append(_primitive(g))
    for H in A.hyperplanes:
        if H in chosen:
            continue
        gens = _add_hyperplane(gens, H, fld)
    return gens


def _add_hyperplane(gens: list[FreeModuleElement], H: Hyperplane, fld: Field) -> list[FreeModuleElement]:
    n = H.dim
    imgs = _chart_images(H, fld)
    alpha = H.form(fld)
    vals = [_apply_form(g, H, fld).substitute(imgs) for g in gens]
    live = [i for i, v in enumerate(vals) if not v.is_zero()]
    if not live:
        return gens
    new = [g for g, v in zip(gens, vals) if v.is_zero()]
    for s in syzygies([FreeModuleElement([vals[i]], (0,)) for i in live]):
        acc = None
        for c, i in zip(s.coords, live):
            if not c.is_zero():
                t = gens[i] * c
                acc = t if acc is None else acc + t
        if acc is not None and not acc.is_zero():
            new.append(_primitive(acc))
    new += [gens[i] * alpha for i in live]
    keep = minimal_subset(new)
    out = [new[i] for i in keep]
    out.sort(key=lambda g: g.degree())
    return out


# the module ----------------------------------------------------------------

class DerivationModule:
    """D(A) with its Euler splitting and cached resolution."""

    def __init__(self, A: Arrangement, fld: Field, complement: list[FreeModuleElement]):
        self.arrangement = A
        self.field = fld
        self.nvars = A.dim
        self._complement = complement
        self._res0: FreeResolution | None = None
        self._lock = threading.Lock()

    @property
    def euler(self) -> FreeModuleElement:
        n = self.nvars
        return FreeModuleElement([Polynomial.var(n, i, self.field) for i in range(n)], (0,) * n)

    @property
    def generators(self) -> list[DerivationVector]:
        """Minimal generators of D(A), theta_E first."""
        return [DerivationVector(g.coords) for g in self.presentation.generators]

    @property
    def presentation(self) -> GradedModulePresentation:
        gens = ([self.euler] if self.arrangement.hyperplanes else []) + list(self._complement)
        return GradedModulePresentation(self.nvars, (0,) * self.nvars, gens, self.field, minimal=True)

    def degrees(self) -> list[int]:
        return sorted(g.degree() for g in self.presentation.generators)

    def d0(self) -> GradedModulePresentation:
        return split_euler(self)

    def resolution_d0(self, method: str = "auto") -> FreeResolution:
        with self._lock:
            if self._res0 is None or method != "auto":
                res = minimal_free_resolution(self.d0(), method=method)
                if method != "auto":
                    return res
                self._res0 = res
            return self._res0

    def betti(self, module: str = "d") -> BettiTable:
        b = betti_table(self.resolution_d0())
        if module == "d0":
            return b
        if module != "d":
            raise ValueError("module must be 'd' or 'd0'")
        data = dict(b.data)
        data[(0, 1)] = data.get((0, 1), 0) + 1
        return BettiTable(data)

    @property
    def pd(self) -> int:
        return self.betti("d0").pd


_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def derivation_module(A: Arrangement, field: Field = QQ) -> DerivationModule:
    """Minimal generators of D(A) (cached per arrangement and field)."""
    if not A.central:
        raise ValueError("D(A) is defined here for central arrangements")
    key = (A, field)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    D = DerivationModule(A, field, _complement_generators(A, field))
    with _CACHE_LOCK:
        return _CACHE.setdefault(key, D)


def clear_cache() -> None:
    with _CACHE_LOCK:
        _CACHE.clear()


def log_derivative(theta: Sequence[Polynomial], A: Arrangement, fld: Field) -> Polynomial:
    """theta(Q)/Q as sum over H of theta(alpha_H)/alpha_H; raises if theta is not in D(A)."""
    n = A.dim
    total = Polynomial.zero(n, fld)
    g = FreeModuleElement(list(theta), (0,) * n)
    for H in A.hyperplanes:
        v = _apply_form(g, H, fld)
        q = v.exact_divide(H.form(fld))
        if q is None:
            raise ArithmeticError(f"derivation does not preserve {H}")
        total = total + q
    return total


def split_euler(D: DerivationModule) -> GradedModulePresentation:
    """D_0(A) = {theta : theta(Q) = 0}, generated by theta - theta(Q)/(|A|Q) theta_E.

    Applied to the non-Euler minimal generators of D(A) this is an isomorphism
    onto D_0, so the images are again minimal.
    """
    A, fld = D.arrangement, D.field
    if not A.hyperplanes:
        raise ValueError("D_0 needs a nonempty arrangement")
    n = D.nvars
    E = [Polynomial.var(n, i, fld) for i in range(n)]
    out = []
    for g in D._complement:
        c = log_derivative(g.coords, A, fld)
        c = c.scale(fld(Fraction(1, len(A))))
        v = FreeModuleElement([gi - c * e for gi, e in zip(g.coords, E)], g.shifts)
        if not v.is_zero():
            out.append(_primitive(v))
    return GradedModulePresentation(n, (0,) * n, out, fld, minimal=True)


# oracles -------------------------------------------------------------------

def _integer_form(H: Hyperplane) -> list[int]:
    den = 1
    for c in H.coeffs:
        den = lcm(den, Fraction(c).denominator)
    v = [int(Fraction(c) * den) for c in H.coeffs]
    g = 0
    for c in v:
        g = gcd(g, c)
    return [c // g for c in v]


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _kernel_rows(H: Hyperplane, monos: tuple, d: int, modulus: int | None) -> list[list[int]]:
    """Integer rows of theta(alpha_H) = 0 on {alpha_H = 0}, scaled by c_p^d to clear denominators.

    On the hyperplane x_p = L / c_p with L = -sum_{i != p} c_i x_i, so c_p^d x^m
    becomes x^{m - m_p e_p} L^{m_p} c_p^{d - m_p}, an integer polynomial without x_p.
    """
    v = _integer_form(H)
    n = len(v)
    p = next(i for i, c in enumerate(v) if c and (modulus is None or c % modulus))
    cp = v[p]
    L = {tuple(int(j == i) for j in range(n)): -v[i] for i in range(n) if i != p and v[i]}
    pows = [{(0,) * n: 1}]
    for _ in range(d):
        pows.append(_poly_mul(pows[-1], L))
    targets = {m: i for i, m in enumerate(m for m in monos if m[p] == 0)}
    k = len(monos)
    rows = [[0] * (n * k) for _ in targets]
    for col, m in enumerate(monos):
        e = m[p]
        rest = m[:p] + (0,) + m[p + 1:]
        scale = cp ** (d - e)
        for t, c in pows[e].items():
            r = targets[tuple(a + b for a, b in zip(rest, t))]
            for i, ci in enumerate(v):
                if ci:
                    rows[r][i * k + col] += ci * c * scale
    return [r for r in rows if any(r)]


def kernel_dimension(A: Arrangement, d: int, field: Field = QQ) -> int:
    """dim_K D(A)_d from the linear system alpha_H | theta(alpha_H), no Gröbner bases.

    With a coordinate hyperplane x_q = 0 in A, D(A)_d = S_{d-1} theta_E + {theta_q = 0},
    which removes the theta_q unknowns.
    """
    n = A.dim
    if d < 0:
        return 0
    monos = monomials_of_degree(n, d)
    q = next((h.pivot for h in A.hyperplanes
              if sum(1 for c in h.coeffs if c) == 1), None)
    k = len(monos)
    rows = []
    for H in A.hyperplanes:
        rows.extend(_kernel_rows(H, monos, d, field.p))
    if q is not None:
        rows = [r[:q * k] + r[(q + 1) * k:] for r in rows]
        rows = [r for r in rows if any(r)]
    unknowns = (n - (q is not None)) * k
    euler = comb(d - 1 + n - 1, n - 1) if q is not None and d >= 1 else 0
    if not rows:
        return unknowns + euler
    if field.p is None:
        r = flint.fmpz_mat(rows).rank()
    else:
        r = flint.nmod_mat([[x % field.p for x in row] for row in rows], field.p).rank()
    return unknowns - r + euler


def d_hilbert_from_resolution(D: DerivationModule, d_min: int, d_max: int) -> dict[int, int]:
    from .groebner import hilbert_from_betti
    return hilbert_from_betti(D.betti("d"), D.nvars, d_min, d_max)


def derivation_module_by_kernel(A: Arrangement, field: Field = QQ) -> GradedModulePresentation:
    """D(A) as one kernel: (theta, h) with theta(alpha_H) - h_H alpha_H = 0 for all H.

    Gröbner-based and slower; used to cross-check the incremental construction.
    """
    n, N = A.dim, len(A)
    zero = Polynomial.zero(n, field)
    cols = []
    for i in range(n):
        cols.append(FreeModuleElement([Polynomial.constant(n, field(H.coeffs[i]), field)
                                       if H.coeffs[i] else zero for H in A.hyperplanes], (0,) * N))
    for k, H in enumerate(A.hyperplanes):
        cols.append(FreeModuleElement([-H.form(field) if j == k else zero for j in range(N)],
                                      (0,) * N))
    ker = kernel_of_map(cols, source_shifts=(0,) * n + (1,) * N)
    proj = [FreeModuleElement(g.coords[:n], (0,) * n) for g in ker.generators]
    proj = [g for g in proj if not g.is_zero()]
    return minimalize(GradedModulePresentation(n, (0,) * n, proj, field))


# Saito, exponents, SPOG ------------------------------------------------------

@dataclass
class SaitoCertificate:
    ok: bool
    scalar: object = None
    reason: str = ""


def _det(mat: list[list[Polynomial]]) -> Polynomial:
    n = len(mat)
    if n == 1:
        return mat[0][0]
    total = None
    for j in range(n):
        if mat[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        t = mat[0][j] * _det(minor)
        if j % 2:
            t = -t
        total = t if total is None else total + t
    return total if total is not None else mat[0][0] * 0


def saito_check(A: Arrangement, thetas: Sequence[DerivationVector], field: Field = QQ) -> SaitoCertificate:
    """det(theta_i(x_j)) = c * Q(A) with c != 0, for thetas in D(A)."""
    n = A.dim
    if len(thetas) != n:
        return SaitoCertificate(False, reason=f"need {n} derivations, got {len(thetas)}")
    for t in thetas:
        log_derivative(t.coords, A, field)  # raises when t is not in D(A)
    det = _det([list(t.coords) for t in thetas])
    Q = A.defining_polynomial(field)
    if det.is_zero():
        return SaitoCertificate(False, reason="determinant vanishes")
    q = det.exact_divide(Q)
    if q is None or q.degree() != 0:
        return SaitoCertificate(False, reason="determinant is not a scalar multiple of Q")
    return SaitoCertificate(True, q.constant_term())


@dataclass
class FreenessReport:
    free: bool
    exponents: tuple | None
    pd: int
    betti: BettiTable


def freeness(A: Arrangement, field: Field = QQ) -> FreenessReport:
    D = derivation_module(A, field)
    degs = D.degrees()
    if len(degs) == A.dim:  # n generators of a rank-n module are a basis
        return FreenessReport(True, tuple(degs), 0, BettiTable.from_degrees(degs))
    b = D.betti("d")
    return FreenessReport(False, None, b.pd, b)


def exponents_if_free(A: Arrangement, field: Field = QQ) -> tuple | None:
    return freeness(A, field).exponents


def projective_dimension(A: Arrangement, field: Field = QQ) -> int:
    return freeness(A, field).pd


@dataclass
class SpogCertificate:
    exponents: tuple
    level: int
    relation: FreeModuleElement = dc_field(repr=False)


def is_spog(A: Arrangement, field: Field = QQ) -> SpogCertificate | None:
    """Plus-one generated with a single relation; the extra generator degree is the level."""
    D = derivation_module(A, field)
    b = D.betti("d")
    syz = b.degrees(1)
    if b.pd != 1 or len(syz) != 1:
        return None
    gens = b.degrees(0)
    level = syz[0] - 1
    if len(gens) != A.dim + 1 or level not in gens:
        return None
    exps = list(gens)
    exps.remove(level)
    rel = D.resolution_d0().maps[1][0]
    return SpogCertificate(tuple(sorted(exps)), level, rel)


# multiarrangements in two variables ---------------------------------------------

def _multi_kernel(M: Multiarrangement, d: int, fld: Field) -> list[list]:
    """Basis of D(A, m)_d as coefficient vectors over (x^d, ..., y^d) for each coordinate."""
    from .groebner.linalg import nullspace
    monos = monomials_of_degree(2, d)
    rows = []
    for H, m in M.items():
        a, b = H.coeffs
        # coordinates u = alpha_H, v = the other variable
        if a != 0:
            imgs = [Polynomial.linear([fld(1 / a), fld(-b / a)], 0, fld), Polynomial.var(2, 1, fld)]
        else:
            imgs = [Polynomial.var(2, 1, fld), Polynomial.var(2, 0, fld)]
        subs = [Polynomial(2, {mm: fld(1)}, fld).substitute(imgs) for mm in monos]
        for i in range(min(m, d + 1)):
            target = (i, d - i)
            row = []
            for coord, c in ((0, a), (1, b)):
                for s in subs:
                    row.append(fld(c) * s.coefficient(target) if c else 0)
            rows.append(row)
    return nullspace(rows, fld, ncols=2 * len(monos))


def multi_exponents(M: Multiarrangement, field: Field = QQ) -> tuple[int, int]:
    """Exponents of a multiarrangement in two variables (always free there)."""
    if M.dim != 2:
        raise ValueError("multi_exponents needs a multiarrangement in two variables")
    total = M.total
    d1 = next(d for d in range(total + 1) if _multi_kernel(M, d, field))
    d2 = total - d1
    if d2 < d1:
        raise ArithmeticError("degree bookkeeping failed")
    thetas = _multi_basis(M, d1, d2, field)
    det = _det([list(t) for t in thetas])
    target = Polynomial.constant(2, 1, field)
    for H, m in M.items():
        target = target * H.form(field) ** m
    q = det.exact_divide(target)
    if q is None or q.is_zero() or q.degree() != 0:
        raise ArithmeticError("Saito certificate failed for the multiarrangement")
    return d1, d2


def _multi_basis(M: Multiarrangement, d1: int, d2: int, fld: Field):
    def vec_to_theta(v, d):
        monos = monomials_of_degree(2, d)
        k = len(monos)
        p = Polynomial(2, {m: c for m, c in zip(monos, v[:k]) if c}, fld)
        q = Polynomial(2, {m: c for m, c in zip(monos, v[k:]) if c}, fld)
        return [p, q]
    k1 = _multi_kernel(M, d1, fld)
    t1 = vec_to_theta(k1[0], d1)
    for v in (k1[1:] if d1 == d2 else _multi_kernel(M, d2, fld)):
        t2 = vec_to_theta(v, d2)
        if not _det([t1, t2]).is_zero():
            return [t1, t2]
    raise ArithmeticError("no second basis element found")
