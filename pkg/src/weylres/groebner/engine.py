"""Buchberger's algorithm for graded submodules of free modules.

Internal representation: a term is an integer key ``pos_code << PS | packed``
where ``packed`` stores the exponent vector in fixed-width bit fields.
Multiplying a term by a monomial is integer addition, and divisibility is a
single subtraction against guard bits.  Elements are dicts key -> int
coefficient; over Q the coefficients are kept integral (fraction free, content
removed), over F_p they are reduced residues and basis elements are monic.

The order is position over term on homogeneous elements: within one shifted
degree position 0 is largest, then the monomial order decides.  For grevlex
the leading term is the numerically smallest key; for grlex it is the largest
(``sign`` flips the heap).
"""
from __future__ import annotations

import heapq
from math import gcd
from typing import Iterable, Sequence

BITS = 12
MAX_EXP = (1 << (BITS - 1)) - 1


class ResourceCap(RuntimeError):
    """Raised when a computation exceeds its step budget."""


_STEP_BUDGET: int | None = None


def set_step_budget(n: int | None) -> None:
    """Default step cap for engines created without an explicit ``max_steps``."""
    global _STEP_BUDGET
    _STEP_BUDGET = n


class Ctx:
    """Packing context: variables, positions with degree shifts, order, field."""

    def __init__(self, nvars: int, shifts: Sequence[int], p: int | None = None,
                 order: str = "grevlex", perm: Sequence[int] | None = None):
        self.n = nvars
        self.shifts = list(shifts)
        self.npos = len(self.shifts)
        self.p = p
        self.order = order
        w = BITS
        perm = list(range(nvars)) if perm is None else list(perm)
        if order == "grevlex":
            # perm[-1] (smallest variable) sits in the top field
            self.var_shift = [0] * nvars
            for j, v in enumerate(perm):
                self.var_shift[v] = w * j
            self.sign = 1
        elif order == "grlex":
            self.var_shift = [0] * nvars
            for j, v in enumerate(perm):
                self.var_shift[v] = w * (nvars - 1 - j)
            self.sign = -1
        else:
            raise ValueError(order)
        self.ps = w * nvars
        self.mono_mask = (1 << self.ps) - 1
        self.guard = 0
        for i in range(nvars):
            self.guard |= 1 << (w * i + w - 1)
        self.field_mask = (1 << w) - 1

    # positions -------------------------------------------------------
    def pos_code(self, pos: int) -> int:
        return pos if self.sign == 1 else self.npos - 1 - pos

    def pos_of(self, key: int) -> int:
        c = key >> self.ps
        return c if self.sign == 1 else self.npos - 1 - c

    # monomials -------------------------------------------------------
    def pack(self, exps: Sequence[int]) -> int:
        m = 0
        for v, e in enumerate(exps):
            if e:
                if e > MAX_EXP:
                    raise OverflowError("exponent too large for packed monomials")
                m |= e << self.var_shift[v]
        return m

    def unpack(self, m: int) -> tuple:
        fm = self.field_mask
        return tuple((m >> s) & fm for s in self.var_shift)

    def key(self, pos: int, exps: Sequence[int]) -> int:
        return (self.pos_code(pos) << self.ps) | self.pack(exps)

    def mono_degree(self, m: int) -> int:
        fm = self.field_mask
        d = 0
        w = BITS
        while m:
            d += m & fm
            m >>= w
        return d

    def key_degree(self, key: int) -> int:
        return self.mono_degree(key & self.mono_mask) + self.shifts[self.pos_of(key)]

    def divides(self, a: int, b: int) -> bool:
        g = self.guard
        return ((b | g) - a) & g == g

    def lcm(self, a: int, b: int) -> int:
        fm = self.field_mask
        out = 0
        s = 0
        while a or b:
            x, y = a & fm, b & fm
            out |= (x if x > y else y) << s
            a >>= BITS
            b >>= BITS
            s += BITS
        return out

    def coprime(self, a: int, b: int) -> bool:
        fm = self.field_mask
        while a and b:
            if (a & fm) and (b & fm):
                return False
            a >>= BITS
            b >>= BITS
        return True

    def leading_key(self, keys: Iterable[int]) -> int:
        return min(keys) if self.sign == 1 else max(keys)


class Elt:
    __slots__ = ("terms", "lm", "lc", "mono", "pos", "deg", "idx")

    def __init__(self, ctx: Ctx, d: dict):
        lm = ctx.leading_key(d)
        self.terms = list(d.items())
        self.lm = lm
        self.lc = d[lm]
        self.mono = lm & ctx.mono_mask
        self.pos = lm >> ctx.ps
        self.deg = ctx.key_degree(lm)
        self.idx = -1


def normalize(ctx: Ctx, d: dict) -> dict:
    """Make monic (F_p) or primitive with positive leading coefficient (Q)."""
    if not d:
        return d
    lm = ctx.leading_key(d)
    lc = d[lm]
    p = ctx.p
    if p is not None:
        if lc != 1:
            inv = pow(lc, -1, p)
            return {k: v * inv % p for k, v in d.items()}
        return d
    g = 0
    for v in d.values():
        g = gcd(g, v)
        if g == 1:
            break
    if lc < 0:
        g = -g
    if g != 1:
        return {k: v // g for k, v in d.items()}
    return d


class Buchberger:
    """Degree-by-degree Buchberger with Gebauer-Moeller pair updates.

    ``nmain`` positions are the module proper; positions beyond it (if any)
    only track representations.  Elements whose main part reduces to zero are
    collected in ``syzygies`` instead of entering the basis.
    """

    def __init__(self, ctx: Ctx, nmain: int | None = None, product_criterion: bool = False,
                 full_reduce: bool = True, max_steps: int | None = None):
        self.ctx = ctx
        self.nmain = ctx.npos if nmain is None else nmain
        # main positions occupy codes below/above this threshold
        if ctx.sign == 1:
            self.main_limit = self.nmain << ctx.ps          # key < main_limit
        else:
            self.main_limit = (ctx.npos - self.nmain) << ctx.ps  # key >= main_limit
        self.product_criterion = product_criterion
        self.full_reduce = full_reduce
        self.basis: list[Elt] = []
        self.by_pos: dict[int, list[Elt]] = {}
        self.pairs: dict[int, list[tuple[int, int, int]]] = {}
        self.syzygies: list[dict] = []
        self.steps = 0
        self.max_steps = max_steps if max_steps is not None else _STEP_BUDGET

    def is_main(self, key: int) -> bool:
        if self.ctx.sign == 1:
            return key < self.main_limit
        return key >= self.main_limit

    # reduction -------------------------------------------------------
    def _reducer(self, key: int) -> Elt | None:
        lst = self.by_pos.get(key >> self.ctx.ps)
        if not lst:
            return None
        m = key & self.ctx.mono_mask
        g = self.ctx.guard
        for e in lst:
            if ((m | g) - e.mono) & g == g:
                return e
        return None

    def reduce(self, h: dict, full: bool | None = None) -> dict:
        """Reduce h (consumed) by the basis; returns the remainder."""
        if full is None:
            full = self.full_reduce
        ctx = self.ctx
        p = ctx.p
        sign = ctx.sign
        heap = [sign * k for k in h]
        heapq.heapify(heap)
        out: dict = {}
        while heap:
            k = sign * heapq.heappop(heap)
            c = h.get(k)
            if c is None:
                continue
            if not self.is_main(k):
                break
            r = self._reducer(k)
            if r is None:
                if not full:
                    break
                out[k] = c
                del h[k]
                continue
            q = k - r.lm
            self.steps += 1
            if p is not None:
                f = c  # reducers are monic
                for rk, rc in r.terms:
                    nk = rk + q
                    old = h.get(nk)
                    if old is None:
                        h[nk] = (-f * rc) % p
                        heapq.heappush(heap, sign * nk)
                    else:
                        v = (old - f * rc) % p
                        if v:
                            h[nk] = v
                        else:
                            del h[nk]
            else:
                a = r.lc
                g = gcd(a, c)
                ma, mc = a // g, c // g
                if ma < 0:
                    ma, mc = -ma, -mc
                if ma != 1:
                    for kk in h:
                        h[kk] *= ma
                    for kk in out:
                        out[kk] *= ma
                for rk, rc in r.terms:
                    nk = rk + q
                    old = h.get(nk)
                    if old is None:
                        h[nk] = -mc * rc
                        heapq.heappush(heap, sign * nk)
                    else:
                        v = old - mc * rc
                        if v:
                            h[nk] = v
                        else:
                            del h[nk]
        if out:
            out.update(h)
            return out
        return h

    def _check_budget(self):
        if self.max_steps is not None and self.steps > self.max_steps:
            raise ResourceCap(f"Groebner step budget {self.max_steps} exceeded")

    # basis maintenance ----------------------------------------------
    def _add(self, d: dict) -> Elt:
        ctx = self.ctx
        e = Elt(ctx, normalize(ctx, d))
        idx = len(self.basis)
        e.idx = idx
        # Gebauer-Moeller update
        cand = [(ctx.lcm(e.mono, g.mono), g) for g in self.by_pos.get(e.pos, [])]
        kept: list = []
        while cand:
            lc, g = cand.pop()
            if self.product_criterion and ctx.coprime(e.mono, g.mono):
                kept.append((lc, g, True))
                continue
            if any(ctx.divides(l2, lc) for l2, _ in cand) or \
                    any(ctx.divides(l2, lc) for l2, _, _ in kept):
                continue
            kept.append((lc, g, False))
        em = e.mono
        for lst in self.pairs.values():
            survivors = []
            for (i1, i2, lc) in lst:
                if self.basis[i1].pos == e.pos and ctx.divides(em, lc):
                    b1, b2 = self.basis[i1], self.basis[i2]
                    if ctx.lcm(b1.mono, em) != lc and ctx.lcm(b2.mono, em) != lc:
                        continue
                survivors.append((i1, i2, lc))
            lst[:] = survivors
        self.basis.append(e)
        # shortest reducers first: fewer term operations per reduction step
        lst = self.by_pos.setdefault(e.pos, [])
        n_terms = len(e.terms)
        at = len(lst)
        while at and len(lst[at - 1].terms) > n_terms:
            at -= 1
        lst.insert(at, e)
        shift = ctx.shifts[ctx.pos_of(e.lm)]
        for lc, g, coprime in kept:
            if not coprime:
                deg = ctx.mono_degree(lc) + shift
                self.pairs.setdefault(deg, []).append((g.idx, idx, lc))
        return e

    def spoly(self, i1: int, i2: int, lc: int) -> dict:
        ctx = self.ctx
        g1, g2 = self.basis[i1], self.basis[i2]
        m1 = lc - g1.mono
        m2 = lc - g2.mono
        p = ctx.p
        out: dict = {}
        if p is not None:
            for k, c in g1.terms:
                out[k + m1] = c
            for k, c in g2.terms:
                nk = k + m2
                v = (out.get(nk, 0) - c) % p
                if v:
                    out[nk] = v
                else:
                    out.pop(nk, None)
        else:
            a, b = g1.lc, g2.lc
            g = gcd(a, b)
            a, b = a // g, b // g
            for k, c in g1.terms:
                out[k + m1] = b * c
            for k, c in g2.terms:
                nk = k + m2
                v = out.get(nk, 0) - a * c
                if v:
                    out[nk] = v
                else:
                    out.pop(nk, None)
        return out

    def run(self, inputs: Sequence[dict], stop_degree: int | None = None) -> list[int]:
        """Process inputs and pairs degree by degree.

        Returns the indices of inputs that were not reducible to zero by what
        came before them: these form a minimal generating set when every input
        is homogeneous.
        """
        ctx = self.ctx
        pending: dict[int, list[int]] = {}
        for i, d in enumerate(inputs):
            if d:
                pending.setdefault(ctx.key_degree(next(iter(d))), []).append(i)
        minimal = []
        while True:
            cands = [dg for dg, lst in self.pairs.items() if lst] + list(pending)
            if not cands:
                break
            deg = min(cands)
            if stop_degree is not None and deg > stop_degree:
                break
            batch = self.pairs.pop(deg, [])
            batch.sort(key=lambda t: (t[2], t[0], t[1]))
            while batch:
                i1, i2, lc = batch.pop(0)
                s = self.spoly(i1, i2, lc)
                r = self.reduce(s)
                self._check_budget()
                if r and self.is_main(ctx.leading_key(r)):
                    self._add(r)
                    more = self.pairs.pop(deg, [])
                    if more:
                        batch.extend(more)
                        batch.sort(key=lambda t: (t[2], t[0], t[1]))
                elif r:
                    self.syzygies.append(normalize(ctx, r))
            for i in pending.pop(deg, []):
                r = self.reduce(dict(inputs[i]))
                self._check_budget()
                if r and self.is_main(ctx.leading_key(r)):
                    self._add(r)
                    minimal.append(i)
                elif r:
                    self.syzygies.append(normalize(ctx, r))
        return minimal
