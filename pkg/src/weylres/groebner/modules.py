"""Graded free modules, presentations, syzygies and minimal resolutions."""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import lcm
from typing import Sequence

from ..scalar_poly import QQ, Field, Polynomial, MonomialOrder, GREVLEX
from .engine import Buchberger, Ctx, normalize


class FreeModuleElement:
    """A vector of polynomials in the free module  ⊕ S[-shifts[i]]."""

    __slots__ = ("coords", "shifts")

    def __init__(self, coords: Sequence[Polynomial], shifts: Sequence[int] | None = None):
        self.coords = tuple(coords)
        self.shifts = tuple(shifts) if shifts is not None else (0,) * len(self.coords)
        if len(self.shifts) != len(self.coords):
            raise ValueError("one shift per coordinate")

    @property
    def nvars(self) -> int:
        return self.coords[0].nvars

    @property
    def field(self) -> Field:
        return self.coords[0].field

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def degree(self) -> int | None:
        """Shifted degree (deg f_i + a_i); None for zero or inhomogeneous vectors."""
        degs = set()
        for c, a in zip(self.coords, self.shifts):
            if c:
                d = c.homogeneous_degree()
                if d is None:
                    return None
                degs.add(d + a)
        return degs.pop() if len(degs) == 1 else None

    def is_homogeneous(self) -> bool:
        return self.is_zero() or self.degree() is not None

    def __add__(self, other):
        return FreeModuleElement([a + b for a, b in zip(self.coords, other.coords)], self.shifts)

    def __sub__(self, other):
        return FreeModuleElement([a - b for a, b in zip(self.coords, other.coords)], self.shifts)

    def __mul__(self, f):
        return FreeModuleElement([c * f for c in self.coords], self.shifts)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, FreeModuleElement) and self.coords == other.coords \
            and self.shifts == other.shifts

    def __hash__(self):
        return hash((self.coords, self.shifts))

    def __repr__(self):
        return "(" + ", ".join(c.to_str() for c in self.coords) + ")"


@dataclass
class GradedModulePresentation:
    """Submodule of ⊕ S[-shifts] given by generators (homogeneous)."""
    nvars: int
    shifts: tuple
    generators: list
    field: Field = QQ
    minimal: bool = False

    def degrees(self) -> list[int]:
        return [g.degree() for g in self.generators]

    @property
    def rank_ambient(self) -> int:
        return len(self.shifts)


@dataclass
class FreeResolution:
    """F_0 <- F_1 <- ... ; ``modules[i]`` lists the degrees of F_i's basis and
    ``maps[i]`` holds the images of F_{i+1}'s basis as elements of F_i.
    ``maps[0]`` maps F_0 onto the module: the generators themselves."""
    nvars: int
    field: Field
    modules: list
    maps: list
    truncated: bool = False
    minimal: bool = True

    @property
    def length(self) -> int:
        return len([m for m in self.modules if m]) - 1

    @property
    def pd(self) -> int:
        return max((i for i, m in enumerate(self.modules) if m), default=0)


class BettiTable:
    def __init__(self, data: dict | None = None):
        self.data = {k: v for k, v in (data or {}).items() if v}

    def __getitem__(self, key):
        return self.data.get(key, 0)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.data == other.data

    def __repr__(self):
        return f"BettiTable({dict(sorted(self.data.items()))})"

    def total(self, i: int) -> int:
        return sum(v for (j, _), v in self.data.items() if j == i)

    def degrees(self, i: int) -> list[int]:
        out = []
        for (j, d), v in sorted(self.data.items()):
            if j == i:
                out += [d] * v
        return out

    @property
    def pd(self) -> int:
        return max((i for i, _ in self.data), default=0)

    def shifted(self, s: int) -> "BettiTable":
        """Table of M[s]: internal degrees decrease by s."""
        return BettiTable({(i, d - s): v for (i, d), v in self.data.items()})

    def to_json(self) -> dict:
        return {"betti": [{"i": i, "degree": d, "count": v} for (i, d), v in sorted(self.data.items())]}

    @classmethod
    def from_json(cls, obj: dict) -> "BettiTable":
        return cls({(e["i"], e["degree"]): e["count"] for e in obj["betti"]})

    @classmethod
    def from_degrees(cls, *stages: Sequence[int]) -> "BettiTable":
        data: dict = {}
        for i, degs in enumerate(stages):
            for d in degs:
                data[(i, d)] = data.get((i, d), 0) + 1
        return cls(data)

    def to_text(self) -> str:
        if not self.data:
            return "zero module"
        degs = sorted({d for _, d in self.data})
        imax = max(i for i, _ in self.data)
        head = "degree | " + " ".join(f"F{i:<4}" for i in range(imax + 1))
        lines = [head, "-" * len(head)]
        for d in degs:
            row = " ".join(f"{self[(i, d)] or '.':<5}" for i in range(imax + 1))
            lines.append(f"{d:>6} | {row}")
        return "\n".join(lines)


# conversion to and from the engine ------------------------------------

def _ctx_for(nvars: int, shifts: Sequence[int], fld: Field, order: MonomialOrder) -> Ctx:
    return Ctx(nvars, shifts, fld.p, order.tag, order.perm)


def _to_dict(ctx: Ctx, coords: Sequence[Polynomial], offset: int = 0) -> tuple[dict, int]:
    """Engine dict for a vector; returns (dict, scale) with dict = scale * vector."""
    if ctx.p is None:
        den = 1
        for c in coords:
            for v in c.terms.values():
                den = lcm(den, v.denominator)
        out = {}
        for i, c in enumerate(coords):
            for m, v in c.terms.items():
                out[ctx.key(i + offset, m)] = int(v * den)
        return out, den
    out = {}
    for i, c in enumerate(coords):
        for m, v in c.terms.items():
            out[ctx.key(i + offset, m)] = v
    return out, 1


def _from_dict(ctx: Ctx, d: dict, fld: Field, lo: int, hi: int) -> list[Polynomial]:
    per: list[dict] = [dict() for _ in range(hi - lo)]
    mm = ctx.mono_mask
    for k, v in d.items():
        pos = ctx.pos_of(k)
        if lo <= pos < hi:
            per[pos - lo][ctx.unpack(k & mm)] = Fraction(v) if fld.p is None else v
    return [Polynomial(ctx.n, t, fld, _trusted=True) for t in per]


def _check_homogeneous(gens: Sequence[FreeModuleElement]):
    for g in gens:
        if not g.is_homogeneous():
            raise ValueError(f"inhomogeneous generator {g}")


class GroebnerBasis:
    """A Gröbner basis of a submodule with a reduction interface."""

    def __init__(self, nvars: int, shifts: Sequence[int], fld: Field, order: MonomialOrder,
                 engine: Buchberger):
        self.nvars = nvars
        self.shifts = tuple(shifts)
        self.field = fld
        self.order = order
        self.engine = engine

    @property
    def elements(self) -> list[FreeModuleElement]:
        ctx = self.engine.ctx
        return [FreeModuleElement(_from_dict(ctx, dict(e.terms), self.field, 0, len(self.shifts)),
                                  self.shifts) for e in self.engine.basis]

    def __len__(self):
        return len(self.engine.basis)

    def reduce(self, v: FreeModuleElement) -> FreeModuleElement:
        """Normal form up to a nonzero scalar."""
        ctx = self.engine.ctx
        d, _ = _to_dict(ctx, v.coords)
        r = self.engine.reduce(d, full=True)
        return FreeModuleElement(_from_dict(ctx, r, self.field, 0, len(self.shifts)), self.shifts)

    def contains(self, v: FreeModuleElement) -> bool:
        ctx = self.engine.ctx
        d, _ = _to_dict(ctx, v.coords)
        return not self.engine.reduce(d, full=False)

    def leading_terms(self) -> list[tuple[int, tuple]]:
        ctx = self.engine.ctx
        return [(ctx.pos_of(e.lm), ctx.unpack(e.mono)) for e in self.engine.basis]


def buchberger_module(gens: Sequence[FreeModuleElement], order: MonomialOrder = GREVLEX,
                      shifts: Sequence[int] | None = None, nvars: int | None = None,
                      fld: Field | None = None, max_steps: int | None = None) -> GroebnerBasis:
    gens = [g for g in gens if not g.is_zero()]
    if not gens and (shifts is None or nvars is None):
        raise ValueError("empty input needs explicit shifts and nvars")
    shifts = tuple(shifts) if shifts is not None else gens[0].shifts
    nvars = nvars if nvars is not None else gens[0].nvars
    fld = fld if fld is not None else (gens[0].field if gens else QQ)
    _check_homogeneous(gens)
    ctx = _ctx_for(nvars, shifts, fld, order)
    eng = Buchberger(ctx, product_criterion=(len(shifts) == 1), max_steps=max_steps)
    eng.run([_to_dict(ctx, g.coords)[0] for g in gens])
    return GroebnerBasis(nvars, shifts, fld, order, eng)


def minimal_generator_indices(gens: Sequence[FreeModuleElement], order: MonomialOrder = GREVLEX,
                              max_steps: int | None = None, method: str = "linear") -> list[int]:
    """Indices of a minimal generating subset (inputs processed degree by degree).

    "linear" decides redundancy by degreewise spans; "groebner" runs a
    truncated Gröbner computation.  Both keep the earliest usable inputs.
    """
    live = [i for i, g in enumerate(gens) if not g.is_zero()]
    if not live:
        return []
    _check_homogeneous([gens[i] for i in live])
    if method == "linear":
        from .resolve import minimal_subset
        return minimal_subset(gens)
    if method != "groebner":
        raise ValueError(f"unknown method {method!r}")
    g0 = gens[live[0]]
    ctx = _ctx_for(g0.nvars, g0.shifts, g0.field, order)
    eng = Buchberger(ctx, product_criterion=(len(g0.shifts) == 1), max_steps=max_steps)
    dicts = [_to_dict(ctx, gens[i].coords)[0] for i in live]
    top = max(gens[i].degree() for i in live)
    chosen = eng.run(dicts, stop_degree=top)
    return sorted(live[i] for i in chosen)


def minimalize(pres: GradedModulePresentation, order: MonomialOrder = GREVLEX,
               max_steps: int | None = None, method: str = "linear") -> GradedModulePresentation:
    idx = minimal_generator_indices(pres.generators, order, max_steps, method)
    gens = [pres.generators[i] for i in idx]
    gens.sort(key=lambda g: g.degree())
    return GradedModulePresentation(pres.nvars, pres.shifts, gens, pres.field, minimal=True)


def syzygies(gens: Sequence[FreeModuleElement], order: MonomialOrder = GREVLEX,
             max_steps: int | None = None) -> list[FreeModuleElement]:
    """Generators of the syzygy module of ``gens`` inside ⊕ S[-deg g_i]."""
    gens = list(gens)
    if not gens:
        return []
    _check_homogeneous(gens)
    g0 = gens[0]
    n, fld = g0.nvars, g0.field
    degs = [g.degree() for g in gens]
    r = len(gens)
    m = len(g0.shifts)
    out_shifts = tuple(d if d is not None else 0 for d in degs)
    ctx = _ctx_for(n, list(g0.shifts) + list(out_shifts), fld, order)
    eng = Buchberger(ctx, nmain=m, max_steps=max_steps)
    inputs = []
    scales = []
    for i, g in enumerate(gens):
        d, s = _to_dict(ctx, g.coords)
        d[ctx.key(m + i, (0,) * n)] = s
        inputs.append(d)
        scales.append(s)
    eng.run(inputs)
    result = []
    for z in eng.syzygies:
        coords = _from_dict(ctx, z, fld, m, m + r)
        # tracking parts refer to scale_i * g_i; undo the scaling
        coords = [c * scales[i] if scales[i] != 1 else c for i, c in enumerate(coords)]
        v = FreeModuleElement(coords, out_shifts)
        if not v.is_zero():
            result.append(v)
    return result


def kernel_of_map(columns: Sequence[FreeModuleElement], order: MonomialOrder = GREVLEX,
                  source_shifts: Sequence[int] | None = None) -> GradedModulePresentation:
    """Kernel of the map F_1 -> F_0 sending basis vector i to columns[i]."""
    cols = list(columns)
    n, fld = cols[0].nvars, cols[0].field
    if source_shifts is None:
        source_shifts = tuple(c.degree() if not c.is_zero() else 0 for c in cols)
    else:
        source_shifts = tuple(source_shifts)
        for c, a in zip(cols, source_shifts):
            if not c.is_zero() and c.degree() != a:
                raise ValueError("matrix is not homogeneous for the given source shifts")
    live = [i for i, c in enumerate(cols) if not c.is_zero()]
    gens = []
    zero = Polynomial.zero(n, fld)
    one = Polynomial.constant(n, 1, fld)
    for i, c in enumerate(cols):
        if c.is_zero():
            gens.append(FreeModuleElement([one if j == i else zero for j in range(len(cols))],
                                          source_shifts))
    if live:
        for s in syzygies([cols[i] for i in live], order):
            coords = [zero] * len(cols)
            for j, i in enumerate(live):
                coords[i] = s.coords[j]
            gens.append(FreeModuleElement(coords, source_shifts))
    return GradedModulePresentation(n, source_shifts, gens, fld)


def _independent_over_fraction_field(gens: Sequence[FreeModuleElement], rng: random.Random,
                                     tries: int = 3) -> bool:
    """Certificate that the generators are S-linearly independent: some point
    evaluation of the coordinate matrix has full column rank (exact)."""
    from .linalg import rank
    if not gens:
        return True
    n, fld = gens[0].nvars, gens[0].field
    for _ in range(tries):
        pt = [rng.randint(-50, 50) for _ in range(n)]
        rows = [[c.evaluate(pt) for c in g.coords] for g in gens]
        if rank(rows, fld) == len(gens):
            return True
    return False


class UncertifiedResolution(RuntimeError):
    """The degreewise path could not certify exactness."""


def minimal_free_resolution(pres: GradedModulePresentation, max_length: int | None = None,
                            order: MonomialOrder = GREVLEX, seed: int = 0,
                            max_steps: int | None = None, method: str = "auto") -> FreeResolution:
    """Minimal free resolution of the submodule generated by ``pres``.

    ``method``: "groebner" iterates Gröbner syzygies; "linear" computes syzygies
    degree by degree and certifies the complex (Buchsbaum-Eisenbud), raising
    UncertifiedResolution on failure; "auto" tries "linear" then "groebner".
    """
    if method not in ("auto", "linear", "groebner"):
        raise ValueError(f"unknown method {method!r}")
    cur = pres if pres.minimal else minimalize(pres, order, max_steps)
    if method != "groebner":
        try:
            return _resolve_linear(cur, max_length, seed)
        except UncertifiedResolution:
            if method == "linear":
                raise
    return _resolve_groebner(cur, max_length, order, seed, max_steps)


def _resolve_groebner(cur, max_length, order, seed, max_steps) -> FreeResolution:
    rng = random.Random(seed)
    n = cur.nvars
    if max_length is None:
        max_length = n + 1
    gens = list(cur.generators)
    modules = [tuple(g.degree() for g in gens)]
    maps = [gens]
    truncated = False
    stage = 0
    while gens and not _independent_over_fraction_field(gens, rng):
        if stage >= max_length:
            truncated = True
            break
        syz = syzygies(gens, order, max_steps)
        if not syz:
            break
        nxt = minimalize(GradedModulePresentation(n, modules[-1], syz, cur.field), order, max_steps)
        gens = list(nxt.generators)
        if not gens:
            break
        modules.append(tuple(g.degree() for g in gens))
        maps.append(gens)
        stage += 1
    return FreeResolution(n, cur.field, modules, maps, truncated=truncated)


def _resolve_linear(cur, max_length, seed, slack: int | None = None) -> FreeResolution:
    from .resolve import _matrix_rank, buchsbaum_eisenbud, linear_syzygies
    rng = random.Random(seed)
    n, fld = cur.nvars, cur.field
    if max_length is None:
        max_length = n + 1
    slack = n + 1 if slack is None else slack
    gens = list(cur.generators)
    maps = [gens]
    while gens and not _independent_over_fraction_field(gens, rng):
        if len(maps) > max_length:
            raise UncertifiedResolution("length bound reached")
        want = len(gens) - _matrix_rank(gens, fld, rng)
        top = max(g.degree() for g in gens)
        found: list = []
        d = top + 1
        found = linear_syzygies(gens, d, found)
        while True:
            have = _matrix_rank(found, fld, rng) if found else 0
            if have == want:
                if len(found) > have:
                    break  # dependent syzygies: resolve them next
                ok, _ = buchsbaum_eisenbud(maps[1:] + [found], len(cur.shifts), fld, seed)
                if ok:
                    maps.append(found)
                    return FreeResolution(n, fld, [tuple(g.degree() for g in m) for m in maps],
                                          maps, truncated=False)
            if d >= top + slack:
                raise UncertifiedResolution("no certificate within the degree bound")
            d += 1
            found = linear_syzygies(gens, d, found, d_from=d)
        maps.append(found)
        gens = found
    if len(maps) > 1:
        ok, why = buchsbaum_eisenbud(maps[1:], len(cur.shifts), fld, seed)
        if not ok:
            raise UncertifiedResolution(why)
    return FreeResolution(n, fld, [tuple(g.degree() for g in m) for m in maps],
                          maps, truncated=False)


def betti_table(res: FreeResolution) -> BettiTable:
    if not res.minimal:
        raise ValueError("Betti numbers need a minimal resolution")
    return BettiTable.from_degrees(*res.modules)
