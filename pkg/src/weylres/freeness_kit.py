"""Addition-deletion tools: certificates, Betti predictions and deletion chains.

Certificates never replace a direct computation.  Every theorem-gated
conclusion is re-checked with ``exponents_if_free`` and the certificate
records whether the two agree.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Sequence

from .arrangement import (
    Arrangement, Hyperplane, add, cone, deformation, delete, restrict,
    terao_b_polynomial, ziegler_restriction,
)
from .groebner import BettiTable
from .lattice import characteristic_polynomial, flats_in, is_locally_free_along
from .logder import (
    d_hilbert_from_resolution, derivation_module, exponents_if_free, multi_exponents,
    projective_dimension,
)
from .rootsys import RootSystem, positive_roots, root_order_by_height
from .scalar_poly import QQ, Field


def _counts(A: Arrangement, H: Hyperplane) -> tuple[int, int]:
    return len(A), len(restrict(A, H))


# certificates -----------------------------------------------------------------

@dataclass
class DeletionCertificate:
    tag: str
    hyperplane: Hyperplane
    exponents_in: tuple | None
    exponents_out: tuple | None
    hypothesis: dict
    ok: bool
    confirmed: bool | None = None   # theorem output == direct computation
    reason: str = ""

    def to_json(self) -> dict:
        return {"theorem": self.tag, "hyperplane": self.hyperplane.to_json(),
                "exponents_in": list(self.exponents_in) if self.exponents_in else None,
                "exponents_out": list(self.exponents_out) if self.exponents_out else None,
                "hypothesis": self.hypothesis, "ok": self.ok, "confirmed": self.confirmed,
                "reason": self.reason}


def _confirm(cert: DeletionCertificate, target: Arrangement, field: Field) -> DeletionCertificate:
    direct = exponents_if_free(target, field)
    if cert.ok:
        cert.confirmed = direct == cert.exponents_out
    return cert


def _remove_one(big: Sequence[int], small: Sequence[int]) -> int | None:
    """The single entry of ``big`` missing from ``small`` (as multisets), if any."""
    rest = list(big)
    for e in small:
        if e not in rest:
            return None
        rest.remove(e)
    return rest[0] if len(rest) == 1 else None


def terao_deletion_step(A: Arrangement, H: Hyperplane, field: Field = QQ) -> DeletionCertificate:
    """A and A^H free with exp(A^H) inside exp(A): A minus H is free."""
    if H not in A:
        raise ValueError("H must belong to A")
    n, nh = _counts(A, H)
    ea = exponents_if_free(A, field)
    eh = exponents_if_free(restrict(A, H), field)
    hyp = {"|A|": n, "|A^H|": nh, "exp(A^H)": list(eh) if eh else None}
    cert = DeletionCertificate("terao", H, ea, None, hyp, False)
    if ea is None:
        cert.reason = "A is not free"
    elif eh is None:
        cert.reason = "A^H is not free"
    else:
        d = _remove_one(ea, eh)
        if d is None or d != n - nh:
            cert.reason = "exp(A^H) is not exp(A) minus one entry"
        else:
            out = list(ea)
            out[out.index(d)] = d - 1
            cert.exponents_out, cert.ok = tuple(sorted(out)), True
    return _confirm(cert, delete(A, H), field)


def _sorted_free(A: Arrangement, field: Field) -> tuple | None:
    e = exponents_if_free(A, field)
    return tuple(sorted(e)) if e else None


def mdt_step(A: Arrangement, H: Hyperplane, field: Field = QQ) -> DeletionCertificate:
    """Free with exp (1, d2, ...) and |A| - |A^H| = d2 gives exp (1, d2 - 1, d3, ...)."""
    if H not in A:
        raise ValueError("H must belong to A")
    n, nh = _counts(A, H)
    ea = _sorted_free(A, field)
    hyp = {"|A|-|A^H|": n - nh}
    cert = DeletionCertificate("mdt", H, ea, None, hyp, False)
    if ea is None or len(ea) < 2:
        cert.reason = "A is not free"
    elif ea[0] != 1 or ea[1] <= 1:
        cert.reason = "exponents must be (1, d2, ...) with d2 > 1"
    elif n - nh != ea[1]:
        cert.reason = f"|A|-|A^H| = {n - nh} differs from d2 = {ea[1]}"
    else:
        cert.exponents_out = (1, ea[1] - 1) + ea[2:]
        cert.ok = True
    return _confirm(cert, delete(A, H), field)


def mdt2_step(A: Arrangement, H: Hyperplane, field: Field = QQ) -> DeletionCertificate:
    """Free with exp (1, d2, d3, ...), d2 < d3, and |A| - |A^H| = d3 gives d3 - 1."""
    if H not in A:
        raise ValueError("H must belong to A")
    n, nh = _counts(A, H)
    ea = _sorted_free(A, field)
    hyp = {"|A|-|A^H|": n - nh}
    cert = DeletionCertificate("mdt2", H, ea, None, hyp, False)
    if ea is None or len(ea) < 3:
        cert.reason = "A is not free of rank at least 3"
    elif not (1 < ea[1] < ea[2]):
        cert.reason = "needs 1 < d2 < d3"
    elif n - nh != ea[2]:
        cert.reason = f"|A|-|A^H| = {n - nh} differs from d3 = {ea[2]}"
    else:
        cert.exponents_out = (1, ea[1], ea[2] - 1) + ea[3:]
        cert.ok = True
    return _confirm(cert, delete(A, H), field)


def yoshinaga_check(A: Arrangement, H: Hyperplane, field: Field = QQ) -> DeletionCertificate:
    """Rank 3: A is free with exp (1, d1, d2) iff chi_0(A; 0) = d1 d2 for the Ziegler exponents."""
    if A.rank != 3 or A.dim != 3:
        raise ValueError("Yoshinaga's criterion is used here for essential rank-3 arrangements")
    d1, d2 = multi_exponents(ziegler_restriction(A, H), field)
    chi0 = characteristic_polynomial(A).chi0_at(0)
    free = chi0 == d1 * d2
    cert = DeletionCertificate("yoshinaga", H, None, (1, d1, d2) if free else None,
                               {"chi0(0)": chi0, "d1*d2": d1 * d2, "ziegler": [d1, d2]}, free)
    direct = exponents_if_free(A, field)
    cert.confirmed = (direct == cert.exponents_out) if free else direct is None
    if not free:
        cert.reason = "chi_0(0) differs from d1*d2"
    return cert


# B-sequence -----------------------------------------------------------------------

@dataclass
class BSequenceReport:
    hyperplane: Hyperplane
    deg_b: int
    rows: list            # (d, dim D(A')_d - dim D(A)_d, dim (S/alpha_H)_{d - deg B})
    exact: bool           # deficit never exceeds the capacity of S/alpha_H * B
    surjective: bool

    def to_json(self) -> dict:
        return {"hyperplane": self.hyperplane.to_json(), "deg_b": self.deg_b,
                "rows": [list(r) for r in self.rows], "exact": self.exact,
                "surjective": self.surjective}


def b_sequence_report(A: Arrangement, H: Hyperplane, window: tuple[int, int],
                      field: Field = QQ) -> BSequenceReport:
    """Dimension bookkeeping for 0 -> D(A) -> D(A') -> S/alpha_H (B)."""
    if H not in A:
        raise ValueError("H must belong to A")
    Ap = delete(A, H)
    B = terao_b_polynomial(A, H, field)
    deg_b = B.degree()
    lo, hi = window
    big = d_hilbert_from_resolution(derivation_module(Ap, field), lo, hi)
    small = d_hilbert_from_resolution(derivation_module(A, field), lo, hi)
    n = A.dim
    rows = []
    for d in range(lo, hi + 1):
        e = d - deg_b
        cap = comb(e + n - 2, n - 2) if e >= 0 else 0
        rows.append((d, big[d] - small[d], cap))
    exact = all(0 <= df <= cap for _, df, cap in rows)
    return BSequenceReport(H, deg_b, rows, exact, exact and all(df == cap for _, df, cap in rows))


# Betti transfer under one deletion or addition ----------------------------------------

@dataclass
class BettiPrediction:
    lemma: str
    hypothesis: dict
    table: BettiTable | None
    reason: str = ""


def _stage_max(b: BettiTable, i: int) -> int | None:
    degs = b.degrees(i)
    return max(degs) if degs else None


def predict_betti_delete(A: Arrangement, H: Hyperplane, current: BettiTable) -> BettiPrediction:
    """D_0(A) table -> D_0(A minus H) table: one new generator in degree d, syzygy d + 1."""
    if H not in A:
        raise ValueError("H must belong to A")
    n, nh = _counts(A, H)
    d = n - 1 - nh
    g, s = _stage_max(current, 0), _stage_max(current, 1)
    hyp = {"d": d, "max_generator": g, "max_syzygy": s}
    if g is not None and d <= g:
        return BettiPrediction("delete", hyp, None, "d does not exceed the generator degrees")
    if s is not None and s >= d + 3:
        return BettiPrediction("delete", hyp, None, "syzygy degree bound fails")
    data = dict(current.data)
    data[(0, d)] = data.get((0, d), 0) + 1
    data[(1, d + 1)] = data.get((1, d + 1), 0) + 1
    return BettiPrediction("delete", hyp, BettiTable(data))


def predict_betti_add(A: Arrangement, H: Hyperplane, current: BettiTable) -> BettiPrediction:
    """D_0(A) table -> D_0(A plus H) table: shift by one, new generator d and syzygy d + 1."""
    if H in A:
        raise ValueError("H must not belong to A")
    d = len(restrict(A, H)) - 1
    g, s = _stage_max(current, 0), _stage_max(current, 1)
    hyp = {"d": d, "max_generator": g, "max_syzygy": s}
    if g is not None and d <= g:
        return BettiPrediction("add", hyp, None, "d does not exceed the generator degrees")
    if s is not None and s >= d + 2:
        return BettiPrediction("add", hyp, None, "syzygy degree bound fails")
    data = dict(current.shifted(-1).data)  # F[-1]: degrees go up by one
    data[(0, d)] = data.get((0, d), 0) + 1
    data[(1, d + 1)] = data.get((1, d + 1), 0) + 1
    return BettiPrediction("add", hyp, BettiTable(data))


# SPOG multiple deletion ---------------------------------------------------------

@dataclass
class SpogPrediction:
    table: BettiTable | None      # Betti table of D(A minus Hs), Euler included
    minimal: bool
    e: tuple
    reason: str = ""


def spog_multiple_deletion(A: Arrangement, Hs: Sequence[Hyperplane], field: Field = QQ) -> SpogPrediction:
    """0 -> (+) S[-e_i - 1] -> (+) S[-d_i] (+) (+) S[-e_i] -> D(A minus Hs) -> 0."""
    ea = _sorted_free(A, field)
    if ea is None:
        return SpogPrediction(None, False, (), "A is not free")
    Hs = list(Hs)
    if any(H not in A for H in Hs):
        raise ValueError("every H_i must belong to A")
    for i in range(len(Hs)):
        for j in range(i + 1, len(Hs)):
            X = next(x for x in flats_in(A, Hs[i], 2) if x.flat.contains_form(Hs[j].coeffs))
            if bin(X.mask).count("1") != 2:
                return SpogPrediction(None, False, (), f"H_{i} and H_{j} meet a third hyperplane")
    e = tuple(len(A) - len(restrict(A, H)) - 1 for H in Hs)
    data: dict = {}
    for d in ea:
        data[(0, d)] = data.get((0, d), 0) + 1
    for x in e:
        data[(0, x)] = data.get((0, x), 0) + 1
        data[(1, x + 1)] = data.get((1, x + 1), 0) + 1
    minimal = all(exponents_if_free(delete(A, H), field) is None for H in Hs)
    return SpogPrediction(BettiTable(data), minimal, e)


# deletion chains ------------------------------------------------------------------

def _root_key(H: Hyperplane, rs: RootSystem) -> int:
    forms = [tuple(f) for f in rs.essential_forms()]
    part = tuple(H.coeffs[:rs.rank])
    for i, f in enumerate(forms):
        if Hyperplane(f).coeffs == Hyperplane(part).coeffs:
            return i
    raise ValueError(f"{H} is not a translate of a root of {rs.name}")


def height_sorted(order: Sequence[Hyperplane], rs: RootSystem) -> list[Hyperplane]:
    """Non-increasing root height, lexicographically larger roots first on ties."""
    rank = {r: i for i, r in enumerate(root_order_by_height(rs))}
    roots = rs.roots
    return sorted(order, key=lambda H: rank[roots[_root_key(H, rs)]])


def translate_hyperplanes(rs: RootSystem, level: int) -> list[Hyperplane]:
    """The coned hyperplanes alpha = level z for every positive root alpha."""
    return [Hyperplane(tuple(f) + (-level,)) for f in rs.essential_forms()]


@dataclass
class ChainStep:
    hyperplane: Hyperplane
    flats_checked: int
    local_ok: bool
    failure: object = None

    def to_json(self) -> dict:
        out = {"deleted": self.hyperplane.to_json(), "flats_checked": self.flats_checked,
               "locally_free": self.local_ok}
        if self.failure is not None:
            out["failed_flat"] = [[str(c) for c in row] for row in self.failure.equations]
        return out


@dataclass
class ChainReport:
    start_size: int
    start_exponents: tuple | None
    order: list
    steps: list = dc_field(default_factory=list)
    final_pd: int | None = None
    ok: bool = False
    reason: str = ""

    def to_json(self) -> dict:
        return {"start_size": self.start_size,
                "start_exponents": list(self.start_exponents) if self.start_exponents else None,
                "order": [h.to_json() for h in self.order],
                "steps": [s.to_json() for s in self.steps], "final_pd": self.final_pd,
                "ok": self.ok, "reason": self.reason}


def verify_deletion_chain(start: Arrangement, order: Sequence[Hyperplane], rs: RootSystem | None = None,
                          field: Field = QQ, codim: int = 3) -> ChainReport:
    """Delete ``order`` one by one, checking local freeness in codim 3 along each H.

    With ``rs`` the order is re-sorted by root height first.
    """
    order = height_sorted(order, rs) if rs is not None else list(order)
    exps = exponents_if_free(start, field)
    rep = ChainReport(len(start), exps, order)
    if exps is None:
        rep.reason = "start arrangement is not free"
        return rep
    cur = start
    for H in order:
        loc = is_locally_free_along(cur, H, codim, field)
        fail = loc.failures
        rep.steps.append(ChainStep(H, len(loc.checks), loc.ok, fail[0].flat if fail else None))
        if not loc.ok:
            rep.reason = "local freeness fails"
            return rep
        cur = delete(cur, H)
    rep.final_pd = projective_dimension(cur, field)
    rep.ok = rep.final_pd <= 1
    if not rep.ok:
        rep.reason = f"final pd is {rep.final_pd}"
    return rep


def simply_laced_chain(kind: str, k: int, field: Field = QQ) -> ChainReport:
    """From c A^{[-k-1, k+2]} down to c A^{[-k, k+2]} by deleting alpha = (-k-1) z."""
    rs = positive_roots(kind)
    start = cone(deformation(rs, -k - 1, k + 2))
    return verify_deletion_chain(start, translate_hyperplanes(rs, -k - 1), rs, field)


# B2 chains ---------------------------------------------------------------------------

def b2_split(j: int) -> tuple[int, int]:
    """j = 2m + r with r in {0, 1}."""
    if j < 2:
        raise ValueError("the B2 family needs j >= 2")
    return j // 2, j % 2


def _y_line(s: int) -> Hyperplane:
    return Hyperplane((0, 1, -s))


def b2_target(k: int, j: int) -> Arrangement:
    return cone(deformation(positive_roots("B2"), -k, k + j))


def b2_start(k: int, j: int) -> Arrangement:
    """The free start of the chain: extra lines y = s z below, missing ones above."""
    m, r = b2_split(j)
    A = b2_target(k, j)
    hs = set(A.hyperplanes)
    hs |= {_y_line(s) for s in range(-k - m, -k)}
    hs -= {_y_line(s) for s in range(k + m + r + 1, k + 2 * m + r + 1)}
    return Arrangement(3, hs, central=True)


def b2_start_exponents(k: int, j: int) -> tuple:
    m, r = b2_split(j)
    t = 4 * k + 4 * m
    return tuple(sorted((1, t + 1 + 3 * r, t + 3 + r)))


def b2_h(k: int, j: int, u: int) -> Hyperplane:
    m, _ = b2_split(j)
    return _y_line(-k - m + u)


def b2_l(k: int, j: int, u: int) -> Hyperplane:
    m, r = b2_split(j)
    return _y_line(k + m + u + r + 1)


@dataclass
class B2Step:
    kind: str                 # "delete" or "add"
    u: int
    hyperplane: Hyperplane
    prediction: BettiPrediction | None
    certificate: DeletionCertificate | None
    direct: BettiTable
    match: bool | None        # None when no lemma applies

    def to_json(self) -> dict:
        out = {"step": self.kind, "u": self.u, "hyperplane": self.hyperplane.to_json(),
               "direct": self.direct.to_json(), "match": self.match}
        if self.prediction is not None:
            out["lemma"] = {"hypothesis": self.prediction.hypothesis,
                            "table": self.prediction.table.to_json() if self.prediction.table else None,
                            "reason": self.prediction.reason}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


def _d0_betti(A: Arrangement, field: Field) -> BettiTable:
    return derivation_module(A, field).betti("d0")


def b2_chain(k: int, j: int, field: Field = QQ) -> list[B2Step]:
    """Walk from the free start to c A^{[-k, k+j]}: delete H_u, then add L_u, u = 0..m-1.

    Each step carries the lemma prediction (when its hypotheses hold), a Terao
    certificate when the lemma does not apply, and the direct Betti table.
    """
    m, _ = b2_split(j)
    cur = b2_start(k, j)
    table = _d0_betti(cur, field)
    steps = []
    for u in range(m):
        H = b2_h(k, j, u)
        pred = predict_betti_delete(cur, H, table)
        cert = None
        if pred.table is None:
            cert = terao_deletion_step(cur, H, field)
        nxt = delete(cur, H)
        direct = _d0_betti(nxt, field)
        match = (pred.table == direct) if pred.table is not None else (
            cert.ok and cert.confirmed if cert is not None else None)
        steps.append(B2Step("delete", u, H, pred, cert, direct, match))
        cur, table = nxt, direct

        L = b2_l(k, j, u)
        pred = predict_betti_add(cur, L, table)
        nxt = add(cur, L)
        direct = _d0_betti(nxt, field)
        steps.append(B2Step("add", u, L, pred, None, direct,
                            (pred.table == direct) if pred.table is not None else None))
        cur, table = nxt, direct
    if cur != b2_target(k, j):
        raise AssertionError("chain did not end at the target arrangement")
    return steps
