"""Acceptance criteria 1-7, exact over Q.

Each case calls ``record`` so the terminal summary prints one PASS/FAIL line
per criterion.  Criterion 7 re-checks every derivation module computed by the
earlier criteria, so run the file as a whole.
"""
import os
import random
from math import comb

import pytest

from conftest import criterion, record
from weylres.arrangement import Arrangement, Hyperplane, cone, deformation, delete, restrict
from weylres.freeness_kit import (
    b2_chain, b2_h, b2_l, b2_split, b2_start, b2_start_exponents, b2_target,
    simply_laced_chain, yoshinaga_check,
)
from weylres.groebner import hilbert_from_betti, hilbert_function
from weylres.lattice import characteristic_polynomial
from weylres.logder import (
    derivation_module, freeness, kernel_dimension, log_derivative, saito_check, split_euler,
)
from weylres.rootsys import positive_roots
from weylres.scalar_poly import QQ, DerivationVector, Polynomial
from weylres.sheaf import (
    candidate_lines, chern_from_betti, d0_resolution, jumping_scan, normalizing_twist,
    stability_check,
)
import weylres.logder as logder

K = (0, 1)
J_B2 = (2, 3, 4, 5)
J_JUMP = (3, 4, 5)

T1 = "A3 resolution of D0"
T2 = "simply-laced pd 1 with local freeness gates"
T3 = "B2 Betti tables and chain predictions"
T4 = "Shi/Catalan start arrangements free (Saito and Yoshinaga)"
T5 = "Chern classes and stability"
T6 = "jumping lines"
T7 = "property suites"


# 1 -----------------------------------------------------------------------------

@pytest.mark.parametrize("k", K)
def test_criterion_1_a3_resolution(k):
    with criterion(1, T1):
        A = cone(deformation(positive_roots("A3"), -k, k + 2))
        b = derivation_module(A).betti("d0")
        want = {(0, 4 * k + 7): 6, (1, 4 * k + 8): 3}
        record(1, T1, b.data == want)
        assert b.data == want


# 2 -----------------------------------------------------------------------------

@pytest.mark.parametrize("kind", ["A2", "A3"])
@pytest.mark.parametrize("k", K)
def test_criterion_2_simply_laced_pd(kind, k):
    with criterion(2, T2):
        rep = simply_laced_chain(kind, k)
        target = cone(deformation(positive_roots(kind), -k, k + 2))
        pd = freeness(target).pd
        ok = rep.ok and all(s.local_ok for s in rep.steps) and rep.final_pd == 1 and pd == 1
        record(2, T2, ok)
        assert ok, rep.to_json()


@pytest.mark.skipif(not os.environ.get("WEYLRES_D4"), reason="optional D4 stretch; set WEYLRES_D4=1")
def test_criterion_2_d4_stretch():
    import signal

    from weylres.groebner import ResourceCap

    def _cap(signum, frame):
        raise ResourceCap("time budget exceeded")

    signal.signal(signal.SIGALRM, _cap)
    signal.alarm(int(os.environ.get("WEYLRES_D4_SECONDS", "600")))
    try:
        rep = simply_laced_chain("D4", 0)
    except ResourceCap:
        pytest.skip("D4 chain truncated by the time budget")
    finally:
        signal.alarm(0)
    assert rep.ok


# 3 -----------------------------------------------------------------------------

@pytest.mark.parametrize("j", J_B2)
@pytest.mark.parametrize("k", K)
def test_criterion_3_b2_betti(k, j):
    with criterion(3, T3):
        m, r = b2_split(j)
        steps = b2_chain(k, j)
        direct = derivation_module(b2_target(k, j)).betti("d0")
        gens = direct.degrees(0)
        ok = (direct.pd == 1
              and direct.total(0) == 2 * m + 1 + r
              and direct.total(1) == 2 * m + r - 1
              and min(gens) == 4 * k + 5 * m + 1 + 3 * r
              and max(gens) == 4 * k + 6 * m + 1 + 3 * r
              and all(s.match for s in steps)
              and steps[-1].direct == direct
              and steps[-1].prediction.table == direct)
        record(3, T3, ok)
        assert ok, (direct, [s.to_json() for s in steps])


# 4 -----------------------------------------------------------------------------

@pytest.mark.parametrize("j", J_B2)
@pytest.mark.parametrize("k", K)
def test_criterion_4_start_free(k, j):
    with criterion(4, T4):
        m, r = b2_split(j)
        B = b2_start(k, j)
        want = (1, 4 * k + 4 * m + 1 + 3 * r, 4 * k + 4 * m + 3 + r)
        assert b2_start_exponents(k, j) == tuple(sorted(want))
        rep = freeness(B)
        saito = saito_check(B, derivation_module(B).generators)
        yosh = yoshinaga_check(B, Hyperplane((0, 0, 1)))
        ok = (rep.exponents == tuple(sorted(want)) and saito.ok
              and yosh.ok and yosh.exponents_out == tuple(sorted(want)))
        record(4, T4, ok)
        assert ok


# 5 -----------------------------------------------------------------------------

@pytest.mark.parametrize("j", J_B2)
@pytest.mark.parametrize("k", K)
def test_criterion_5_chern(k, j):
    with criterion(5, T5):
        m, r = b2_split(j)
        b = derivation_module(b2_target(k, j)).betti("d0")
        c = chern_from_betti(b)
        F = c.twisted(normalizing_twist(c.c1))
        verdict = stability_check(b)
        ok = F.c1 == 0 and F.c2 == 2 * m * m + 2 * m * r + r - 1
        ok = ok and verdict == ("stable" if j >= 3 else "semistable-not-stable")
        if j == 2:
            ok = ok and F.c2 == 1
        record(5, T5, ok)
        assert ok, (F, verdict)


# 6 -----------------------------------------------------------------------------

def _scan(k, j, seed=0):
    m, _ = b2_split(j)
    A = b2_target(k, j)
    family = [b2_h(k, j, u) for u in range(m)] + [b2_l(k, j, u) for u in range(m)]
    cands = candidate_lines(A, family, n_random=50, seed=seed)
    return jumping_scan(d0_resolution(A), cands, max_order=j - 1, seed=seed)


@pytest.mark.parametrize("j", J_JUMP)
@pytest.mark.parametrize("k", K)
def test_criterion_6_jumping_lines(k, j):
    with criterion(6, T6):
        m, r = b2_split(j)
        scan = _scan(k, j)
        by_line = {rep.line.hyperplane: rep.order for rep in scan.reports}
        family_ok = all(by_line[b2_h(k, j, u)] == 2 * u + r + 1 and by_line[b2_l(k, j, u)] == 2 * u + r + 1
                        for u in range(m))
        top = {L.hyperplane for L in scan.lines_of_order(j - 1)}
        want = {Hyperplane((0, 1, -(k + j))), Hyperplane((0, 1, k + 1))}
        ok = family_ok and top == want and not scan.violations and len(scan.reports) >= 50
        record(6, T6, ok)
        assert ok, scan.to_json()


def test_criterion_6_distinct_bundles():
    with criterion(6, T6):
        j = 3
        tables, tops = [], []
        for k in (0, 1):
            b = derivation_module(b2_target(k, j)).betti("d0")
            tables.append(b.shifted(min(b.degrees(0))))
            tops.append({L.hyperplane for L in _scan(k, j).lines_of_order(j - 1)})
        ok = tables[0] == tables[1] and not (tops[0] & tops[1])
        record(6, T6, ok)
        assert ok


# 7 -----------------------------------------------------------------------------

def _computed_modules():
    mods = [D for (A, fld), D in list(logder._CACHE.items()) if fld is QQ and A.hyperplanes]
    if not mods:   # file run partially: fall back to a small fixed set
        for A in (cone(deformation(positive_roots("A3"), 0, 2)), b2_target(0, 2), b2_target(0, 3)):
            mods.append(derivation_module(A))
    return mods


def test_criterion_7_oracle_equals_resolution():
    with criterion(7, T7):
        bad = []
        mods = _computed_modules()
        for D in mods:
            A = D.arrangement
            b = D.betti("d")
            top = max(d for _, d in b.data) + 2
            hf = hilbert_from_betti(b, A.dim, 0, top)
            for d in range(top + 1):
                if kernel_dimension(A, d) != hf[d]:
                    bad.append((len(A), d))
        record(7, T7, not bad)
        assert not bad and mods


def test_criterion_7_saito_on_free():
    with criterion(7, T7):
        bad, seen = [], 0
        for D in _computed_modules():
            A = D.arrangement
            if len(D.degrees()) == A.dim:
                seen += 1
                if not saito_check(A, D.generators).ok:
                    bad.append(A)
        record(7, T7, not bad and seen > 0)
        assert not bad and seen > 0


def test_criterion_7_deletion_restriction():
    with criterion(7, T7):
        rng = random.Random(2024)
        pools = [b2_target(0, 3), b2_target(1, 2), cone(deformation(positive_roots("A3"), 0, 1)),
                 cone(deformation(positive_roots("A2"), -1, 2))]
        ok = True
        for _ in range(25):
            pool = rng.choice(pools)
            hs = rng.sample(pool.hyperplanes, rng.randint(4, min(12, len(pool))))
            A = Arrangement(pool.dim, hs, central=True)
            H = rng.choice(hs)
            chi, chid = characteristic_polynomial(A), characteristic_polynomial(delete(A, H))
            chir = characteristic_polynomial(restrict(A, H))
            ok = ok and all(chi(t) == chid(t) - chir(t) for t in range(-3, 6))
        record(7, T7, ok)
        assert ok


def test_criterion_7_euler_split():
    with criterion(7, T7):
        ok = True
        for D in _computed_modules():
            A = D.arrangement
            if A.dim != 3 or len(A) > 20:
                continue
            n = A.dim
            D0 = split_euler(D)
            ok = ok and all(log_derivative(g.coords, A, QQ).is_zero() for g in D0.generators)
            top = max(D.degrees()) + 2
            full, part = hilbert_function(D.presentation, 0, top), hilbert_function(D0, 0, top)
            ok = ok and all(full[d] == part[d] + (comb(d - 1 + n - 1, n - 1) if d else 0)
                            for d in range(top + 1))
        record(7, T7, ok)
        assert ok


def _random_poly(rng, n, deg):
    terms = {}
    for _ in range(rng.randint(1, 5)):
        e = [0] * n
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(n)] += 1
        terms[tuple(e)] = QQ(rng.randint(-9, 9))
    return Polynomial(n, {e: c for e, c in terms.items() if c}, QQ)


def test_criterion_7_leibniz():
    with criterion(7, T7):
        rng = random.Random(11)
        ok = True
        for _ in range(60):
            n, d = rng.choice([2, 3, 4]), rng.randint(0, 3)
            coords = []
            for _ in range(n):
                p = _random_poly(rng, n, d)
                # keep the coordinates homogeneous of degree d
                coords.append(Polynomial(n, {e: c for e, c in p.terms.items() if sum(e) == d}, QQ))
            if all(c.is_zero() for c in coords):
                continue
            theta = DerivationVector(coords)
            f, g = _random_poly(rng, n, 3), _random_poly(rng, n, 3)
            ok = ok and theta.apply(f * g) == f * theta.apply(g) + g * theta.apply(f)
        record(7, T7, ok)
        assert ok
