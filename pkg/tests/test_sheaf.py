import pytest

from weylres.arrangement import Arrangement, Hyperplane, boolean, cone, deformation, restrict
from weylres.freeness_kit import b2_h, b2_l, b2_split, b2_target
from weylres.groebner import BettiTable
from weylres.logder import derivation_module
from weylres.rootsys import positive_roots
from weylres.sheaf import (
    ProjLine, candidate_lines, chern_from_betti, d0_resolution, jumping_scan, normalizing_twist,
    predicted_splitting, random_lines, splitting_type, stability_check,
)


def test_chern_of_sum_of_line_bundles():
    b = BettiTable.from_degrees([1, 1])
    c = chern_from_betti(b)
    assert (c.c1, c.c2) == (-2, 1)
    assert c.twisted(1).c1 == 0 and c.twisted(1).c2 == 0


def test_chern_rejects_bad_rank():
    with pytest.raises(ValueError):
        chern_from_betti(BettiTable.from_degrees([1, 1, 1]))
    with pytest.raises(ValueError):
        normalizing_twist(3)


def test_boolean_sheaf():
    res = d0_resolution(boolean(3))
    b = derivation_module(boolean(3)).betti("d0")
    assert stability_check(b) == "semistable-not-stable"
    rep = splitting_type(res, ProjLine.of((1, 1, 1)))
    assert rep.splitting == (-1, -1) and rep.order == 0


@pytest.mark.parametrize("k,j", [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3)])
def test_b2_chern_and_stability(k, j):
    m, r = b2_split(j)
    b = derivation_module(b2_target(k, j)).betti("d0")
    c = chern_from_betti(b)
    t = normalizing_twist(c.c1)
    F = c.twisted(t)
    assert F.c1 == 0 and F.c2 == 2 * m * m + 2 * m * r + r - 1
    assert stability_check(b) == ("stable" if j >= 3 else "semistable-not-stable")


@pytest.mark.parametrize("k,j", [(0, 3), (0, 4), (1, 3)])
def test_b2_jumping_orders(k, j):
    m, r = b2_split(j)
    A = b2_target(k, j)
    res = d0_resolution(A)
    for u in range(m):
        for H in (b2_h(k, j, u), b2_l(k, j, u)):
            assert splitting_type(res, ProjLine.of(H.coeffs)).order == 2 * u + r + 1


def test_top_lines_when_j_at_least_3():
    k, j = 0, 4
    A = b2_target(k, j)
    m, r = b2_split(j)
    scan = jumping_scan(d0_resolution(A), candidate_lines(A, [b2_h(k, j, u) for u in range(m)], 5, 1))
    top = {L.hyperplane for L in scan.lines_of_order(scan.observed_max)}
    assert top == {Hyperplane((0, 1, -(k + j))), Hyperplane((0, 1, k + 1))}
    assert scan.observed_max == 2 * (m - 1) + r + 1
    assert not scan.violations


def test_splitting_matches_count_formula():
    A = cone(deformation(positive_roots("B2"), 0, 3))
    res = d0_resolution(A)
    for H in A.hyperplanes[:6]:
        t = len(restrict(A, H))
        pred = predicted_splitting(len(A), t, True)
        if pred is not None:
            assert splitting_type(res, ProjLine.of(H.coeffs)).splitting == pred


def test_predicted_splitting_cases():
    assert predicted_splitting(17, 7, False) == (-10, -6)
    assert predicted_splitting(17, 11, True) == (-10, -6)
    assert predicted_splitting(17, 5, True) is None
    assert predicted_splitting(17, 12, False) is None


def test_random_lines_are_seeded_and_distinct():
    a = random_lines(20, 3)
    assert a == random_lines(20, 3)
    assert len({L.hyperplane for L in a}) == 20
    ex = {a[0].hyperplane}
    assert a[0].hyperplane not in {L.hyperplane for L in random_lines(20, 3, ex)}


def test_scan_threads_agree():
    A = cone(deformation(positive_roots("B2"), 0, 2))
    res = d0_resolution(A)
    cands = candidate_lines(A, n_random=4, seed=2)
    one = [r.f_splitting for r in jumping_scan(res, cands).reports]
    two = [r.f_splitting for r in jumping_scan(res, cands, workers=2).reports]
    assert one == two


def test_sheaf_needs_plane():
    with pytest.raises(ValueError):
        d0_resolution(boolean(4))
