import pytest

from weylres.arrangement import boolean, cone, deformation
from weylres.groebner import (
    BettiTable, FreeModuleElement as V, GradedModulePresentation, ResourceCap, betti_table,
    buchberger_module, hilbert_from_betti, hilbert_function, kernel_of_map,
    minimal_free_resolution, minimalize, syzygies,
)
from weylres.groebner.resolve import buchsbaum_eisenbud
from weylres.logder import derivation_module
from weylres.rootsys import positive_roots
from weylres.scalar_poly import GF, QQ, MonomialOrder, Polynomial


def _vars(n=3):
    return [Polynomial.var(n, i) for i in range(n)]


def _is_zero_composition(prev, nxt):
    """Each syzygy in ``nxt`` combines ``prev`` to zero."""
    for s in nxt:
        total = None
        for c, g in zip(s.coords, prev):
            t = g * c
            total = t if total is None else total + t
        if not total.is_zero():
            return False
    return True


def test_gb_of_variables():
    x, y, _ = _vars()
    gb = buchberger_module([V([x]), V([y])])
    assert {g.coords[0] for g in gb.elements} == {x, y}


def test_gb_same_submodule():
    x, y, _ = _vars()
    gb = buchberger_module([V([x + y]), V([x - y])])
    assert gb.contains(V([x])) and gb.contains(V([y]))
    assert not gb.contains(V([Polynomial.var(3, 2)]))


def test_gb_inputs_reduce_to_zero_on_derivations():
    D = derivation_module(cone(deformation(positive_roots("B2"), 0, 1)))
    gens = D.presentation.generators
    gb = buchberger_module(gens)
    assert all(gb.reduce(g).is_zero() for g in gens)


def test_koszul_kernel():
    x, y, _ = _vars()
    ker = kernel_of_map([V([x]), V([y])])
    assert len(ker.generators) == 1
    g = ker.generators[0]
    assert g.coords[0] * x + g.coords[1] * y == Polynomial.zero(3)
    assert g.degree() == 2


def test_kernel_of_identity_is_zero():
    one = Polynomial.constant(3, 1)
    zero = Polynomial.zero(3)
    assert kernel_of_map([V([one, zero]), V([zero, one])]).generators == []


def test_minimalize_ideal():
    x, _, _ = _vars()
    pres = GradedModulePresentation(3, (0,), [V([x]), V([x * x])], QQ)
    m = minimalize(pres)
    assert [g.coords[0] for g in m.generators] == [x]
    assert len(minimalize(m).generators) == 1


def test_minimalize_a3_raw_kernel():
    A = cone(deformation(positive_roots("A3"), 0, 2))
    D0 = derivation_module(A).d0()
    padded = GradedModulePresentation(D0.nvars, D0.shifts,
                                      list(D0.generators) + [D0.generators[0] * Polynomial.var(4, 0)],
                                      QQ)
    m = minimalize(padded)
    assert sorted(g.degree() for g in m.generators) == [7] * 6


def test_free_module_resolution():
    x, y, _ = _vars()
    zero = Polynomial.zero(3)
    pres = GradedModulePresentation(3, (0, 0), [V([x, zero]), V([zero, y])], QQ)
    res = minimal_free_resolution(pres)
    assert res.pd == 0
    assert betti_table(res) == BettiTable({(0, 1): 2})


def test_a3_resolution():
    A = cone(deformation(positive_roots("A3"), 0, 2))
    res = minimal_free_resolution(derivation_module(A).d0(), method="linear")
    assert betti_table(res) == BettiTable({(0, 7): 6, (1, 8): 3})
    assert _is_zero_composition(res.maps[0], res.maps[1])


def test_linear_and_groebner_paths_agree():
    D0 = derivation_module(cone(deformation(positive_roots("B2"), 0, 3))).d0()
    a = minimal_free_resolution(D0, method="linear")
    b = minimal_free_resolution(D0, method="groebner")
    assert betti_table(a) == betti_table(b) == BettiTable({(0, 9): 2, (0, 10): 2, (1, 11): 2})
    assert _is_zero_composition(b.maps[0], b.maps[1])


def test_b2_resolutions():
    b = derivation_module(cone(deformation(positive_roots("B2"), 0, 2))).betti("d0")
    assert b == BettiTable({(0, 6): 1, (0, 7): 2, (1, 8): 1})
    b = derivation_module(cone(deformation(positive_roots("B2"), 0, 3))).betti("d0")
    assert b == BettiTable({(0, 9): 2, (0, 10): 2, (1, 11): 2})


def test_resolution_of_koszul_complex():
    # the maximal ideal of k[x,y,z]: pd 2 as a module, Koszul Betti numbers
    pres = GradedModulePresentation(3, (0,), [V([v]) for v in _vars()], QQ)
    res = minimal_free_resolution(pres)
    assert betti_table(res) == BettiTable({(0, 1): 3, (1, 2): 3, (2, 3): 1})
    for a, b in zip(res.maps, res.maps[1:]):
        assert _is_zero_composition(a, b)


def test_minimal_resolution_has_no_unit_entries():
    res = derivation_module(cone(deformation(positive_roots("B2"), -1, 3))).resolution_d0()
    for stage in res.maps[1:]:
        for s in stage:
            assert all(c.is_zero() or c.degree() > 0 for c in s.coords)


def test_order_invariance():
    A = cone(deformation(positive_roots("B2"), 0, 2))
    D0 = derivation_module(A).d0()
    grlex = MonomialOrder("grlex", perm=(2, 1, 0))
    a = betti_table(minimal_free_resolution(D0, method="groebner"))
    b = betti_table(minimal_free_resolution(D0, method="groebner", order=grlex))
    assert a == b


def test_hilbert_examples():
    x, _, _ = _vars()
    assert hilbert_function(GradedModulePresentation(3, (1,), [V([Polynomial.constant(3, 1)], (1,))], QQ), 3, 3)[3] == 6
    D0 = derivation_module(boolean(3)).d0()
    assert [hilbert_function(D0, 0, 3)[d] for d in range(4)] == [0, 2, 6, 12]
    B = derivation_module(cone(deformation(positive_roots("B2"), 0, 3))).d0()
    hf = hilbert_function(B, 0, 8)
    assert all(hf[d] == 0 for d in range(9))


def test_hilbert_function_matches_betti():
    D = derivation_module(cone(deformation(positive_roots("B2"), 0, 3)))
    b = D.betti("d0")
    hi = max(d for _, d in b.data) + 2
    assert hilbert_function(D.d0(), 0, hi) == hilbert_from_betti(b, 3, 0, hi)


def test_prime_field_agrees():
    A = cone(deformation(positive_roots("B2"), -1, 3))
    assert derivation_module(A, GF()).betti("d0") == derivation_module(A).betti("d0")


def test_betti_json_roundtrip():
    b = BettiTable({(0, 7): 6, (1, 8): 3})
    js = b.to_json()
    assert js == {"betti": [{"i": 0, "degree": 7, "count": 6}, {"i": 1, "degree": 8, "count": 3}]}
    assert BettiTable.from_json(js) == b
    assert b.shifted(7) == BettiTable({(0, 0): 6, (1, 1): 3})
    assert "6" in b.to_text()


def test_step_budget():
    x, y, z = _vars()
    gens = [V([x ** 3 + y * z * x]), V([y ** 3 + x * z * z]), V([z ** 3 + x * y * y])]
    with pytest.raises(ResourceCap):
        buchberger_module(gens, max_steps=1)


def test_buchsbaum_eisenbud_rejects_inexact_complex():
    x, y, z = _vars()
    # (x, y) with the syzygy (y, -x) times z: the complex is not exact
    ok, _ = buchsbaum_eisenbud([[V([x]), V([y])], [V([y * z, -x * z], (1, 1))]], 1, QQ)
    assert not ok
    ok, _ = buchsbaum_eisenbud([[V([x]), V([y])], [V([y, -x], (1, 1))]], 1, QQ)
    assert ok
