from fractions import Fraction
from math import comb

import pytest

from weylres.arrangement import Arrangement, Hyperplane, Multiarrangement, boolean, cone, deformation, delete, weyl
from weylres.groebner import hilbert_function
from weylres.lattice import flats_in, localization
from weylres.logder import (
    derivation_module, derivation_module_by_kernel, exponents_if_free, freeness, is_spog,
    kernel_dimension, log_derivative, multi_exponents, projective_dimension, saito_check,
    split_euler,
)
from weylres.rootsys import positive_roots
from weylres.scalar_poly import QQ, DerivationVector, Polynomial


def test_boolean_is_free():
    D = derivation_module(boolean(3))
    assert D.degrees() == [1, 1, 1]
    assert exponents_if_free(boolean(3)) == (1, 1, 1)
    assert saito_check(boolean(3), D.generators).ok


def test_pencil_exponents():
    A = Arrangement.from_forms([(1, 0, 0), (0, 1, 0), (1, 1, 0), (1, -1, 0), (1, 2, 0)])
    assert exponents_if_free(A) == (0, 1, 4)


def test_extended_shi_a3():
    A = cone(deformation(positive_roots("A3"), -1, 2))
    assert exponents_if_free(A) == (1, 8, 8, 8)


def test_spog_after_deletion():
    # removing x1 - x2 = -z from the extended Shi arrangement of A3
    A = cone(deformation(positive_roots("A3"), -1, 2))
    H = Hyperplane((1, -1, 0, 1))  # essential coordinates, z last
    cert = is_spog(delete(A, H))
    assert cert is not None
    assert cert.exponents == (1, 8, 8, 8) and cert.level == 9
    assert derivation_module(delete(A, H)).betti("d").data == {(0, 1): 1, (0, 8): 3, (0, 9): 1, (1, 10): 1}


def test_b2_interval_spog():
    A = cone(deformation(positive_roots("B2"), 0, 2))
    cert = is_spog(A)
    assert cert is not None and cert.exponents == (1, 6, 7) and cert.level == 7
    assert is_spog(boolean(3)) is None


def test_split_euler():
    A = cone(deformation(positive_roots("B2"), 0, 2))
    D = derivation_module(A)
    D0 = split_euler(D)
    n = A.dim
    for g in D0.generators:
        v = log_derivative(g.coords, A, QQ)
        assert v.is_zero()
    # D = S theta_E + D_0, so the dimensions differ by dim S_{d-1}
    for d in range(0, 10):
        extra = comb(d - 1 + n - 1, n - 1) if d >= 1 else 0
        assert hilbert_function(D.presentation, d, d)[d] == hilbert_function(D0, d, d)[d] + extra


def test_kernel_oracle_matches_generators():
    for A in (boolean(3), cone(deformation(positive_roots("B2"), 0, 2)),
              cone(deformation(positive_roots("A2"), 0, 1))):
        D = derivation_module(A)
        hf = hilbert_function(D.presentation, 0, max(D.degrees()) + 2)
        for d, v in hf.items():
            assert kernel_dimension(A, d) == v


def test_by_kernel_equals_incremental():
    A = cone(deformation(positive_roots("B2"), 0, 1))
    K = derivation_module_by_kernel(A)
    D = derivation_module(A)
    assert sorted(g.degree() for g in K.generators) == D.degrees()
    assert hilbert_function(K, 0, 6) == hilbert_function(D.presentation, 0, 6)


def test_saito_rejects_dependent_fields():
    A = boolean(3)
    E = DerivationVector.euler(3)
    cert = saito_check(A, [E, E, E])
    assert not cert.ok
    assert not saito_check(A, [E, E]).ok
    x = Polynomial.var(3, 0)
    bad = DerivationVector([x * 0 + 1, x * 0, x * 0])
    with pytest.raises(ArithmeticError):
        saito_check(A, [bad, E, E])


def test_saito_certificate_free_weyl():
    for name in ("B2", "A2"):
        A = cone(deformation(positive_roots(name), 0, 1))
        D = derivation_module(A)
        cert = saito_check(A, D.generators)
        assert cert.ok and cert.scalar != 0


def test_exponents_if_free_examples():
    assert exponents_if_free(cone(deformation(positive_roots("B2"), 0, 1))) == (1, 4, 4)
    assert exponents_if_free(cone(deformation(positive_roots("B2"), 0, 2))) is None
    assert projective_dimension(cone(deformation(positive_roots("B2"), 0, 2))) == 1
    r = freeness(cone(deformation(positive_roots("B2"), -1, 4)))
    assert r.free is False and r.pd == 1


def test_multi_exponents():
    A = Arrangement.from_forms([(1, 0), (0, 1)])
    assert multi_exponents(Multiarrangement(A, [1, 1])) == (1, 1)
    B = Arrangement.from_forms([(1, 0), (0, 1), (1, 1)])
    assert multi_exponents(Multiarrangement(B, [1, 1, 1])) == (1, 2)
    assert multi_exponents(Multiarrangement(B, [2, 2, 2])) == (3, 3)
    with pytest.raises(ValueError):
        multi_exponents(Multiarrangement(boolean(3), [1, 1, 1]))


def test_localization_of_free_is_free():
    A = cone(deformation(positive_roots("A3"), 0, 1))
    assert exponents_if_free(A) is not None
    for X in flats_in(A, A.hyperplanes[0], 2):
        L = localization(A, X)
        assert exponents_if_free(L) is not None


def test_d_requires_central():
    with pytest.raises(ValueError):
        derivation_module(deformation(positive_roots("B2"), 0, 1))


def test_log_derivative_of_euler():
    A = cone(deformation(positive_roots("B2"), 0, 1))
    v = log_derivative(DerivationVector.euler(3).coords, A, QQ)
    # theta_E(Q) = |A| Q
    assert v == Polynomial.constant(3, Fraction(len(A)), QQ)
