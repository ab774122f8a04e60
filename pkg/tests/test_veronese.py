from fractions import Fraction
from math import factorial

import pytest

from veronese_kpoly.errors import DegenerateMap, InvalidInput
from veronese_kpoly.intlat import build_config, is_totally_unimodular
from veronese_kpoly.laurent import LaurentPoly, one_minus_monomial, series_expand, sieve
from veronese_kpoly.polytope import zonotope_build
from veronese_kpoly.veronese import (AsymptoticExpansion, c_coeff, codim_asymptotic,
                                     convergence_report, extract_limit, k_polynomial, phi)

from _battery import battery
from oracles import eulerian_row

EX1 = build_config([[2, 1, 0], [0, 1, 2]])
EX2 = build_config([[1, 1, 0], [0, 0, 1]])
CARRIES = build_config([[1, 1, 0, 0, -1], [0, 0, 1, 1, 1]])
SURFACE = build_config([[2, 1, 2, 0, 1, 2], [0, 1, 1, 2, 2, 2]])
T1, T2 = LaurentPoly.variables(2)
ONE = LaurentPoly.constant(1, 2)
h = Fraction(1, 2)


def test_phi_example_one_closed_forms():
    for k in (3, 4, 5):
        expected = ((k - 1) * (T1**2 * T2**2 + T1**2 * T2 + T1 * T2**2) + k * T1 * T2
                    + T1 + T2 + 1)
        assert phi(ONE, EX1, 2 * k) == expected
        assert phi(ONE, EX1, 2 * k + 1) == k * T1**2 * T2**2 + k * T1 * T2 + 1


def test_phi_identity_at_one():
    for cfg in battery()[:10]:
        F = LaurentPoly({(1,) * cfg.d: 3, (0,) * cfg.d: Fraction(-1, 2)}, cfg.d)
        assert phi(F, cfg, 1) == F


def test_phi_example_two():
    for r in range(2, 7):
        assert phi(T2, EX2, r) == (r - 1) * T1 * T2 + T2
        assert phi(ONE, EX2, r) == (r - 1) * T1 + 1
        assert phi(T1 * T2, EX2, r) == r * T1 * T2
        assert phi(T1, EX2, r) == r * T1  # sum_k r k t1^k = r t1 / (1 - t1)^2


def test_c_coeff_examples():
    assert c_coeff(EX1, 3, (1, 1), (0, 0)) == 1
    assert c_coeff(build_config([[1, 1, 1]]), 2, (1,), (1,)) == 3
    assert c_coeff(EX1, 3, (1, 1), (1, 0)) == 0  # 3u - v = (2, 3) is not reachable


def test_phi_routes_agree_with_series_sifting():
    for cfg in battery()[:8]:
        F = LaurentPoly({(0,) * cfg.d: 1, cfg.columns[0]: 2}, cfg.d)
        for r in (2, 3):
            P = phi(F, cfg, r)
            assert P == phi(F, cfg, r, method="product")
            bound = 3
            lhs = series_expand(F, cfg, r * bound).sifted(r).restrict(bound)
            rhs = series_expand(P, cfg, bound)
            assert lhs.coefficients == rhs.coefficients


def test_phi_linearity_and_shift():
    F = 1 + T1 * T2
    for r in (2, 3, 4):
        assert phi(2 * F, EX1, r) == 2 * phi(F, EX1, r)
        assert phi(F.shift((r, 2 * r)), EX1, r) == phi(F, EX1, r).shift((1, 2))


def test_phi_rejects_bad_input():
    with pytest.raises(InvalidInput):
        phi(ONE, EX1, 0)
    with pytest.raises(InvalidInput):
        phi(LaurentPoly.constant(1, 3), EX1, 2)


def test_commutation_with_column_removal():
    # the factor can be pulled out once the column is dropped from the grading
    F = 1 + T1 * T2
    for i in range(EX1.n):
        a = EX1.columns[i]
        for r in (2, 3, 4):
            assert phi(one_minus_monomial(a) * F, EX1, r) == \
                one_minus_monomial(a) * phi(F, EX1.submatrix([i]), r)


def test_k_polynomial_examples():
    K = k_polynomial(EX1)
    assert K.k_poly == h * (T1**2 * T2**2 + T1**2 * T2 + T1 * T2**2 + T1 * T2)
    assert K.coefficient_sum == 2 == K.closed_form_sum
    t1, t2, t3 = LaurentPoly.variables(3)
    three = build_config([[1, -1, 1, 0, 0], [0, 1, -1, 1, 0], [0, 0, 1, -1, 1]])
    assert k_polynomial(three).k_poly == t1 * t3 + t2
    assert k_polynomial(CARRIES).k_poly == T1 * T2**2 + 2 * T1 * T2 + 2 * T2**2 + T2


def test_eulerian_specialization():
    (t,) = LaurentPoly.variables(1)
    for n in range(2, 7):
        K = k_polynomial(build_config([[1] * n])).k_poly
        row = eulerian_row(n - 1)
        assert K == sum((c * t ** (i + 1) for i, c in enumerate(row)), LaurentPoly.zero(1))
        assert K.eval_at_one() == factorial(n - 1)


def test_k_polynomial_degenerate():
    with pytest.raises(DegenerateMap) as err:
        k_polynomial(EX2)
    assert err.value.witness == (1, 0)


def test_k_polynomial_support_and_positivity():
    for cfg in battery():
        K = k_polynomial(cfg)
        inner = set(zonotope_build(cfg).interior_lattice_points)
        assert set(K.k_poly.support()) <= inner
        assert all(c > 0 for _, c in K.k_poly.items())


def test_coefficient_sum_is_lattice_sum():
    # m (n-d)!: fibers over distinct u tile [0,1]^n against the kernel lattice
    for cfg in battery():
        assert k_polynomial(cfg).coefficient_sum == cfg.m * factorial(cfg.codim)
    A = build_config([[2, 2, 2]])
    assert k_polynomial(A).coefficient_sum == 4


def test_totally_unimodular_integral():
    for cfg in battery():
        if is_totally_unimodular(cfg.entries):
            K = k_polynomial(cfg)
            assert all(c.denominator == 1 for _, c in K.k_poly.items())
            assert K.coefficient_sum == factorial(cfg.codim)


def test_extract_limit_on_quasi_polynomial():
    seq = {j: LaurentPoly.constant(3 * j * j + (j % 2), 1) for j in range(12)}
    lim, p = extract_limit(seq, 2)
    assert lim == 3 and p == 2


def test_convergence_example_one():
    rep = convergence_report(ONE, EX1, 16)
    assert rep.limit == k_polynomial(EX1).k_poly and rep.limit_matches_expected
    norms = [rep.difference_norms[r] for r in sorted(rep.difference_norms)]
    assert all(a >= b for a, b in zip(norms, norms[1:]))
    assert all(norm * r <= 2 for r, norm in rep.difference_norms.items())  # O(1/r)
    assert rep.oscillates and rep.residue_limits[1] != rep.limit
    assert rep.checked_up_to == 16 and "unverified" in rep.caveat


def test_convergence_scales_linearly():
    a = convergence_report(ONE, EX1, 12, check_concavity=False)
    b = convergence_report(3 * ONE, EX1, 12, check_concavity=False)
    assert b.limit == 3 * a.limit


def test_convergence_rejects_small_rmax():
    with pytest.raises(InvalidInput):
        convergence_report(ONE, EX1, 1)


SURFACE_F = ((1 - T1 * T2) * (1 - T1**2 * T2) * (1 - T1 * T2**2)
             * (1 + T1 * T2 + T1**2 * T2 + T1 * T2**2))
SURFACE_LIMIT = (h * T1 * T2 * (T1 + 1) * (T2 + 1) * (T1 * T2 + 1)
                 * (1 - T1 * T2) * (1 - T1**2 * T2) * (1 - T1 * T2**2))


def test_codim_expansions_agree():
    e1 = AsymptoticExpansion(3, (((2, 3, 5), 4),))
    e2 = AsymptoticExpansion(3, (((1, 2, 5), 2), ((2, 5, 6), 2)))
    assert codim_asymptotic(SURFACE, e1) == SURFACE_LIMIT
    assert codim_asymptotic(SURFACE, e2) == SURFACE_LIMIT


def test_codim_expansion_matches_full_lowest_terms():
    # the full first expansion reproduces F, so its lowest terms are the data
    cols = SURFACE.columns
    y = {i: one_minus_monomial(cols[i - 1]) for i in range(1, 7)}
    F = 4 * y[2] * y[3] * y[5] - y[2]**2 * y[3] * y[5] - y[2] * y[3]**2 * y[5] - y[2] * y[3] * y[5]**2
    assert F == SURFACE_F


def test_expansion_validation():
    with pytest.raises(InvalidInput):
        AsymptoticExpansion(2, (((1, 1), 1),))
    with pytest.raises(InvalidInput):
        AsymptoticExpansion(2, (((1, 2), 0),))
    with pytest.raises(InvalidInput):
        codim_asymptotic(SURFACE, AsymptoticExpansion(1, (((9,), 1),)))


def test_codim_boundary_square_submatrix():
    # dropping n - d columns leaves a square grading whose zonotope is a
    # parallelepiped; boundary fibers are points of dimension 0 = n - d
    E = AsymptoticExpansion(1, (((1,), 1),))
    with pytest.raises(DegenerateMap) as err:
        codim_asymptotic(build_config([[1, 1]]), E)
    assert "s=(1,)" in err.value.detail
