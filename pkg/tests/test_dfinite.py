import io

import numpy as np
import pytest

import corpus
from taylordom.dfinite import (DifferentialOperator, MomentSequence, PiecewiseDFiniteFunction, Segment,
                               alpha_exponents, companion_system, epsilon_fit, epsilon_recurrence_coeffs,
                               epsilon_self_residual, fuchsian_check, has_nonsingular_jump,
                               indicial_roots_infinity, moment_quadrature, poincare_condition, q_poly,
                               recurrence_residual, stieltjes_domination, vanishing_bound)
from taylordom.errors import FitError, IntegrationError, OperatorError

D = DifferentialOperator([[0], [1]])
XD_1 = DifferentialOperator([[-1], [0, 1]])
LEGENDRE = corpus.legendre_p2().operator


def _q_by_hand(op, ell, k):
    # direct evaluation of sum_j (-1)^j a_{l+j,j} (k+l+j)_j at one k
    total = 0.0
    for j in range(op.n + 1):
        ff = 1.0
        for t in range(j):
            ff *= k + ell + j - t
        total += (-1) ** j * op.a(ell + j, j) * ff
    return total


def test_alpha_exponents():
    assert alpha_exponents(D) == ([None, -1], -1)
    assert alpha_exponents(XD_1) == ([0, 0], 0)
    assert alpha_exponents(LEGENDRE) == ([0, 0, 0], 0)
    assert LEGENDRE.d_n == 2


def test_q_poly_examples():
    np.testing.assert_allclose(q_poly(D, -1).coefficients, [0, -1])
    np.testing.assert_allclose(q_poly(XD_1, 0).coefficients, [-2, -1])
    assert q_poly(LEGENDRE, 0).degree == LEGENDRE.n


@pytest.mark.parametrize("op", [D, XD_1, LEGENDRE, DifferentialOperator([[1, 2], [0, 3, 1], [2, 0, 0, -1]])])
def test_q_poly_against_hand_expansion(op):
    _, alpha = alpha_exponents(op)
    for ell in range(-op.n, alpha + 1):
        q = q_poly(op, ell)
        for k in (0.0, 1.0, 2.5, 7.0, 40.0):
            assert complex(q(k)) == pytest.approx(_q_by_hand(op, ell, k), rel=1e-13, abs=1e-13)


def test_poincare_condition():
    assert poincare_condition(D)
    assert not poincare_condition(DifferentialOperator([[0, -1], [1]]))
    assert poincare_condition(LEGENDRE)


def test_epsilon_recurrence_coeffs():
    assert epsilon_recurrence_coeffs([0, 1], 1) == (1, 0)
    assert epsilon_recurrence_coeffs([0, 1], 2) == (2, -1, 0, 0)
    assert epsilon_recurrence_coeffs([-1, 0, 1], 1) == (0, 1, 0)


@pytest.mark.parametrize("name", ["unit", "identity", "legendre_p2", "piecewise"])
def test_quadrature_against_closed_form(name):
    ms = moment_quadrature(corpus.CORPUS[name](), 100)
    exact = np.array([float(x) for x in corpus.exact_moments(name, 100)])
    np.testing.assert_allclose(ms.values.real, exact, rtol=0, atol=1e-12)
    assert np.all(ms.errors < 1e-12)


def test_quadrature_exponential():
    ms = moment_quadrature(corpus.exponential(), 60)
    np.testing.assert_allclose(ms.values.real, corpus.exp_moments(60), rtol=1e-12)


def test_identity_via_second_order_operator():
    g = PiecewiseDFiniteFunction(DifferentialOperator([[0], [0], [1]]), 0.0, 1.0, (), (Segment((0.0, 1.0)),))
    ms = moment_quadrature(g, 50)
    np.testing.assert_allclose(ms.values.real, [1 / (k + 2) for k in range(51)], atol=1e-13)


def test_singular_point_inside_segment():
    op = DifferentialOperator([[0], [-0.5, 1]])  # p_1 vanishes at 1/2
    g = PiecewiseDFiniteFunction(op, 0.0, 1.0, (), (Segment((1.0,)),))
    with pytest.raises(IntegrationError):
        moment_quadrature(g, 10)


def test_moment_csv_format():
    ms = MomentSequence(np.array([1.0, 0.5]), np.array([1e-16, 2e-16]))
    text = ms.to_csv()
    lines = text.split("\n")
    assert lines[0] == "k,m_k,error_estimate" and lines[-1] == "" and "\r" not in text
    assert lines[1] == "0,1,9.9999999999999998e-17"
    # 17 significant digits round-trip exactly
    assert [float(x) for x in lines[2].split(",")] == [1, 0.5, 2e-16]
    buf = io.StringIO()
    ms.to_csv(buf)
    assert buf.getvalue() == text


def test_epsilon_fit_unit_weight():
    g = corpus.unit()
    ms = moment_quadrature(g, 100)
    fit = epsilon_fit(g.operator, g.points, ms)
    np.testing.assert_allclose(fit.coefficients[:, 0].real, [1.0, -1.0], atol=1e-10)
    assert fit.residual < 1e-10 and not fit.flagged
    assert recurrence_residual(g.operator, ms.values, fit, range(0, 100)) < 1e-10
    b = epsilon_recurrence_coeffs(g.points, g.operator.n)
    assert epsilon_self_residual(fit.epsilon(range(0, 100)), b) < 1e-10


def test_epsilon_fit_identity_constant():
    g = corpus.identity()
    ms = moment_quadrature(g, 100)
    fit = epsilon_fit(g.operator, g.points, ms)
    assert fit.residual < 1e-10
    np.testing.assert_allclose(fit.epsilon(range(5, 60)), -1.0, atol=1e-10)


def test_epsilon_fit_zero_function():
    g = PiecewiseDFiniteFunction(D, 0.0, 1.0, (), (Segment((0.0,)),))
    ms = moment_quadrature(g, 40)
    fit = epsilon_fit(g.operator, g.points, ms)
    assert np.all(fit.coefficients == 0) and fit.residual == 0


def test_epsilon_fit_negative_control():
    g = corpus.legendre_p2()
    ms = moment_quadrature(g, 100)
    noisy = ms.values + 1e-3 * np.random.default_rng(0).standard_normal(ms.values.size)
    fit = epsilon_fit(g.operator, g.points, noisy)
    assert fit.flagged and fit.residual > 1e-6


def test_epsilon_fit_needs_distinct_points():
    g = corpus.unit()
    ms = moment_quadrature(g, 40)
    with pytest.raises(FitError):
        epsilon_fit(g.operator, (0.0, 0.0), ms)


def test_companion_unit_weight():
    s = companion_system(D, (0.0, 1.0))
    np.testing.assert_allclose(np.sort(s.eigenvalues().real), [0, 1], atol=1e-14)
    with pytest.raises(OperatorError):
        companion_system(DifferentialOperator([[0, -1], [1]]), (0.0, 1.0))


def test_variable_rows_converge_to_beta():
    s = companion_system(LEGENDRE, (-1.0, 1.0))
    md = s.moment_dim
    gaps = [np.max(np.abs(s.variable_matrix(k)[md - 1, :md] - s.A[md - 1, :md])) for k in (10, 100, 1000, 10_000)]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-3
    # beta_s = a_{s,n} / a_{d_n,n}: p_2 = 1 - x^2 gives (-1, 0)
    np.testing.assert_allclose(np.asarray(s.beta), [-1, 0])


def test_indicial_roots():
    rs, lam = indicial_roots_infinity(D)
    np.testing.assert_allclose(rs, [0], atol=1e-14)
    assert lam is None
    rs, lam = indicial_roots_infinity(XD_1)
    np.testing.assert_allclose(rs, [-2])
    assert lam is None
    # x D - 3: q_0(k) = -3 - (k + 1) has its root at -4
    rs, lam = indicial_roots_infinity(DifferentialOperator([[-3], [0, 1]]))
    np.testing.assert_allclose(rs, [-4])
    assert lam is None
    rs, lam = indicial_roots_infinity(DifferentialOperator([[4], [0, 1]]))
    np.testing.assert_allclose(rs, [3])
    assert lam == 3


def test_vanishing_bounds():
    assert has_nonsingular_jump(D, (0.0, 1.0))
    assert vanishing_bound(D, (0.0, 1.0), True) == 1
    assert not has_nonsingular_jump(LEGENDRE, (-1.0, 1.0))
    assert vanishing_bound(LEGENDRE, (-1.0, 1.0), False) == 3
    ms = moment_quadrature(corpus.legendre_p2(), 40)
    assert ms.leading_zero_count() == 2
    with pytest.raises(OperatorError):
        vanishing_bound(XD_1, (0.0, 1.0), False)


def test_fuchsian():
    assert fuchsian_check(LEGENDRE)
    assert not fuchsian_check(DifferentialOperator([[0, -1], [1]]))
    assert not fuchsian_check(DifferentialOperator([[1], [0, 0, 1]]))


def test_stieltjes_unit_weight():
    g = corpus.unit()
    rep = stieltjes_domination(g.operator, g.points, moment_quadrature(g, 200))
    assert rep.R_star == 1.0
    assert rep.root_test <= 1.0 and rep.root_test > 0.95


def test_stieltjes_radius_from_jumps_and_singularities():
    g = corpus.piecewise()
    assert g.points == (0.0, 0.5, 1.0)
    rep = stieltjes_domination(g.operator, g.points, moment_quadrature(g, 100))
    assert rep.R_star == pytest.approx(1.0)
    op = DifferentialOperator([[0], [-3, 1]])  # p_1 = x - 3, constants solve it
    h = PiecewiseDFiniteFunction(op, 0.0, 1.0, (), (Segment((1.0,)),))
    rep = stieltjes_domination(op, h.points, moment_quadrature(h, 100))
    assert rep.R_star == pytest.approx(1 / 3)
