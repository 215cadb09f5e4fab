import numpy as np
import pytest

import geninv as gi
from geninv import families
from geninv.calculus import MatrixCurve
from geninv.errors import ExistenceError, InputError


def test_bc_derivative_scalar_reciprocal():
    # a(t) = t with b = c = 1: the inverse is 1/t, derivative -1 at t = 1
    d = gi.bc_derivative([[1.0]], [[1.0]], [[1.0]], [[0.0]], [[0.0]])
    assert d[0, 0] == pytest.approx(-1.0)


def test_bc_derivative_constant_curve_is_zero():
    z = np.zeros((3, 3))
    x = np.diag([1.0, 0.5, 0.0])
    assert np.allclose(gi.bc_derivative(x, np.diag([1.0, 2.0, 3.0]), z, z, z), z)


def test_bc_derivative_invertible_diagonal():
    # a(t) = diag(t, 1) with b = c = I at t0 = 2: derivative of diag(1/t, 1)
    a0 = np.diag([2.0, 1.0])
    x0 = np.diag([0.5, 1.0])
    aprime = np.diag([1.0, 0.0])
    z = np.zeros((2, 2))
    d = gi.bc_derivative(x0, a0, aprime, z, z)
    assert np.allclose(d, np.diag([-0.25, 0.0]))


def test_mp_derivative_examples():
    # a(t) = t I at t0 = 1
    n = 3
    d = gi.mp_derivative(np.eye(n), np.eye(n), np.eye(n), np.zeros((n, n)), np.zeros((n, n)))
    assert np.allclose(d, -np.eye(n))
    z = np.zeros((2, 2))
    assert np.allclose(gi.mp_derivative(np.diag([2.0, 0.0]), np.diag([0.5, 0.0]), z, z, z), z)
    # a(t) = diag(t, 0) at t0 = 2: derivative of diag(1/t, 0)
    d = gi.mp_derivative(
        np.diag([2.0, 0.0]), np.diag([0.5, 0.0]), np.diag([1.0, 0.0]), z, z
    )
    assert np.allclose(d, np.diag([-0.25, 0.0]))


def test_oip_derivative_zero_primes():
    x = np.diag([1.0, 0.0])
    z = np.zeros((2, 2))
    assert np.allclose(gi.oip_derivative(x, np.eye(2), z, z, z), z)


def test_oip_derivative_rotating_range():
    # the outer inverse of I on a rotating orthogonal pair is the projector itself,
    # so the formula must reproduce the projector derivative
    def proj(t):
        v = np.array([[np.cos(t)], [np.sin(t)]])
        return v @ v.T

    pprime = np.array([[0.0, 1.0], [1.0, 0.0]])  # d/dt proj at t = 0
    x0 = np.diag([1.0, 0.0])
    d = gi.oip_derivative(x0, np.eye(2), np.zeros((2, 2)), pprime, -pprime)
    assert np.allclose(d, pprime)
    fd = (proj(1e-6) - proj(-1e-6)) / 2e-6
    assert np.allclose(d, fd, atol=1e-9)


def test_fd_check_constant_curves_exact():
    a = np.diag([1.0, 2.0, 3.0])
    curve = MatrixCurve(lambda t: a, (-1.0, 1.0), "a")
    report = gi.finite_difference_check([curve], 0.0, kind="mp")
    assert report.observed_order == "exact"
    assert all(err <= 1e-10 for _, err in report.fd_errors)


def test_fd_check_scalar_reciprocal():
    dom = (0.5, 1.5)
    curves = [
        MatrixCurve(lambda t: np.array([[t]]), dom, "a"),
        MatrixCurve(lambda t: np.array([[1.0]]), dom, "b"),
        MatrixCurve(lambda t: np.array([[1.0]]), dom, "c"),
    ]
    report = gi.finite_difference_check(curves, 1.0, kind="bc")
    assert report.formula_derivative[0, 0] == pytest.approx(-1.0, abs=1e-9)
    assert report.observed_order == "exact" or report.observed_order > 1.8
    assert report.fd_errors[-1][1] <= 1e-9


def test_fd_check_rotating_projector_pair():
    def p_eval(t):
        v = np.array([[np.cos(t)], [np.sin(t)]])
        return v @ v.T

    def q_eval(t):
        v = np.array([[-np.sin(t)], [np.cos(t)]])
        return v @ v.T

    dom = (-1.0, 1.0)
    curves = [
        MatrixCurve(lambda t: np.eye(2), dom, "a"),
        MatrixCurve(p_eval, dom, "p"),
        MatrixCurve(q_eval, dom, "q"),
    ]
    report = gi.finite_difference_check(curves, 0.0, kind="oip")
    assert np.allclose(
        report.formula_derivative, np.array([[0.0, 1.0], [1.0, 0.0]]), atol=1e-9
    )
    assert report.observed_order == "exact" or report.observed_order > 1.8


def test_fd_check_orders(rng):
    curves = families.bc_curves(rng, 5, 3)
    report = gi.finite_difference_check(curves, 0.0, kind="bc")
    assert report.observed_order > 1.8
    report = gi.finite_difference_check([families.mp_curve(rng, 6, 4, 2)], 0.0, kind="mp")
    assert report.observed_order > 1.8
    report = gi.finite_difference_check(families.oip_curves(rng, 6, 5, 3), 0.0, kind="oip")
    assert report.observed_order > 1.8


def test_fd_check_reports_curve_leaving_solvable_set():
    dom = (-1.0, 1.0)
    curves = [
        MatrixCurve(lambda t: np.diag([t, 1.0]), dom, "a"),
        MatrixCurve(lambda t: np.eye(2), dom, "b"),
        MatrixCurve(lambda t: np.eye(2), dom, "c"),
    ]
    # the widest step reaches t = 0 where a(t) is singular
    with pytest.raises(ExistenceError, match="curve leaves invertible set"):
        gi.finite_difference_check(curves, 1e-2, kind="bc")


def test_fd_check_domain_validation():
    curve = MatrixCurve(lambda t: np.eye(2), (-1e-3, 1e-3), "a")
    with pytest.raises(InputError, match="domain"):
        gi.finite_difference_check([curve], 0.0, kind="mp")


def test_derivative_independent_of_inner_inverse_choice(rng):
    # any differentiable inner-inverse curves give the same derivative value
    n = 5
    a_c, b_c, c_c = families.bc_curves(rng, n, 3)
    u1 = families.random_matrix(rng, n, n)
    u2 = families.random_matrix(rng, n, n)
    u3 = families.random_matrix(rng, n, n)
    u4 = families.random_matrix(rng, n, n)

    def exotic(curve, left, right):
        def evaluate(t):
            m = curve(t)
            pinv = gi.moore_penrose(m).inverse
            eye = np.eye(n)
            return pinv + (eye - pinv @ m) @ left + right @ (eye - m @ pinv)

        return MatrixCurve(evaluate, curve.domain, "exotic")

    base = gi.finite_difference_check([a_c, b_c, c_c], 0.0, kind="bc")
    alt = gi.finite_difference_check(
        [a_c, b_c, c_c],
        0.0,
        kind="bc",
        g_curve=exotic(b_c, u1, u2),
        h_curve=exotic(c_c, u3, u4),
    )
    diff = gi.spectral_norm(base.formula_derivative - alt.formula_derivative)
    assert diff <= 1e-9 * max(1.0, gi.spectral_norm(base.formula_derivative))
    assert alt.observed_order == "exact" or alt.observed_order > 1.8


def test_derivative_product_rule_for_projector_curves(rng):
    # feeding (c^+)' c + c^+ c' for (c^+ c)' reproduces the same derivative
    n = 4
    a_c, b_c, c_c = families.bc_curves(rng, n, 2, complex_=True)
    h_ref = 1e-5

    def central(f, _t0):
        return (f(h_ref) - f(-h_ref)) / (2.0 * h_ref)

    cdag = lambda t: gi.moore_penrose(c_c(t)).inverse
    bdag = lambda t: gi.moore_penrose(b_c(t)).inverse
    x0 = gi.bc_inverse(a_c(0.0), b_c(0.0), c_c(0.0)).inverse
    a0 = a_c(0.0)
    aprime = central(a_c, 0.0)
    hc_prime_direct = central(lambda t: cdag(t) @ c_c(t), 0.0)
    hc_prime_product = central(cdag, 0.0) @ c_c(0.0) + cdag(0.0) @ central(c_c, 0.0)
    bg_prime_direct = central(lambda t: b_c(t) @ bdag(t), 0.0)
    bg_prime_product = central(b_c, 0.0) @ bdag(0.0) + b_c(0.0) @ central(bdag, 0.0)
    d1 = gi.bc_derivative(x0, a0, aprime, hc_prime_direct, bg_prime_direct)
    d2 = gi.bc_derivative(x0, a0, aprime, hc_prime_product, bg_prime_product)
    assert gi.spectral_norm(d1 - d2) <= 1e-9 * max(1.0, gi.spectral_norm(d1))


def test_difference_identity_same_instance_vanishes(rng):
    a, t, s = families.random_outer_instance(rng, 5, 4, 2)
    x = gi.outer_prescribed(a, t, s).inverse
    pt = gi.oblique_projector(t, gi.orthogonal_complement(t))
    ps = gi.oblique_projector(s, gi.orthogonal_complement(s))
    assert gi.difference_identity_residual(a, a, x, x, pt, pt, ps, ps) <= 1e-13


def test_difference_identity_random_pairs(rng):
    for _ in range(10):
        m, n = int(rng.integers(2, 7)), int(rng.integers(2, 7))
        rank = int(rng.integers(1, min(m, n) + 1))
        complex_ = bool(rng.integers(2))
        a, t, s = families.random_outer_instance(rng, m, n, rank, complex_)
        b, v, u = families.random_outer_instance(rng, m, n, rank, complex_)
        ainv = gi.outer_prescribed(a, t, s).inverse
        binv = gi.outer_prescribed(b, v, u).inverse
        pt = gi.oblique_projector(t, gi.orthogonal_complement(t))
        pv = gi.oblique_projector(v, gi.orthogonal_complement(v))
        ps = gi.oblique_projector(s, gi.orthogonal_complement(s))
        pu = gi.oblique_projector(u, gi.orthogonal_complement(u))
        scale = 1.0 + sum(
            gi.spectral_norm(z) for z in (a, b, ainv, binv)
        )
        assert gi.difference_identity_residual(a, b, ainv, binv, pt, pv, ps, pu) <= 1e-12 * scale


def test_difference_identity_reduces_to_resolvent(rng):
    # with full range and zero null space the identity is the classical
    # second-resolvent form b^-1 - a^-1 = -b^-1 (b - a) a^-1
    n = 4
    a = families.random_conditioned(rng, n) + 0.5 * np.eye(n)
    b = a + 0.1 * families.random_matrix(rng, n, n)
    full = gi.full_subspace(n)
    zero = gi.trivial_subspace(n)
    p_full = gi.oblique_projector(full, zero)
    p_zero = gi.oblique_projector(zero, full)
    residual = gi.difference_identity_residual(
        a, b, np.linalg.inv(a), np.linalg.inv(b), p_full, p_full, p_zero, p_zero
    )
    assert residual <= 1e-12
    lhs = np.linalg.inv(b) - np.linalg.inv(a)
    rhs = -np.linalg.inv(b) @ (b - a) @ np.linalg.inv(a)
    assert gi.spectral_norm(lhs - rhs) <= 1e-12
