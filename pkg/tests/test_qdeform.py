import numpy as np
import pytest

from relkin.errors import DomainError
from relkin.kinematics import momenta_from_counter_rapidity
from relkin.qdeform import (QParams, circle_length, counter_mass_from_wavelength, de_broglie_map,
                            frequency, integral_representation_check, kappa_state, q_bracket, quantized_ladder,
                            solve_mass_equation, wavelength)

EPSILON = 1e-12


def test_q_bracket():
    assert q_bracket(3, 2.0) == pytest.approx(5.25, rel=EPSILON)
    for q in (0.3, 1.7, 12.0):
        assert q_bracket(1, q) == 1.0
    assert q_bracket(4.5, 1.0) == 4.5
    assert q_bracket(4.5, 1.0 + 1e-9) == pytest.approx(4.5, rel=1e-8)
    with pytest.raises(DomainError):
        q_bracket(2, 0.0)


@pytest.mark.parametrize('K', [0.5, 0.9, 1.0])
def test_mass_equation_single_root(K):
    roots = solve_mass_equation(K, 1.0)
    assert roots.zero_root == 0.0
    assert roots.pm_roots is None


def test_mass_equation_three_roots():
    roots = solve_mass_equation(1.1, 2.0)
    assert abs(roots.y_exact - 0.555) < 0.005
    assert roots.y_cubic == pytest.approx(0.5222, abs=1e-4)
    assert roots.relative_gap < 0.1
    assert roots.residual <= 1e-12
    assert roots.pm_roots == (-2.0 * roots.y_exact, 2.0 * roots.y_exact)
    np.testing.assert_allclose(np.tanh(roots.y_exact), roots.y_exact / 1.1, atol=1e-14)

    roots = solve_mass_equation(1.001)
    assert roots.relative_gap < 1e-3

    roots = solve_mass_equation(50.0)
    assert roots.y_exact == pytest.approx(50.0, rel=1e-12)

    with pytest.raises(DomainError):
        solve_mass_equation(-1.0)


def test_kappa_state():
    rng = np.random.RandomState(0)
    for _ in range(100):
        mass, kappa, alpha = rng.uniform(0.01, 5), rng.uniform(0.1, 5), rng.uniform(0.1, 5)
        params = QParams(kappa, alpha)
        P, P0, v = kappa_state(mass, params, deformed=True)
        np.testing.assert_allclose(kappa / P, q_bracket(alpha, params.q(mass)), rtol=EPSILON)
        np.testing.assert_allclose(P / P0, v, rtol=EPSILON)

        # alpha = phi kappa gives back the counter-rapidity momenta
        phi = alpha / kappa
        P, P0, v = kappa_state(mass, params)
        state = momenta_from_counter_rapidity(mass, phi=phi)
        np.testing.assert_allclose([P, P0], [state.p, state.p0], rtol=EPSILON)


@pytest.mark.parametrize('mass', [0.0, 0.1, 1.0, 10.0])
def test_equal_momentum_point(mass):
    P, _, _ = kappa_state(mass, QParams(1.7, 1.0), deformed=True)
    assert P == 1.7


def test_kappa_state_anchors():
    P, P0, v = kappa_state(2.0, QParams(2.0, 1.0))
    np.testing.assert_allclose(P0, 2.0 / np.tanh(1.0), rtol=EPSILON)
    np.testing.assert_allclose(v, 0.6480542736638855, rtol=EPSILON)

    _, P0, _ = kappa_state(2.0, QParams(2.0, 1.0), deformed=True)
    np.testing.assert_allclose(P0, 2.0 * np.cosh(1.0), rtol=EPSILON)

    for deformed in (False, True):
        assert kappa_state(0.0, QParams(2.0, 4.0), deformed=deformed) == (0.5, 0.5, 1.0)

    v = [kappa_state(1.0, QParams.from_spin(1.0, J))[2] for J in (0, 0.5, 1, 1.5)]
    assert all(a > b for a, b in zip(v, v[1:]))

    with pytest.raises(DomainError):
        QParams(0.0, 1.0)
    with pytest.raises(DomainError):
        QParams(1.0, 2.0, J=1.0)


@pytest.mark.parametrize('mass,kappa,alpha,tol', [(1.0, 1.0, 2.0, 1e-10), (3.0, 1.0, 1.0, 1e-9),
                                                  (1.0, 1.0, 1e-6, 1e-12)])
def test_integral_representation(mass, kappa, alpha, tol):
    assert integral_representation_check(mass, kappa, alpha) < tol


def test_circle_length():
    np.testing.assert_allclose(circle_length(1.0, 1.0), 2 * np.pi * np.sinh(1.0), rtol=EPSILON)
    np.testing.assert_allclose(circle_length(3.0, 3.0), 3.0 * 7.3840, rtol=1e-4)
    flat = circle_length(1.0, 1e-4, 2.0)
    np.testing.assert_allclose(flat, 2 * np.pi * 1e-4 * 2.0, rtol=1e-6)
    np.testing.assert_allclose(circle_length(1.0, 1e-4, 4.0), 2 * flat, rtol=1e-6)
    with pytest.raises(DomainError):
        circle_length(0.0, 1.0)


def test_quantized_ladder():
    rows = quantized_ladder(1.0, 1.0, 2)
    assert [row.J for row in rows] == [0.0, 0.5, 1.0, 1.5, 2.0]
    assert all(a.v > b.v for a, b in zip(rows, rows[1:]))
    assert rows[0].direct_sum == 1.0
    np.testing.assert_allclose(rows[0].v, 1.0 / np.cosh(1.0), rtol=EPSILON)
    np.testing.assert_allclose(rows[1].direct_sum, np.e + 1.0 / np.e, rtol=EPSILON)
    np.testing.assert_allclose(rows[1].closed_form, 3.0861612696304874, rtol=EPSILON)
    assert [row.wavelength for row in rows] == [1.0, 2.0, 3.0, 4.0, 5.0]

    for row in quantized_ladder(0.3, 1.0, 5):
        np.testing.assert_allclose(row.direct_sum, row.closed_form, rtol=EPSILON)
    # the sum with exponent n m/kappa is a different number
    assert abs(rows[1].printed_sum - rows[1].closed_form) > 0.1

    with pytest.raises(DomainError):
        quantized_ladder(1.0, 1.0, 0.3)


def test_de_broglie_map():
    P0, P = de_broglie_map(1e-8, 1.0)
    assert abs(P0 - 1.0) < 1e-15 and abs(P - 1.0) < 1e-15

    P0, _ = de_broglie_map(2.0, 2.0)
    np.testing.assert_allclose(P0, 2.0 / np.tanh(1.0), rtol=EPSILON)

    planck, lam = 6.0, 0.25
    pi0 = counter_mass_from_wavelength(lam, planck)
    _, P = de_broglie_map(0.0, pi0)
    np.testing.assert_allclose(wavelength(P, planck), lam, rtol=EPSILON)

    assert frequency(3.0, planck=1.5) == 2.0
    # phase velocity nu lambda = P0 / P
    P0, P = de_broglie_map(1.0, 2.0)
    np.testing.assert_allclose(frequency(P0) * wavelength(P), P0 / P, rtol=EPSILON)
    assert frequency(P0) * wavelength(P) > 1.0
    with pytest.raises(DomainError):
        de_broglie_map(1.0, 0.0)
