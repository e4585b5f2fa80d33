import numpy as np
import pytest

from relkin.errors import DomainError
from relkin.halfplane import (HalfPlanePoint, companion_matrix, cross_ratio, distance, distance_closed_form,
                              g_evolution, geodesic_endpoints, mobius, momentum_distance_closed_form,
                              momentum_distance_cross_ratio, momentum_distance_integral, riccati_residual,
                              shell_mass, transfer_expm_residual, transfer_matrix, transfer_semigroup_residual,
                              translate_eigenvalues, u_recovery_residual)

EPSILON = 1e-12


def random_point(rng):
    return HalfPlanePoint(rng.uniform(-2, 2), rng.uniform(0.1, 2))


def test_cross_ratio():
    assert cross_ratio(3, 1, 2, 4) == pytest.approx(0.25, rel=EPSILON)

    z, z_star, w = 1j, 0.0, 2j
    exact = cross_ratio(w, z_star, z, np.inf)
    approx = cross_ratio(w, z_star, z, 1e8)
    assert abs(exact - approx) < 1e-7

    with pytest.raises(DomainError):
        cross_ratio(1, 1, 2, 3)
    with pytest.raises(DomainError):
        cross_ratio(np.inf, HalfPlanePoint.infinity(), 2, 3)


def test_cross_ratio_mobius_invariance():
    rng = np.random.RandomState(0)
    for _ in range(100):
        a, b, c = rng.uniform(-2, 2, 3)
        a = a if abs(a) > 0.1 else 1.0
        d = (1.0 + b * c) / a
        points = [complex(*rng.uniform([-2, 0.1], [2, 2])) for _ in range(4)]
        before = cross_ratio(*points)
        after = cross_ratio(*[mobius(z, a, b, c, d) for z in points])
        np.testing.assert_allclose(after, before, rtol=1e-10)


def test_geodesic_endpoints():
    z_star, w_star = geodesic_endpoints(1j, 2j)
    assert z_star == HalfPlanePoint(0.0, 0.0)
    assert w_star.at_infinity

    z_star, w_star = geodesic_endpoints(complex(-0.6, 0.8), complex(0.6, 0.8))
    np.testing.assert_allclose([z_star.re, w_star.re], [-1.0, 1.0], atol=EPSILON)

    swapped = geodesic_endpoints(complex(0.6, 0.8), complex(-0.6, 0.8))
    np.testing.assert_allclose([swapped[0].re, swapped[1].re], [1.0, -1.0], atol=EPSILON)
    assert geodesic_endpoints(2j, 1j) == (HalfPlanePoint.infinity(), HalfPlanePoint(0.0, 0.0))

    with pytest.raises(DomainError):
        geodesic_endpoints(1j, 1j)


def test_distance():
    np.testing.assert_allclose(distance(1j, 2j), np.log(2.0), rtol=EPSILON)
    np.testing.assert_allclose(distance(1j, 2j), np.arccosh(1.25), rtol=EPSILON)
    assert distance(1 + 1j, 1 + 1j) == 0.0

    rng = np.random.RandomState(1)
    for _ in range(500):
        z, w, u = random_point(rng), random_point(rng), random_point(rng)
        d = distance(z, w)
        np.testing.assert_allclose(d, distance_closed_form(z, w), rtol=1e-10, atol=1e-12)
        np.testing.assert_allclose(d, distance(w, z), rtol=1e-10)
        assert distance(z, u) + distance(u, w) - d >= -1e-12

    with pytest.raises(DomainError):
        distance(1.0, 2j)
    with pytest.raises(DomainError):
        HalfPlanePoint(0.0, -1.0)


def test_parse_point():
    assert HalfPlanePoint.parse('0,1') == HalfPlanePoint(0.0, 1.0)
    assert HalfPlanePoint.parse('-1.5, 2').value == complex(-1.5, 2.0)
    with pytest.raises(DomainError):
        HalfPlanePoint.parse('1;2')


def test_g_evolution():
    state = g_evolution(2.5, 4.0, 0.0)
    assert (state.g0, state.g1, state.U) == (1.0, 0.0, None)

    state = g_evolution(2.5, 4.0, 0.3)
    assert state.determinant_residual() < 1e-12
    np.testing.assert_allclose(2.5 - state.U, 1.5 / np.tanh(1.5 * 0.3), rtol=1e-12)
    assert state.mass == 1.5

    # confluent limit
    state = g_evolution(2.0, 4.0, 0.5)
    np.testing.assert_allclose(state.g1, 0.5 * np.exp(1.0), rtol=EPSILON)
    np.testing.assert_allclose(state.U, 2.0 - 1.0 / 0.5, atol=EPSILON)

    rng = np.random.RandomState(2)
    for _ in range(200):
        p0 = rng.uniform(-3, 3)
        p2 = p0 * p0 - rng.uniform(0, 4)
        phi = rng.uniform(0.5, 2)
        assert g_evolution(p0, p2, phi).determinant_residual() < 1e-10
        assert u_recovery_residual(p0, p2, phi) < 1e-10
        assert transfer_expm_residual(p0, p2, phi) < 1e-12
        assert transfer_semigroup_residual(p0, p2, phi, rng.uniform(0.1, 1)) < 1e-12

    with pytest.raises(DomainError):
        g_evolution(1.0, 2.0, 0.5)


def test_transfer_matrix():
    np.testing.assert_allclose(transfer_matrix(2.5, 4.0, 0.0), np.eye(2), atol=EPSILON)
    eigenvalues = np.sort(np.linalg.eigvals(companion_matrix(2.5, 4.0)).real)
    np.testing.assert_allclose(eigenvalues, [1.0, 4.0], rtol=EPSILON)


def test_riccati_residual():
    assert riccati_residual(2.5, 4.0, 0.5, 1e-5) < 1e-8
    assert riccati_residual(2.0, 4.0, 0.5, 1e-5) < 1e-8

    ratio = riccati_residual(2.5, 4.0, 0.5, 1e-3) / riccati_residual(2.5, 4.0, 0.5, 5e-4)
    assert 3.2 < ratio < 4.8

    with pytest.raises(DomainError):
        riccati_residual(2.5, 4.0, 1e-6, 1e-5)


def test_translate_eigenvalues():
    p0, p2 = translate_eigenvalues(2.5, 4.0, 0.7)
    assert p0 == pytest.approx(3.2, rel=EPSILON)
    np.testing.assert_allclose(shell_mass(p0, p2), 1.5, rtol=1e-12)
    np.testing.assert_allclose(sorted(np.roots([1, -2 * p0, p2])), [1.7, 4.7], rtol=1e-12)


def test_momentum_distance():
    np.testing.assert_allclose(momentum_distance_integral(2.0, 3.0, 2.5, 4.0), 2 * np.log(2.0), rtol=1e-10)
    np.testing.assert_allclose(momentum_distance_closed_form(2.0, 3.0, 2.5, 4.0), 2 * np.log(2.0), rtol=EPSILON)
    np.testing.assert_allclose(momentum_distance_cross_ratio(2.0, 3.0, 2.5, 4.0), 2 * np.log(2.0), rtol=EPSILON)
    assert momentum_distance_integral(2.0, 2.0, 2.5, 4.0) == 0.0

    rng = np.random.RandomState(3)
    for _ in range(50):
        p0, m = rng.uniform(-2, 2), rng.uniform(0.5, 2)
        p2 = p0 * p0 - m * m
        zl, wl = np.sort(rng.uniform(p0 - 0.9 * m, p0 + 0.9 * m, 2))
        integral = momentum_distance_integral(zl, wl, p0, p2)
        np.testing.assert_allclose(integral, momentum_distance_closed_form(zl, wl, p0, p2), atol=1e-8)
        np.testing.assert_allclose(integral, momentum_distance_cross_ratio(zl, wl, p0, p2), atol=1e-8)

        # affine change of variables applied to segment and roots together
        a, b = rng.uniform(0.5, 2), rng.uniform(-1, 1)
        moved = momentum_distance_integral(a * zl + b, a * wl + b, a * p0 + b, (a * p0 + b) ** 2 - (a * m) ** 2)
        np.testing.assert_allclose(moved, integral, atol=1e-8)

    with pytest.raises(DomainError):
        momentum_distance_integral(1.0, 3.0, 2.5, 4.0)
