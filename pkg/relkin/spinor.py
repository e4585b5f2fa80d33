from dataclasses import dataclass

import numpy as np

from relkin.errors import DomainError, PreconditionError
from relkin.kinematics import momenta_from_counter_rapidity

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])
I2 = np.eye(2, dtype=complex)
ZERO2 = np.zeros((2, 2), dtype=complex)

# unitary, Hermitian and its own inverse
BASIS_CHANGE = np.block([[I2, I2], [I2, -I2]]) / np.sqrt(2.0)

EIGENVECTOR_TOLERANCE = 1e-10
CONVENTIONS = ('half', 'full')


@dataclass(eq=False)
class SpinorPair:
    """
    Right and left two-component spinors with the momentum they were built for.
    :param xi_R: right-handed spinor
    :param xi_L: left-handed spinor
    :param mass: rest mass
    :param p0: energy
    :param P: momentum 3-vector
    """
    xi_R: np.ndarray
    xi_L: np.ndarray
    mass: float
    p0: float
    P: np.ndarray

    @property
    def bispinor(self):
        return np.concatenate([self.xi_R, self.xi_L])


@dataclass(frozen=True, eq=False)
class ChiralBasisMaps:
    S: np.ndarray
    gamma5: np.ndarray


@dataclass(frozen=True)
class WeylReport:
    right_residual: float
    left_residual: float
    eigenvalues: tuple
    parity_eigenvalues: tuple

    @property
    def parity_violated(self):
        return self.eigenvalues != self.parity_eigenvalues


@dataclass(frozen=True)
class HalfAngleReport:
    equation_residuals: tuple
    corrected_matrix_residual: float
    printed_matrix_residual: float


def sigma_dot(P):
    P = np.asarray(P)
    return np.tensordot(P, PAULI, axes=1)


def standard_gamma_matrices():
    """Dirac representation: gamma^0 = diag(1, -1), gamma^k off-diagonal in +-sigma_k."""
    gammas = [np.block([[I2, ZERO2], [ZERO2, -I2]])]
    for sigma in PAULI:
        gammas.append(np.block([[ZERO2, sigma], [-sigma, ZERO2]]))
    return np.stack(gammas)


def chiral_gamma_matrices():
    """Chiral representation, obtained from the standard one by the basis change S."""
    S = BASIS_CHANGE
    return np.stack([S @ gamma @ S for gamma in standard_gamma_matrices()])


def chiral_basis_maps():
    g0, g1, g2, g3 = chiral_gamma_matrices()
    return ChiralBasisMaps(S=BASIS_CHANGE, gamma5=1j * g0 @ g1 @ g2 @ g3)


def helicity_spinor(direction, helicity=1):
    """
    Eigenvector of sigma.n with eigenvalue `helicity`, fixed phase from the spherical angles of n.
    """
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    theta = np.arccos(np.clip(n[2], -1.0, 1.0))
    azimuth = np.arctan2(n[1], n[0])
    if helicity == 1:
        return np.array([np.cos(theta / 2), np.exp(1j * azimuth) * np.sin(theta / 2)])
    if helicity == -1:
        return np.array([-np.exp(-1j * azimuth) * np.sin(theta / 2), np.cos(theta / 2)])
    raise DomainError(f'helicity must be +1 or -1, got {helicity}')


def spinor_helicity(spinor, direction):
    """
    Return the sigma.n eigenvalue of `spinor`; PreconditionError if it is not an eigenvector.
    """
    xi = np.asarray(spinor, dtype=complex)
    norm = np.linalg.norm(xi)
    if norm == 0:
        raise PreconditionError('spinor is zero')
    n = np.asarray(direction, dtype=float)
    image = sigma_dot(n / np.linalg.norm(n)) @ xi
    for helicity in (1, -1):
        if np.linalg.norm(image - helicity * xi) <= EIGENVECTOR_TOLERANCE * norm:
            return helicity
    raise PreconditionError('spinor is not a helicity eigenvector along the given direction')


def boost_spinors(mass, P, xi0):
    """
    Boost a rest spinor to momentum P:
    xi_R = (P0 + m + sigma.P) xi0 / N, xi_L = (P0 + m - sigma.P) xi0 / N, N = sqrt(2m (P0 + m))
    """
    if not mass > 0:
        raise DomainError(f'spinor boost needs mass > 0, got {mass}')
    P = np.asarray(P, dtype=float)
    if not np.all(np.isfinite(P)):
        raise DomainError('momentum must be finite')
    xi0 = np.asarray(xi0, dtype=complex)
    if np.linalg.norm(xi0) == 0:
        raise DomainError('rest spinor must be nonzero')

    p0 = np.sqrt(mass * mass + P @ P)
    norm = np.sqrt(2.0 * mass * (p0 + mass))
    sp = sigma_dot(P)
    xi_R = ((p0 + mass) * I2 + sp) @ xi0 / norm
    xi_L = ((p0 + mass) * I2 - sp) @ xi0 / norm
    return SpinorPair(xi_R, xi_L, mass, p0, P)


def dirac_block(mass, p0, P):
    """Chiral Dirac operator [[-m, P0 + sigma.P], [P0 - sigma.P, -m]] in momentum space."""
    sp = sigma_dot(P)
    return np.block([[-mass * I2, p0 * I2 + sp], [p0 * I2 - sp, -mass * I2]])


def standard_dirac_operator(mass, p0, P):
    """P0 gamma^0 - P^k gamma^k - m in the standard representation."""
    gammas = standard_gamma_matrices()
    return p0 * gammas[0] - np.tensordot(np.asarray(P), gammas[1:], axes=1) - mass * np.eye(4)


def coupled_residuals(pair):
    """
    (|m xi_R - (P0 + sigma.P) xi_L|, |m xi_L - (P0 - sigma.P) xi_R|)
    """
    sp = sigma_dot(pair.P)
    res_R = pair.mass * pair.xi_R - (pair.p0 * I2 + sp) @ pair.xi_L
    res_L = pair.mass * pair.xi_L - (pair.p0 * I2 - sp) @ pair.xi_R
    return np.linalg.norm(res_R), np.linalg.norm(res_L)


def chiral_dirac_residual(pair):
    """Block sup-norm of the chiral Dirac operator applied to (xi_R, xi_L)."""
    image = dirac_block(pair.mass, pair.p0, pair.P) @ pair.bispinor
    return max(np.linalg.norm(image[:2]), np.linalg.norm(image[2:]))


def _x_coth(x):
    return 1.0 if x == 0 else x / np.tanh(x)


def split_eigenvalues(mass, phi, convention='half'):
    """
    Eigenvalues of the split equations: m coth(x), m tanh(x) with x = m phi / 2 ('half')
    or x = m phi ('full'). At m = 0 they tend to (1/x) scaled limits, e.g. (2/phi, 0) for 'half'.
    """
    if convention not in CONVENTIONS:
        raise DomainError(f'unknown eigenvalue convention {convention!r}')
    if not phi > 0:
        raise DomainError(f'phi must be positive, got {phi}')
    scale = 0.5 if convention == 'half' else 1.0
    x = mass * phi * scale
    return _x_coth(x) / (phi * scale), mass * np.tanh(x)


def _counter_momentum(mass, phi, direction):
    state = momenta_from_counter_rapidity(mass, phi=phi)
    n = np.asarray(direction, dtype=float)
    return state.p0, state.p * n / np.linalg.norm(n)


def split_dirac_residuals(mass, phi, direction, spinor, convention='half'):
    """
    Residuals of (P0 + sigma.P) xi = lambda_L xi and (P0 - sigma.P) xi = lambda_R xi with P0, P
    from the counter-rapidity chi = m phi.
    :param spinor: sigma.n eigenvector
    :param convention: 'half' for m coth(m phi / 2), 'full' for m coth(m phi)
    :return: (res_L, res_R)
    """
    if mass < 0:
        raise DomainError(f'mass must be non-negative, got {mass}')
    spinor_helicity(spinor, direction)
    xi = np.asarray(spinor, dtype=complex)
    p0, P = _counter_momentum(mass, phi, direction)
    lam_L, lam_R = split_eigenvalues(mass, phi, convention)
    sp = sigma_dot(P)
    res_L = np.linalg.norm((p0 * I2 + sp) @ xi - lam_L * xi)
    res_R = np.linalg.norm((p0 * I2 - sp) @ xi - lam_R * xi)
    return res_L, res_R


def massless_weyl_check(pi0, direction):
    """
    Decoupled massless equations: sigma.n xi_R = xi_R, sigma.n xi_L = -xi_L, and the eigenvalue pair
    (2 pi0, 0) of the split equations, which the parity image P -> -P turns into (0, 2 pi0).
    """
    if not pi0 > 0:
        raise DomainError(f'pi0 must be positive, got {pi0}')
    n = np.asarray(direction, dtype=float)
    n = n / np.linalg.norm(n)
    sn = sigma_dot(n)
    xi_R = helicity_spinor(n, 1)
    xi_L = helicity_spinor(n, -1)

    P = pi0 * n
    xi = xi_R

    def eigenvalues(momentum):
        sp = sigma_dot(momentum)
        lam_L = np.vdot(xi, (pi0 * I2 + sp) @ xi).real
        lam_R = np.vdot(xi, (pi0 * I2 - sp) @ xi).real
        return float(np.round(lam_L, 12)) + 0.0, float(np.round(lam_R, 12)) + 0.0

    return WeylReport(right_residual=np.linalg.norm(sn @ xi_R - xi_R),
                      left_residual=np.linalg.norm(sn @ xi_L + xi_L),
                      eigenvalues=eigenvalues(P),
                      parity_eigenvalues=eigenvalues(-P))


def weyl_limit_residuals(mass, pi0, direction):
    """
    Distance of the massive split equations (phi = 1/pi0) from the massless pair (2 pi0, 0),
    measured on the positive-helicity spinor.
    """
    phi = 1.0 / pi0
    xi = helicity_spinor(direction, 1)
    p0, P = _counter_momentum(mass, phi, direction)
    sp = sigma_dot(P)
    res_L = np.linalg.norm((p0 * I2 + sp) @ xi - 2.0 * pi0 * xi)
    res_R = np.linalg.norm((p0 * I2 - sp) @ xi)
    return res_L, res_R


def completed_dirac_residual(mass, pi0, direction, spinors, convention='full'):
    """
    Residuals of (P0 + sigma.P) Psi1 = m coth(m/pi0) Psi1 and (P0 - sigma.P) Psi2 = m tanh(m/pi0) Psi2
    with phi = 1/pi0. convention='half' uses the half-angle eigenvalues instead.
    :param spinors: (Psi1, Psi2)
    """
    if not mass > 0 or not pi0 > 0:
        raise DomainError(f'need mass > 0 and pi0 > 0, got {mass}, {pi0}')
    phi = 1.0 / pi0
    psi1, psi2 = (np.asarray(s, dtype=complex) for s in spinors)
    p0, P = _counter_momentum(mass, phi, direction)
    lam1, lam2 = split_eigenvalues(mass, phi, convention)
    sp = sigma_dot(P)
    return (np.linalg.norm((p0 * I2 + sp) @ psi1 - lam1 * psi1),
            np.linalg.norm((p0 * I2 - sp) @ psi2 - lam2 * psi2))


def half_angle_system(mass, chi):
    """
    The pair (P0 + m) e^{-chi/2} = P e^{chi/2}, (P0 - m) e^{chi/2} = P e^{-chi/2} and its matrix form
    acting on (e^{-chi/2}, e^{chi/2}), with the off-diagonal sign that makes it vanish and as printed
    with both off-diagonal entries +P.
    """
    state = momenta_from_counter_rapidity(mass, chi)
    p0, p = state.p0, state.p
    lo, hi = np.exp(-chi / 2), np.exp(chi / 2)
    equations = (abs((p0 + mass) * lo - p * hi), abs((p0 - mass) * hi - p * lo))
    vector = np.array([lo, hi])
    corrected = np.array([[p0 + mass, -p], [-p, p0 - mass]]) @ vector
    printed = np.array([[p0 + mass, p], [p, p0 - mass]]) @ vector
    return HalfAngleReport(equations, np.linalg.norm(corrected), np.linalg.norm(printed))


def half_shift_identity(z):
    """|coth(z + i pi/2) - tanh(z)|"""
    z = complex(z)
    return abs(1.0 / np.tanh(z + 0.5j * np.pi) - np.tanh(z))


def full_period_shift(chi):
    """
    Effect of chi -> chi + shift on the momenta (coth chi, 1/sinh chi) and on the half-angle pair.
    :return: dict of residuals; 'exchange_2pi' is not small because the i2pi shift leaves
        coth(chi/2) unchanged, the exchange happens under i pi
    """
    chi = complex(chi)
    shifted = chi + 2j * np.pi
    half = chi + 1j * np.pi
    return {
        'momenta_invariance_2pi': max(abs(1 / np.tanh(shifted) - 1 / np.tanh(chi)),
                                      abs(1 / np.sinh(shifted) - 1 / np.sinh(chi))),
        'exchange_2pi': abs(1 / np.tanh(shifted / 2) - np.tanh(chi / 2)),
        'exchange_pi': abs(1 / np.tanh(half / 2) - np.tanh(chi / 2)),
        'momentum_sign_pi': abs(1 / np.sinh(half) + 1 / np.sinh(chi)),
    }
