import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import bisect, newton

from relkin.errors import ConvergenceError, DomainError
from relkin.kinematics import momenta_from_counter_rapidity

logger = logging.getLogger(__name__)

# Root Solver
BRACKET_LOW = 1e-12
BRACKET_SCALE = 1.5
NEWTON_STEPS = 5
ROOT_RESIDUAL = 1e-14

LADDER_COLUMNS = ('J', 'alpha', 'v', 'lambda')


@dataclass(frozen=True)
class QParams:
    """
    :param kappa: mass-unit parameter, > 0
    :param alpha: dimensionless parameter, > 0
    :param J: optional half-integer with alpha = 2J + 1
    :param planck: Planck constant h
    """
    kappa: float
    alpha: float
    J: Optional[float] = None
    planck: float = 1.0

    def __post_init__(self):
        if not self.kappa > 0:
            raise DomainError(f'kappa must be positive, got {self.kappa}')
        if not self.alpha > 0:
            raise DomainError(f'alpha must be positive, got {self.alpha}')
        if self.J is not None and self.alpha != 2 * self.J + 1:
            raise DomainError(f'alpha={self.alpha} does not match J={self.J}')

    @classmethod
    def from_spin(cls, kappa, J, planck=1.0):
        J = float(_half_integer(J))
        return cls(kappa, 2 * J + 1, J, planck)

    def q(self, mass):
        return np.exp(mass / self.kappa)


@dataclass(frozen=True)
class MassRoots:
    """
    Solutions m = y pi0 of m / (K pi0) = tanh(m / pi0).
    pm_roots is None when K <= 1, otherwise the masses (-y pi0, +y pi0).
    """
    K: float
    pi0: float
    zero_root: float = 0.0
    pm_roots: Optional[Tuple[float, float]] = None
    y_exact: Optional[float] = None
    y_cubic: Optional[float] = None
    relative_gap: Optional[float] = None
    residual: Optional[float] = None


@dataclass(frozen=True)
class LadderRow:
    J: float
    alpha: float
    v: float
    wavelength: float
    direct_sum: float
    closed_form: float
    printed_sum: float


def _half_integer(J):
    value = Fraction(J).limit_denominator(2)
    if value < 0 or value.denominator not in (1, 2) or value != Fraction(J):
        raise DomainError(f'J must be a non-negative half-integer, got {J}')
    return value


def q_bracket_from_log(N, x):
    """(N)_q with q = e^x, i.e. sinh(N x) / sinh(x); N at x = 0."""
    if x == 0:
        return float(N)
    return np.sinh(N * x) / np.sinh(x)


def q_bracket(N, q):
    """
    (q^N - q^-N) / (q - q^-1), the q-deformation of N. Tends to N as q -> 1.
    """
    if not q > 0:
        raise DomainError(f'deformation parameter must be positive, got {q}')
    return q_bracket_from_log(N, np.log(q))


def solve_mass_equation(K, pi0=1.0):
    """
    Roots of tanh(y) = y / K, y = m / pi0. K <= 1 leaves only y = 0; K > 1 adds the pair +-y found by
    bisection on [BRACKET_LOW, BRACKET_SCALE K] and a Newton polish, and the small-mass estimate
    y = sqrt(3) sqrt(1 - 1/K).
    :return: MassRoots
    """
    if not K > 0 or not pi0 > 0:
        raise DomainError(f'need K > 0 and pi0 > 0, got K={K}, pi0={pi0}')
    if K <= 1:
        return MassRoots(K, pi0)

    def f(y):
        return np.tanh(y) - y / K

    def fprime(y):
        return 1.0 / np.cosh(y) ** 2 - 1.0 / K

    y = bisect(f, BRACKET_LOW, BRACKET_SCALE * K, xtol=1e-15, maxiter=200)
    logger.debug('bisection root %.17g for K=%g', y, K)
    polished, info = newton(f, y, fprime=fprime, maxiter=NEWTON_STEPS, full_output=True, disp=False)
    if np.isfinite(polished) and abs(f(polished)) <= abs(f(y)):
        y = polished
    else:
        logger.debug('newton polish did not improve on bisection: %s', info.flag)

    residual = abs(f(y))
    if residual > ROOT_RESIDUAL:
        raise ConvergenceError(f'mass equation residual {residual:.3e} above {ROOT_RESIDUAL:.0e} for K={K}')

    y_cubic = np.sqrt(3.0) * np.sqrt(1.0 - 1.0 / K)
    return MassRoots(K, pi0, pm_roots=(-y * pi0, y * pi0), y_exact=y, y_cubic=y_cubic,
                     relative_gap=abs(y - y_cubic) / y, residual=residual)


def kappa_state(mass, params, deformed=False):
    """
    Energy-momentum in the kappa/alpha parametrisation, x = (m / kappa) alpha.
    Undeformed: P = m / sinh(x), P0 = m coth(x). Deformed: P = kappa / (alpha)_q with q = exp(m / kappa),
    P0 = kappa sinh(m / kappa) coth(x). Both have v = 1 / cosh(x) and tend to P = P0 = kappa / alpha at m = 0.
    :return: (P, P0, v)
    """
    if mass < 0:
        raise DomainError(f'mass must be non-negative, got {mass}')
    kappa, alpha = params.kappa, params.alpha
    u = mass / kappa
    x = u * alpha
    v = 1.0 / np.cosh(x)
    if deformed:
        P = kappa / q_bracket_from_log(alpha, u)
        return P, P / v, v
    scale = kappa / alpha
    if x == 0:
        return scale, scale, v
    return scale * x / np.sinh(x), scale * x / np.tanh(x), v


def integral_representation_check(mass, kappa, alpha):
    """
    |integral of exp(2 (m/kappa) x) over [-alpha/2, alpha/2] - kappa / P|
    """
    if not mass > 0:
        raise DomainError(f'mass must be positive, got {mass}')
    u = mass / kappa
    value, _ = quad(lambda x: np.exp(2.0 * u * x), -alpha / 2, alpha / 2, epsabs=1e-13, epsrel=1e-13)
    P, _, _ = kappa_state(mass, QParams(kappa, alpha))
    return abs(value - kappa / P)


def circle_length(kappa, radius_mass, alpha=1.0):
    """Length 2 pi kappa sinh((m/kappa) alpha) of a circle of radius m alpha at curvature 1/kappa."""
    if not (kappa > 0 and radius_mass > 0 and alpha > 0):
        raise DomainError('circle length needs positive kappa, radius and alpha')
    return 2.0 * np.pi * kappa * np.sinh(radius_mass / kappa * alpha)


def quantized_ladder(mass, kappa, J_max, planck=1.0):
    """
    Rows for J = 0, 1/2, ..., J_max with alpha = 2J + 1: velocity 1 / cosh((m/kappa) alpha), wavelength
    (h / kappa) alpha, and the finite sum over n = -J..J of exp(2 n m/kappa) next to its closed form
    sinh(alpha x) / sinh(x). printed_sum uses exponent n m/kappa instead.
    """
    if mass < 0 or not kappa > 0:
        raise DomainError(f'need mass >= 0 and kappa > 0, got {mass}, {kappa}')
    J_max = _half_integer(J_max)
    x = mass / kappa

    rows = []
    for twice_J in range(int(2 * J_max) + 1):
        J = Fraction(twice_J, 2)
        alpha = 2 * J + 1
        n = np.array([float(-J + k) for k in range(int(alpha))])
        rows.append(LadderRow(J=float(J), alpha=float(alpha), v=1.0 / np.cosh(x * float(alpha)),
                              wavelength=planck / kappa * float(alpha),
                              direct_sum=float(np.sum(np.exp(2.0 * n * x))),
                              closed_form=q_bracket_from_log(float(alpha), x),
                              printed_sum=float(np.sum(np.exp(n * x)))))
    return rows


def de_broglie_map(mass, pi0):
    """
    Map the massless energy-momentum pi0 onto mass m: P0 = m coth(m/pi0), P = m / sinh(m/pi0).
    :return: (P0, P)
    """
    if not pi0 > 0:
        raise DomainError(f'pi0 must be positive, got {pi0}')
    state = momenta_from_counter_rapidity(mass, phi=1.0 / pi0)
    return state.p0, state.p


def wavelength(P, planck=1.0):
    if not P > 0:
        raise DomainError(f'wavelength needs P > 0, got {P}')
    return planck / P


def counter_mass_from_wavelength(wavelength, planck=1.0):
    if not wavelength > 0:
        raise DomainError(f'wavelength must be positive, got {wavelength}')
    return planck / wavelength


def frequency(P0, planck=1.0):
    return P0 / planck
