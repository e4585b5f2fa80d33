from dataclasses import dataclass

import numpy as np

from relkin.errors import DomainError, LightSpeedStateError, PreconditionError, RestStateError

SHELL_PRECONDITION = 1e-9  # relative, for states handed to angles_from_momenta


@dataclass(frozen=True)
class MomentumState:
    """
    Energy and momentum magnitude of a particle, c = 1.
    :param mass: rest mass, >= 0
    :param p0: energy component
    :param p: momentum magnitude, >= 0
    """
    mass: float
    p0: float
    p: float


@dataclass(frozen=True)
class AngleState:
    """
    Hyperbolic angles of one on-shell state.
    :param psi: rapidity measured from rest
    :param chi: counter-rapidity, chi = mass * phi
    :param phi: evolution parameter
    :param pi0: counter-mass, 1 / phi
    """
    psi: float
    chi: float
    phi: float
    pi0: float


@dataclass(frozen=True)
class VelocityPair:
    v: float
    v_bar: float


@dataclass(frozen=True)
class EnergySplit:
    q1: float
    q2: float


def _check_mass(mass):
    if not np.isfinite(mass) or mass < 0:
        raise DomainError(f'mass must be finite and non-negative, got {mass}')


def momenta_from_rapidity(mass, psi):
    """
    p0 = m cosh(psi), p = m |sinh(psi)|
    :param mass: rest mass
    :param psi: rapidity measured from the rest state
    :return: MomentumState
    """
    _check_mass(mass)
    if mass == 0.0:
        # the rapidity form carries no information without mass
        return MomentumState(0.0, 0.0, 0.0)
    with np.errstate(over='ignore', invalid='ignore'):
        p0, p = mass * np.cosh(psi), mass * abs(np.sinh(psi))
    if not (np.isfinite(p0) and np.isfinite(p)):
        raise DomainError(f'rapidity {psi} overflows the momenta for mass {mass}')
    return MomentumState(mass, p0, p)


def momenta_from_counter_rapidity(mass, chi=None, phi=None):
    """
    p0 = m coth(chi), p = m / sinh(chi). A massless state needs phi and gives p0 = p = 1 / phi.
    :param mass: rest mass
    :param chi: counter-rapidity; defaults to mass * phi
    :param phi: evolution parameter, required when mass is zero
    :return: MomentumState
    """
    _check_mass(mass)
    if mass == 0.0:
        if phi is None or not phi > 0:
            raise DomainError(f'a massless state needs phi > 0, got {phi}')
        pi0 = 1.0 / phi
        return MomentumState(0.0, pi0, pi0)

    if chi is None:
        if phi is None:
            raise DomainError('either chi or phi must be given')
        chi = mass * phi
    if not chi > 0:
        raise DomainError(f'counter-rapidity must be positive for a massive state, got {chi}')

    e = np.exp(-chi)
    p = 2.0 * mass * e / -np.expm1(-2.0 * chi)
    p0 = mass / np.tanh(chi)
    if not (np.isfinite(p) and np.isfinite(p0)):
        raise DomainError(f'counter-rapidity {chi} too close to zero for mass {mass}')
    return MomentumState(mass, p0, p)


def angles_from_momenta(state):
    """
    Recover the angle pair of an on-shell state.
    Rest raises RestStateError (psi = 0, chi infinite); a massless state raises
    LightSpeedStateError carrying phi and pi0 (psi infinite, chi = 0).
    :param state: MomentumState
    :return: AngleState
    """
    mass, p0, p = state.mass, state.p0, state.p
    _check_mass(mass)
    if not (np.isfinite(p0) and np.isfinite(p)):
        raise DomainError(f'momenta must be finite, got p0={p0}, p={p}')
    if p < 0 or not p0 > 0:
        raise DomainError(f'need p >= 0 and p0 > 0, got p0={p0}, p={p}')
    if not abs(mass_shell_residual(state)) <= SHELL_PRECONDITION * p0 * p0:
        raise PreconditionError(f'state is off shell by {mass_shell_residual(state)}')

    if mass == 0.0:
        raise LightSpeedStateError('massless state: rapidity is unbounded', phi=1.0 / p0, pi0=p0)
    ratio = mass / p if p > 0 else np.inf
    if not np.isfinite(ratio):
        raise RestStateError('rest state: counter-rapidity is unbounded', psi=0.0)

    psi = np.arcsinh(p / mass)
    chi = np.arcsinh(ratio)
    return AngleState(psi=psi, chi=chi, phi=chi / mass, pi0=mass / chi)


def rapidity(state):
    """Rapidity of a massive state; 0 at rest."""
    if state.mass == 0.0:
        raise LightSpeedStateError('massless state: rapidity is unbounded',
                                   phi=1.0 / state.p0, pi0=state.p0)
    return np.arcsinh(state.p / state.mass)


def counter_rapidity(state):
    """Counter-rapidity; 0 for a massless state."""
    if state.mass == 0.0:
        return 0.0
    if state.p == 0.0:
        raise RestStateError('rest state: counter-rapidity is unbounded', psi=0.0)
    return np.arcsinh(state.mass / state.p)


def reciprocity(psi):
    """
    chi = ln(coth(psi / 2)). The map is its own inverse, so it also takes chi to psi.
    :param psi: positive angle
    """
    if not psi > 0:
        raise DomainError(f'reciprocity needs a positive angle, got {psi}')
    chi = np.log1p(np.exp(-psi)) - np.log(-np.expm1(-psi))
    if not np.isfinite(chi):
        raise DomainError(f'angle {psi} too close to zero: reciprocal angle overflows')
    return chi


def paired_angles(mass, psi):
    """AngleState of the massive state with rapidity psi > 0."""
    _check_mass(mass)
    if mass == 0.0:
        raise DomainError('paired angles need a massive state')
    chi = reciprocity(psi)
    return AngleState(psi=psi, chi=chi, phi=chi / mass, pi0=mass / chi)


def velocity_pair(state):
    """
    v = p / p0 = tanh(psi) and the complementary v_bar = sqrt(1 - v^2) = tanh(chi)
    """
    p0, p = state.p0, state.p
    if not p0 > 0:
        raise DomainError(f'velocity needs p0 > 0, got {p0}')
    v_bar = np.sqrt(max((p0 - p) * (p0 + p), 0.0)) / p0
    return VelocityPair(v=p / p0, v_bar=v_bar)


def velocity_from_rapidity(psi):
    return np.tanh(psi)


def rapidity_from_velocity(v):
    if not -1.0 < v < 1.0:
        raise DomainError(f'rapidity needs |v| < 1, got {v}')
    return np.arctanh(v)


def split_energies(state):
    """q1 = p0 - m (kinetic energy), q2 = p0 + m; q1 q2 = p^2 on shell."""
    return EnergySplit(q1=state.p0 - state.mass, q2=state.p0 + state.mass)


def mass_shell_residual(state):
    return (state.p0 - state.p) * (state.p0 + state.p) - state.mass * state.mass
