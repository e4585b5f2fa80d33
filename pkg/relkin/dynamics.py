import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import trapezoid
from tqdm import trange

from relkin.errors import DomainError, IntegrationError, PreconditionError
from relkin.kinematics import MomentumState, momenta_from_counter_rapidity, rapidity

logger = logging.getLogger(__name__)

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])
FIELD_KINDS = ('uniform_electric', 'uniform_magnetic', 'coulomb')
TRAJECTORY_COLUMNS = ('tau', 't', 'x', 'y', 'z', 'px', 'py', 'pz', 'p0', 'shell_residual', 'energy_integral')


@dataclass(eq=False)
class ParticleState:
    """
    Phase-space point of a charged particle, c = 1.
    :param tau: proper time
    :param t: coordinate time
    :param r: position 3-vector
    :param p: momentum 3-vector
    :param p0: energy
    :param mass: rest mass
    :param charge: charge e
    """
    tau: float
    t: float
    r: np.ndarray
    p: np.ndarray
    p0: float
    mass: float
    charge: float = 1.0

    def __post_init__(self):
        self.r = np.asarray(self.r, dtype=float)
        self.p = np.asarray(self.p, dtype=float)

    @classmethod
    def on_shell(cls, mass, r, p, charge=1.0, tau=0.0, t=0.0):
        p = np.asarray(p, dtype=float)
        return cls(tau, t, r, p, float(np.sqrt(mass * mass + p @ p)), mass, charge)

    @property
    def shell_residual(self):
        return (self.p0 - np.linalg.norm(self.p)) * (self.p0 + np.linalg.norm(self.p)) - self.mass ** 2

    @property
    def four_velocity(self):
        return np.concatenate([[self.p0], self.p]) / self.mass

    def to_vector(self):
        return np.concatenate([[self.t], self.r, self.p, [self.p0]])

    @classmethod
    def from_vector(cls, tau, vector, mass, charge):
        return cls(tau, vector[0], vector[1:4].copy(), vector[4:7].copy(), vector[7], mass, charge)


@dataclass(frozen=True)
class FieldTensor:
    """
    Antisymmetric field tensor F_{mu nu}, metric (+,-,-,-).
    """
    F: np.ndarray

    @classmethod
    def from_fields(cls, E, B):
        E = np.asarray(E, dtype=float)
        B = np.asarray(B, dtype=float)
        mixed = np.zeros((4, 4))
        mixed[0, 1:] = E
        mixed[1:, 0] = E
        mixed[1, 2], mixed[1, 3], mixed[2, 3] = B[2], -B[1], B[0]
        mixed[2, 1], mixed[3, 1], mixed[3, 2] = -B[2], B[1], -B[0]
        return cls(METRIC @ mixed)

    def mixed(self):
        """F^mu_nu, the form that acts on contravariant u^nu."""
        return METRIC @ self.F

    def is_antisymmetric(self, atol=0.0):
        return np.allclose(self.F, -self.F.T, rtol=0.0, atol=atol)


@dataclass(frozen=True)
class FieldConfig:
    """
    External field driving the particle.
    :param kind: one of FIELD_KINDS; uniform kinds use E and B, coulomb uses k
    :param E: uniform electric field
    :param B: uniform magnetic field
    :param k: coupling of the radial potential energy V(r) = k / r
    """
    kind: str
    E: np.ndarray = field(default_factory=lambda: np.zeros(3))
    B: np.ndarray = field(default_factory=lambda: np.zeros(3))
    k: float = 0.0

    def __post_init__(self):
        if self.kind not in FIELD_KINDS:
            raise DomainError(f'unknown field kind {self.kind!r}')
        object.__setattr__(self, 'E', np.asarray(self.E, dtype=float))
        object.__setattr__(self, 'B', np.asarray(self.B, dtype=float))

    @classmethod
    def uniform_electric(cls, E):
        return cls('uniform_electric', E=E)

    @classmethod
    def uniform_magnetic(cls, B):
        return cls('uniform_magnetic', B=B)

    @classmethod
    def coulomb(cls, k):
        return cls('coulomb', k=k)

    def electric_field(self, r, charge):
        if self.kind != 'coulomb':
            return self.E
        if charge == 0.0:
            raise DomainError('a coulomb field needs a charged particle')
        radius = np.linalg.norm(r)
        if radius == 0.0:
            raise DomainError('coulomb field evaluated at the origin')
        # charge * E = -grad V
        return self.k * r / (charge * radius ** 3)

    def magnetic_field(self, r):
        if self.kind == 'coulomb':
            return np.zeros(3)
        return self.B

    def potential(self, r, charge):
        """Potential energy V(r) entering the energy integral p0 + V."""
        if self.kind == 'coulomb':
            return self.k / np.linalg.norm(r)
        return -charge * (self.E @ r)

    def tensor(self, r, charge):
        return FieldTensor.from_fields(self.electric_field(r, charge), self.magnetic_field(r))


@dataclass(frozen=True)
class HyperbolicSolution:
    """
    p0(psi) = A (cosh psi + B sinh psi), p(psi) = A (sinh psi + B cosh psi)
    """
    A: float
    B: float

    def momenta(self, psi):
        return (self.A * (np.cosh(psi) + self.B * np.sinh(psi)),
                self.A * (np.sinh(psi) + self.B * np.cosh(psi)))

    @property
    def mass_squared(self):
        return self.A ** 2 * (1.0 - self.B) * (1.0 + self.B)

    @property
    def is_massless(self):
        return abs(self.B) == 1.0


def runge_kutta4(t, dt, vector, f):
    dt2 = dt * 0.5
    k1 = f(t, vector)
    k2 = f(t + dt2, vector + dt2 * k1)
    k3 = f(t + dt2, vector + dt2 * k2)
    k4 = f(t + dt, vector + dt * k3)
    return vector + dt / 6.0 * (k1 + 2.0 * (k2 + k3) + k4)


class LorentzIntegrator:
    def __init__(self, initial, fields, tau_end, step, shell_tolerance=1e-8, log_every=1000, progress=False):
        """
        Fixed-step RK4 integration of the Lorentz-force equations in proper time
        :param initial: ParticleState at the start
        :param fields: FieldConfig
        :param tau_end: final proper time, > initial.tau
        :param step: proper-time step, > 0
        :param shell_tolerance: largest accepted |p0^2 - p^2 - m^2| / p0^2 after a step
        :param log_every: steps between DEBUG lines reporting the invariants
        :param progress: show a tqdm progress bar
        """
        if initial.mass <= 0.0:
            raise DomainError(f'proper-time integration needs mass > 0, got {initial.mass}')
        if not step > 0:
            raise DomainError(f'step must be positive, got {step}')
        if not tau_end > initial.tau:
            raise DomainError(f'tau_end {tau_end} must exceed the initial proper time {initial.tau}')
        self.initial = initial
        self.fields = fields
        self.tau_end = tau_end
        self.step = step
        self.shell_tolerance = shell_tolerance
        self.log_every = log_every
        self.progress = progress

        self.mass = initial.mass
        self.charge = initial.charge

    def derivative(self, tau, y):
        r, p, p0 = y[1:4], y[4:7], y[7]
        q_m = self.charge / self.mass
        E = self.fields.electric_field(r, self.charge)
        B = self.fields.magnetic_field(r)

        dy = np.empty(8)
        dy[0] = p0 / self.mass
        dy[1:4] = p / self.mass
        dy[4:7] = q_m * (E * p0 + np.cross(p, B))
        dy[7] = q_m * (E @ p)
        return dy

    def _record(self, state):
        self.trajectory.append(state)
        self.shell_residuals.append(state.shell_residual)
        self.energy_integrals.append(state.p0 + self.fields.potential(state.r, self.charge))

    def integrate(self):
        """
        Run the integrator
        """
        num_steps = int(np.ceil((self.tau_end - self.initial.tau) / self.step - 1e-9))
        taus = self.initial.tau + self.step * np.arange(num_steps + 1)
        taus[-1] = self.tau_end

        self.trajectory = []
        self.shell_residuals = []
        self.energy_integrals = []
        self._record(self.initial)

        y = self.initial.to_vector()
        for k in trange(num_steps, disable=not self.progress, desc='lorentz'):
            y = runge_kutta4(taus[k], taus[k + 1] - taus[k], y, self.derivative)
            state = ParticleState.from_vector(taus[k + 1], y, self.mass, self.charge)

            drift = abs(state.shell_residual) / state.p0 ** 2
            if not drift <= self.shell_tolerance:
                logger.warning('step %d at tau=%.6g rejected: shell drift %.3e', k + 1, taus[k + 1], drift)
                raise IntegrationError(f'mass-shell drift {drift:.3e} exceeds {self.shell_tolerance:.1e} '
                                       f'at tau={taus[k + 1]:.6g}')
            self._record(state)
            if self.log_every and (k + 1) % self.log_every == 0:
                logger.debug('tau=%.6g shell=%.3e energy=%.15g', taus[k + 1],
                             self.shell_residuals[-1], self.energy_integrals[-1])
        return self.trajectory

    def as_array(self):
        """Rows in TRAJECTORY_COLUMNS order."""
        return np.array([[s.tau, s.t, *s.r, *s.p, s.p0, shell, energy]
                         for s, shell, energy in zip(self.trajectory, self.shell_residuals,
                                                     self.energy_integrals)])


def integrate_lorentz(initial, fields, tau_end, step, **kwargs):
    integrator = LorentzIntegrator(initial, fields, tau_end, step, **kwargs)
    return integrator.integrate()


def projected_evolution(p0, p, psi_span):
    """
    Advance (p0, p) along dp/dpsi = p0, dp0/dpsi = p: a hyperbolic rotation by psi_span.
    """
    c, s = np.cosh(psi_span), np.sinh(psi_span)
    return p0 * c + p * s, p * c + p0 * s


def fit_hyperbolic_solution(p0, p, mass=None):
    """
    Fit the general solution normalised at psi = 0: A = p0, B = p / p0.
    :param p0: energy, > 0
    :param p: momentum component along the direction of motion
    :param mass: if given, checked against A^2 (1 - B^2)
    :return: HyperbolicSolution
    """
    if not p0 > 0:
        raise DomainError(f'fit needs p0 > 0, got {p0}')
    if p0 * p0 < p * p:
        raise DomainError(f'spacelike input p0={p0}, p={p}')
    solution = HyperbolicSolution(A=p0, B=p / p0)
    if mass is not None:
        if mass == 0.0 and not solution.is_massless:
            raise PreconditionError(f'massless fit needs p0 = |p|, got p0={p0}, p={p}')
        if abs(solution.mass_squared - mass * mass) > 1e-9 * p0 * p0:
            raise PreconditionError(f'A^2 (1 - B^2) = {solution.mass_squared} does not match mass^2 = {mass ** 2}')
    return solution


def covariant_residual(trajectory, fields):
    """
    du/dtau - (e/m) F^mu_nu u^nu along a computed trajectory, u = (p0, p) / m.
    Derivatives are second-order finite differences on the trajectory samples.
    :return: array of residual 4-vectors at the interior samples
    """
    taus = np.array([s.tau for s in trajectory])
    u = np.array([s.four_velocity for s in trajectory])
    du = np.gradient(u, taus, axis=0)

    residuals = []
    for i in range(1, len(trajectory) - 1):
        state = trajectory[i]
        force = (state.charge / state.mass) * fields.tensor(state.r, state.charge).mixed() @ u[i]
        residuals.append(du[i] - force)
    return np.array(residuals)


def accumulated_rapidity(trajectory, fields):
    """
    psi as the proper-time integral of (e/m) E.n, n the direction of motion
    (the field direction while at rest).
    """
    integrand = []
    for state in trajectory:
        E = fields.electric_field(state.r, state.charge)
        norm_p = np.linalg.norm(state.p)
        if norm_p > 0:
            n = state.p / norm_p
        else:
            norm_E = np.linalg.norm(E)
            n = E / norm_E if norm_E > 0 else np.zeros(3)
        integrand.append(state.charge / state.mass * (E @ n))
    return trapezoid(integrand, [s.tau for s in trajectory])


def final_rapidity(state):
    return rapidity(MomentumState(state.mass, state.p0, float(np.linalg.norm(state.p))))


def counter_evolution(state, phi_span):
    """
    Closed-form advance along dp/dphi = -p p0, dp0/dphi = -p^2. A massive state moves its
    counter-rapidity by mass * phi_span, a massless one has 1/p0 shifted by phi_span.
    :param state: MomentumState
    :return: MomentumState
    """
    if state.mass == 0.0:
        p0 = 1.0 / (1.0 / state.p0 + phi_span)
        return MomentumState(0.0, p0, p0)
    if state.p == 0.0:
        return state
    chi = np.arcsinh(state.mass / state.p) + state.mass * phi_span
    return momenta_from_counter_rapidity(state.mass, chi)


def integrate_counter_evolution(P, p0, phi_span, step):
    """
    RK4 over the 3-vector form dP/dphi = -P p0, dp0/dphi = -|P|^2.
    :return: (P, p0) at the end of the span
    """
    def derivative(phi, y):
        return np.concatenate([-y[:3] * y[3], [-(y[:3] @ y[:3])]])

    num_steps = max(int(np.ceil(abs(phi_span) / step - 1e-9)), 1)
    h = phi_span / num_steps
    y = np.concatenate([np.asarray(P, dtype=float), [p0]])
    for k in range(num_steps):
        y = runge_kutta4(k * h, h, y, derivative)
    return y[:3], y[3]
