import os
from dataclasses import dataclass, field
from typing import Dict

from scipy import constants

from relkin.errors import DomainError

# Run Settings
DEFAULT_SEED = 42
SEED_ENVIRONMENT_VARIABLE = 'RELKIN_SEED'
PRNG_NAME = 'MT19937'
OUTPUT_FORMATS = ('json', 'csv', 'human')
UNIT_SYSTEMS = ('natural', 'si')

DEFAULT_TOLERANCES = {
    'mass_shell': 1e-12,
    'dual_representation': 1e-10,
    'round_trip': 1e-10,
    'angle_identity': 1e-12,
    'energy_split': 1e-12,
    'massless_slope': 0.1,
    'trajectory_closed_form': 1e-8,
    'energy_drift': 1e-8,
    'magnetic_drift': 1e-10,
    'shell_drift': 1e-8,
    'accumulated_rapidity': 1e-6,
    'covariant': 1e-6,
    'hyperbolic_rotation': 1e-12,
    'counter_evolution': 1e-8,
    'spinor_boost': 1e-12,
    'split_residual': 1e-10,
    'basis_change': 1e-14,
    'half_shift': 1e-12,
    'q_identity': 1e-12,
    'mass_root': 1e-12,
    'quadrature': 1e-9,
    'ladder_sum': 1e-12,
    'gamma_matrix': 1e-13,
    'counter_boost': 1e-12,
    'shell_preservation': 1e-12,
    'g_determinant': 1e-10,
    'riccati': 1e-8,
    'u_recovery': 1e-10,
    'transfer_semigroup': 1e-12,
    'distance_cross_ratio': 1e-12,
    'distance_integral': 1e-8,
    'anchor': 1e-10,
    'weyl_limit': 10.0,
    'cubic_gap': 0.1,
    'cubic_gap_critical': 1e-3,
    'mobius': 1e-10,
    'translation': 1e-12,
    'triangle': 1e-12,
}


def default_seed():
    """Seed from the environment if set, else the package default."""
    value = os.environ.get(SEED_ENVIRONMENT_VARIABLE)
    if value is None or value == '':
        return DEFAULT_SEED
    try:
        return int(value)
    except ValueError:
        raise DomainError(f'{SEED_ENVIRONMENT_VARIABLE} must be an integer, got {value!r}')


@dataclass(frozen=True)
class Units:
    """
    Unit system applied at the command-line boundary only.
    :param name: 'natural' or 'si'
    :param c: speed of light
    :param h: Planck constant
    """
    name: str = 'natural'
    c: float = 1.0
    h: float = 1.0

    @classmethod
    def natural(cls):
        return cls('natural', 1.0, 1.0)

    @classmethod
    def si(cls):
        return cls('si', constants.c, constants.h)

    @classmethod
    def from_name(cls, name):
        if name == 'natural':
            return cls.natural()
        if name == 'si':
            return cls.si()
        raise DomainError(f'unknown unit system {name!r}')

    def mass_to_internal(self, mass):
        # a rest mass enters the core as the momentum m c
        return mass * self.c

    def mass_from_internal(self, mass):
        return mass / self.c

    def energy_from_internal(self, p0):
        return p0 * self.c

    def velocity_from_internal(self, v):
        return v * self.c

    def velocity_to_internal(self, v):
        return v / self.c


@dataclass
class RunConfig:
    """
    Settings shared by every command.
    :param tolerances: identity name -> tolerance, defaults reproduce the acceptance settings
    :param output_format: one of OUTPUT_FORMATS
    :param seed: 64-bit seed of the randomised property suites
    :param units: unit system used at the boundary
    """
    tolerances: Dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_format: str = 'json'
    seed: int = field(default_factory=default_seed)
    units: Units = field(default_factory=Units.natural)

    def __post_init__(self):
        if self.output_format not in OUTPUT_FORMATS:
            raise DomainError(f'unknown output format {self.output_format!r}')
        if not 0 <= self.seed < 2 ** 64:
            raise DomainError(f'seed must fit in 64 unsigned bits, got {self.seed}')

    def tolerance(self, name):
        return self.tolerances[name]

    def override_tolerance(self, assignment):
        """
        Apply a 'name=value' override.
        :param assignment: string of the form name=value
        """
        name, sep, value = assignment.partition('=')
        name = name.strip()
        if not sep:
            raise DomainError(f'tolerance override must look like name=value, got {assignment!r}')
        if name not in self.tolerances:
            raise DomainError(f'unknown tolerance {name!r}')
        try:
            tol = float(value)
        except ValueError:
            raise DomainError(f'tolerance {name!r} needs a number, got {value!r}')
        if not tol > 0:
            raise DomainError(f'tolerance {name!r} must be positive')
        self.tolerances[name] = tol

    def seed_words(self):
        """The seed split into two 32-bit words, as accepted by np.random.RandomState."""
        return [self.seed & 0xFFFFFFFF, self.seed >> 32]
