import itertools
import logging
from dataclasses import dataclass

import numpy as np
import sympy
from sympy import QQ, Poly
from sympy.polys.monomials import itermonomials

from relkin.errors import DomainError, PreconditionError
from relkin.spinor import chiral_gamma_matrices

logger = logging.getLogger(__name__)

ETA = (1, -1, -1, -1)
X = sympy.symbols('x0:4')
DEGREE_BOUND = 3
MATRIX_TOLERANCE = 1e-13
SHELL_PRECONDITION = 1e-9
INDEX_PAIRS = [(mu, nu) for mu in range(4) for nu in range(mu + 1, 4)]


def eta(mu, nu):
    return ETA[mu] if mu == nu else 0


# Counter-boosts

@dataclass(frozen=True)
class CounterBoostParam:
    """
    Translation chi -> chi + delta of the counter-rapidity.
    """
    delta: float

    @property
    def V0(self):
        return 1.0 / np.tanh(self.delta)

    @property
    def V(self):
        return 1.0 / np.sinh(self.delta)

    @property
    def V_bar(self):
        return np.tanh(self.delta)


def counter_boost_velocity(u0, u, delta):
    """
    (coth chi, 1/sinh chi) -> (coth(chi + delta), 1/sinh(chi + delta)):
    u0' = (u0 V0 + 1) / (u0 + V0), u' = u V / (u0 + V0) with V0 = coth delta, V = 1/sinh delta.
    The rest point (1, 0) is fixed.
    """
    if delta == 0:
        return u0, u
    if u < 0 or abs((u0 - u) * (u0 + u) - 1.0) > SHELL_PRECONDITION * u0 * u0:
        raise PreconditionError(f'({u0}, {u}) is not a unit-shell point (coth chi, 1/sinh chi)')
    if u > 0 and np.arcsinh(1.0 / u) + delta <= 0:
        raise DomainError(f'chi + delta must stay positive, got chi={np.arcsinh(1.0 / u)}, delta={delta}')
    param = CounterBoostParam(delta)
    V0 = param.V0
    return (u0 * V0 + 1.0) / (u0 + V0), u * param.V / (u0 + V0)


def complementary_velocity_add(v_bar, V_bar):
    """(v_bar + V_bar) / (1 + v_bar V_bar); v_bar = 1 is fixed and v_bar = 0 maps to V_bar."""
    if not (0 <= v_bar <= 1 and 0 <= V_bar <= 1):
        raise DomainError(f'complementary velocities must lie in [0, 1], got {v_bar}, {V_bar}')
    return (v_bar + V_bar) / (1.0 + v_bar * V_bar)


@dataclass(frozen=True)
class FourVector:
    x0: float
    x1: float
    x2: float
    x3: float

    @property
    def spatial(self):
        return np.array([self.x1, self.x2, self.x3])

    @property
    def rho2(self):
        s = self.spatial
        return self.x0 * self.x0 - s @ s

    @classmethod
    def from_parts(cls, x0, spatial):
        return cls(x0, *(float(c) for c in spatial))


def fourvector_transform(x, r):
    """
    x0' = (x0 r0 + rho^2) / (x0 + r0), spatial part of x scaled by |r| / (x0 + r0).
    x and r must lie on the same shell rho^2 > 0.
    """
    rho2 = x.rho2
    if not rho2 > 0:
        raise DomainError(f'transformation needs a timelike shell, got rho^2={rho2}')
    if abs(r.rho2 - rho2) > SHELL_PRECONDITION * max(x.x0 ** 2, r.x0 ** 2):
        raise PreconditionError(f'shell mismatch: {rho2} vs {r.rho2}')
    denominator = x.x0 + r.x0
    if denominator == 0 or not np.isfinite(1.0 / denominator):
        raise DomainError('x0 + r0 vanishes')
    x0 = (x.x0 * r.x0 + rho2) / denominator
    return FourVector.from_parts(x0, x.spatial * np.linalg.norm(r.spatial) / denominator)


# Exact first-order differential operators

def _poly(expr):
    return Poly(expr, *X, domain=QQ)


RHO2 = _poly(X[0] ** 2 - X[1] ** 2 - X[2] ** 2 - X[3] ** 2)


class PolyOperator:
    def __init__(self, scalar, vector):
        """
        f -> scalar f + sum_a vector[a] df/dx_a, exact over the rationals
        :param scalar: Poly, zeroth-order part
        :param vector: four Polys, coefficients of d/dx_0 .. d/dx_3
        """
        self.scalar = scalar
        self.vector = tuple(vector)

    @classmethod
    def zero(cls):
        return cls(_poly(0), [_poly(0)] * 4)

    @classmethod
    def multiplication(cls, poly):
        return cls(_poly(poly), [_poly(0)] * 4)

    @classmethod
    def partial(cls, nu):
        """d/dx^nu acting on the lower-index coordinates: d_nu x_a = eta_{nu a}."""
        return cls(_poly(0), [_poly(eta(nu, a)) for a in range(4)])

    @classmethod
    def dilatation(cls):
        return cls(_poly(0), [_poly(X[a]) for a in range(4)])

    @classmethod
    def generator(cls, nu):
        """G_nu = rho^2 d_nu - x_nu D"""
        return cls.partial(nu).times(RHO2) - cls.dilatation().times(X[nu])

    @classmethod
    def lorentz(cls, mu, nu):
        """M_{mu nu} = x_mu d_nu - x_nu d_mu"""
        return cls(_poly(0), [_poly(X[mu] * eta(nu, a) - X[nu] * eta(mu, a)) for a in range(4)])

    def apply(self, f):
        f = f if isinstance(f, Poly) else _poly(f)
        result = self.scalar * f
        for a in range(4):
            if not self.vector[a].is_zero:
                result = result + self.vector[a] * f.diff(X[a])
        return result

    def commutator(self, other):
        """[a + X, b + Y] = X(b) - Y(a) + [X, Y]"""
        scalar = self._derive(other.scalar) - other._derive(self.scalar)
        vector = [self._derive(other.vector[a]) - other._derive(self.vector[a]) for a in range(4)]
        return PolyOperator(scalar, vector)

    def _derive(self, f):
        result = _poly(0)
        for a in range(4):
            if not self.vector[a].is_zero:
                result = result + self.vector[a] * f.diff(X[a])
        return result

    def times(self, c):
        """Left multiplication by a number or a polynomial."""
        c = c if isinstance(c, Poly) else _poly(c)
        return PolyOperator(c * self.scalar, [c * v for v in self.vector])

    def __add__(self, other):
        return PolyOperator(self.scalar + other.scalar, [a + b for a, b in zip(self.vector, other.vector)])

    def __sub__(self, other):
        return self + other.times(-1)

    def __eq__(self, other):
        return self.scalar == other.scalar and self.vector == other.vector

    @property
    def is_zero(self):
        return self.scalar.is_zero and all(v.is_zero for v in self.vector)

    def __repr__(self):
        return f'PolyOperator({self.scalar.as_expr()}, {[v.as_expr() for v in self.vector]})'


def generator_apply(nu, poly, degree_bound=DEGREE_BOUND):
    """Apply G_nu to a polynomial of total degree <= degree_bound."""
    if nu not in range(4):
        raise DomainError(f'index must be 0..3, got {nu}')
    poly = poly if isinstance(poly, Poly) else _poly(poly)
    if not poly.is_zero and poly.total_degree() > degree_bound:
        raise PreconditionError(f'degree {poly.total_degree()} exceeds the bound {degree_bound}')
    return PolyOperator.generator(nu).apply(poly)


def sample_monomials(degree=DEGREE_BOUND):
    return [_poly(m) for m in sorted(itermonomials(list(X), degree), key=sympy.default_sort_key)]


@dataclass(frozen=True)
class IdentityCheck:
    """
    One verified identity. residual is a count of failing instances for exact checks
    and a max-abs entry for matrix checks.
    """
    id: str
    paper_ref: str
    residual: float
    tol: float

    @property
    def passed(self):
        return self.residual <= self.tol

    def as_dict(self):
        return {'id': self.id, 'paper_ref': self.paper_ref, 'residual': self.residual, 'tol': self.tol,
                'pass': self.passed}


def _exact_check(name, paper_ref, instances, monomials):
    """
    instances: list of (A, B, R) asserting [A, B] = R, checked structurally and on every monomial.
    """
    failures = 0
    for A, B, R in instances:
        if A.commutator(B) != R:
            failures += 1
        for f in monomials:
            if A.apply(B.apply(f)) - B.apply(A.apply(f)) != R.apply(f):
                failures += 1
    logger.debug('%s: %d instances, %d failures', name, len(instances), failures)
    return IdentityCheck(name, paper_ref, float(failures), 0.0)


def lorentz_rhs(mu, nu, lam, et, M):
    """eta_{nu lam} M_{mu et} - eta_{mu lam} M_{nu et} + eta_{nu et} M_{lam mu} - eta_{mu et} M_{lam nu}"""
    return (M(mu, et).times(eta(nu, lam)) - M(nu, et).times(eta(mu, lam))
            + M(lam, mu).times(eta(nu, et)) - M(lam, nu).times(eta(mu, et)))


def commutator_suite(degree=DEGREE_BOUND):
    """
    Exact checks of the transformation-group relations on monomials of degree <= `degree`.
    :return: list of IdentityCheck, residual = number of failing instances
    """
    monomials = sample_monomials(degree)
    G = [PolyOperator.generator(nu) for nu in range(4)]
    D = PolyOperator.dilatation()
    rho2 = PolyOperator.multiplication(RHO2)
    zero = PolyOperator.zero()

    def M(mu, nu):
        return PolyOperator.lorentz(mu, nu)

    action_failures = sum(G[nu].apply(X[mu]) != RHO2 * eta(nu, mu) - _poly(X[nu] * X[mu])
                          for nu in range(4) for mu in range(4))
    checks = [IdentityCheck('generator_action', 'Eq. 5.6', float(action_failures), 0.0)]

    checks.append(_exact_check('G_G', 'Eq. 5.9',
                               [(G[mu], G[nu], M(mu, nu).times(RHO2)) for mu in range(4) for nu in range(4)],
                               monomials))
    checks.append(_exact_check('G_rho2', 'Eq. 5.10',
                               [(G[mu], rho2, zero) for mu in range(4)], monomials))
    checks.append(_exact_check('rho2_M', 'Eq. 5.10',
                               [(rho2, M(mu, nu), zero) for mu, nu in INDEX_PAIRS], monomials))
    checks.append(_exact_check('M_G', 'Eq. 5.11',
                               [(M(mu, nu), G[lam], G[mu].times(eta(nu, lam)) - G[nu].times(eta(mu, lam)))
                                for mu, nu in INDEX_PAIRS for lam in range(4)], monomials))
    checks.append(_exact_check('M_M', 'Eq. 5.12',
                               [(M(mu, nu), M(lam, et), lorentz_rhs(mu, nu, lam, et, M))
                                for mu, nu in INDEX_PAIRS for lam, et in INDEX_PAIRS], monomials))
    checks.append(_exact_check('M_D', 'Eq. 5.8',
                               [(M(mu, nu), D, zero) for mu, nu in INDEX_PAIRS], monomials))
    checks.append(_exact_check('D_G', 'Eq. 5.8',
                               [(D, G[mu], G[mu]) for mu in range(4)], monomials))
    checks.append(_exact_check('D_rho2', 'Eq. 5.8',
                               [(D, rho2, rho2.times(2))], monomials))
    return checks


def printed_lorentz_sign_holds():
    """Whether the Lorentz relation with the opposite overall sign holds for the differential realisation."""
    def M(mu, nu):
        return PolyOperator.lorentz(mu, nu)
    return all(M(mu, nu).commutator(M(lam, et)) == lorentz_rhs(mu, nu, lam, et, M).times(-1)
               for mu, nu in INDEX_PAIRS for lam, et in INDEX_PAIRS)


# Gamma-matrix realisation

@dataclass(frozen=True, eq=False)
class GammaBasis:
    """
    gamma_0..gamma_3 with {gamma_mu, gamma_nu} = 2 eta_{mu nu}; G_mu = gamma_mu / 2 and
    Sigma_{mu nu} = [gamma_mu, gamma_nu] / 4.
    """
    gammas: np.ndarray

    @classmethod
    def chiral(cls):
        return cls(chiral_gamma_matrices())

    def generator(self, mu):
        return 0.5 * self.gammas[mu]

    def sigma(self, mu, nu):
        g = self.gammas
        return 0.25 * (g[mu] @ g[nu] - g[nu] @ g[mu])

    def raised_generator(self, mu):
        return ETA[mu] * self.generator(mu)

    @property
    def identity(self):
        return np.eye(self.gammas.shape[1], dtype=complex)


def _comm(a, b):
    return a @ b - b @ a


def _max_abs(matrices):
    return float(max(np.max(np.abs(m)) for m in matrices))


def gamma_realization_check(basis=None, tol=MATRIX_TOLERANCE):
    """
    Anticommutation, the Hermiticity pattern and the group relations with G = gamma/2,
    M = Sigma and rho^2 = 1, as 4x4 matrix identities.
    """
    basis = basis or GammaBasis.chiral()
    g = basis.gammas
    I = basis.identity
    G, S = basis.generator, basis.sigma

    checks = [
        IdentityCheck('anticommutation', '§5',
                      _max_abs([g[mu] @ g[nu] + g[nu] @ g[mu] - 2 * eta(mu, nu) * I
                                for mu in range(4) for nu in range(4)]), tol),
        IdentityCheck('hermiticity', '§5',
                      _max_abs([g[0] - g[0].conj().T] + [g[k] + g[k].conj().T for k in (1, 2, 3)]), tol),
        IdentityCheck('G_G', 'Eq. 5.9',
                      _max_abs([_comm(G(mu), G(nu)) - S(mu, nu) for mu in range(4) for nu in range(4)]), tol),
        IdentityCheck('M_G', 'Eq. 5.11',
                      _max_abs([_comm(S(mu, nu), G(lam)) - eta(nu, lam) * G(mu) + eta(mu, lam) * G(nu)
                                for mu, nu in INDEX_PAIRS for lam in range(4)]), tol),
        IdentityCheck('M_M', 'Eq. 5.12',
                      _max_abs([_comm(S(mu, nu), S(lam, et)) - (eta(nu, lam) * S(mu, et) - eta(mu, lam) * S(nu, et)
                                                                + eta(nu, et) * S(lam, mu) - eta(mu, et) * S(lam, nu))
                                for mu, nu in INDEX_PAIRS for lam, et in INDEX_PAIRS]), tol),
    ]
    gamma5 = 1j * g[0] @ g[1] @ g[2] @ g[3]
    checks.append(IdentityCheck('gamma5_chiral', 'Eq. 3.5',
                                _max_abs([gamma5 - np.diag([1, 1, -1, -1])]), tol))
    return checks


def normalisation_residual(generator_scale, sigma_scale, basis=None):
    """
    Largest defect of [G_mu, G_nu] = Sigma_{mu nu} and of the M-on-G relation for
    G = generator_scale gamma and Sigma = sigma_scale [gamma_mu, gamma_nu]. Zero only for (1/2, 1/4).
    """
    basis = basis or GammaBasis.chiral()
    g = basis.gammas

    def G(mu):
        return generator_scale * g[mu]

    def S(mu, nu):
        return sigma_scale * _comm(g[mu], g[nu])

    return max(_max_abs([_comm(G(mu), G(nu)) - S(mu, nu) for mu in range(4) for nu in range(4)]),
               _max_abs([_comm(S(mu, nu), G(lam)) - eta(nu, lam) * G(mu) + eta(mu, lam) * G(nu)
                         for mu, nu in INDEX_PAIRS for lam in range(4)]))


@dataclass(frozen=True)
class CasimirReport:
    c1: np.ndarray
    c1_residual: float
    c2_norms: dict


def casimir_check(basis=None):
    """
    C1 = G^mu G_mu must commute with every G_mu and Sigma_{mu nu}. Two readings of the second Casimir
    are formed and their largest commutator norms reported without any claim.
    """
    basis = basis or GammaBasis.chiral()
    G, S, Gu = basis.generator, basis.sigma, basis.raised_generator
    generators = [G(mu) for mu in range(4)] + [S(mu, nu) for mu, nu in INDEX_PAIRS]

    c1 = sum(Gu(mu) @ G(mu) for mu in range(4))
    c1_residual = _max_abs([_comm(c1, x) for x in generators])

    def Su(mu, nu):
        return ETA[mu] * ETA[nu] * S(mu, nu)

    sigma_square = sum(S(mu, nu) @ Su(mu, nu) for mu in range(4) for nu in range(4))
    balanced = 0.5 * sigma_square @ c1 - sum(S(mu, lam) @ (ETA[mu] * S(mu, nu)) @ Gu(lam) @ Gu(nu)
                                             for mu, lam, nu in itertools.product(range(4), repeat=3))
    literal = (0.5 * sum(S(mu, nu) @ S(mu, nu) for mu in range(4) for nu in range(4)) @ c1
               - sum(S(mu, lam) @ S(mu, lam) @ G(mu) @ G(nu)
                     for mu, lam, nu in itertools.product(range(4), repeat=3)))
    c2_norms = {name: _max_abs([_comm(candidate, x) for x in generators])
                for name, candidate in (('balanced', balanced), ('literal', literal))}
    return CasimirReport(c1, c1_residual, c2_norms)
