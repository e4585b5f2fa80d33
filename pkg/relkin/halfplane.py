import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad
from scipy.linalg import expm

from relkin.errors import DomainError

logger = logging.getLogger(__name__)

INFINITY = np.inf
QUAD_TOLERANCE = 1e-12
RICCATI_STEP = 1e-5


@dataclass(frozen=True)
class HalfPlanePoint:
    """
    Point of the closed upper half-plane. Boundary points have im = 0 or at_infinity set.
    """
    re: float = 0.0
    im: float = 0.0
    at_infinity: bool = False

    def __post_init__(self):
        if self.im < 0:
            raise DomainError(f'point ({self.re}, {self.im}) lies below the real axis')

    @classmethod
    def infinity(cls):
        return cls(at_infinity=True)

    @classmethod
    def from_complex(cls, z):
        if not np.isfinite(z):
            return cls.infinity()
        return cls(float(np.real(z)), float(np.imag(z)))

    @classmethod
    def parse(cls, text):
        """'re,im' -> HalfPlanePoint"""
        try:
            re, im = (float(part) for part in text.split(','))
        except ValueError:
            raise DomainError(f'expected "re,im", got {text!r}')
        return cls(re, im)

    @property
    def is_boundary(self):
        return self.at_infinity or self.im == 0

    @property
    def value(self):
        return INFINITY if self.at_infinity else complex(self.re, self.im)

    def as_list(self):
        return ['inf', 0.0] if self.at_infinity else [self.re, self.im]


def _value(z):
    if isinstance(z, HalfPlanePoint):
        return z.value
    return z if not np.isfinite(z) else complex(z)


def _interior(z):
    z = z if isinstance(z, HalfPlanePoint) else HalfPlanePoint.from_complex(z)
    if z.is_boundary:
        raise DomainError(f'{z} is not an interior point of the half-plane')
    return z


def cross_ratio(z1, z2, z3, z4):
    """
    ((z1 - z4)(z3 - z2)) / ((z1 - z2)(z3 - z4)); factors containing a point at infinity are dropped.
    """
    points = [_value(z) for z in (z1, z2, z3, z4)]
    infinite = [not np.isfinite(z) for z in points]
    if sum(infinite) > 1:
        raise DomainError('at most one point may lie at infinity')

    def factor(a, b):
        if infinite[a] or infinite[b]:
            return 1.0
        return points[a] - points[b]

    numerator = factor(0, 3) * factor(2, 1)
    denominator = factor(0, 1) * factor(2, 3)
    if numerator == 0 or denominator == 0:
        raise DomainError('cross-ratio of coincident points')
    return numerator / denominator


def mobius(z, a, b, c, d):
    """(a z + b) / (c z + d); infinity maps to a / c and -d / c to infinity."""
    z = _value(z)
    if not np.isfinite(z):
        return INFINITY if c == 0 else a / c
    denominator = c * z + d
    if denominator == 0:
        return INFINITY
    return (a * z + b) / denominator


def geodesic_endpoints(z, w):
    """
    Boundary endpoints (z*, w*) of the geodesic through z and w, ordered so that z lies between z* and w.
    :return: (HalfPlanePoint, HalfPlanePoint)
    """
    z, w = _interior(z), _interior(w)
    if z == w:
        raise DomainError('geodesic through coincident points')

    if z.re == w.re:
        foot = HalfPlanePoint(z.re, 0.0)
        if z.im < w.im:
            return foot, HalfPlanePoint.infinity()
        return HalfPlanePoint.infinity(), foot

    # circle centred on the real axis
    c = (abs(w.value) ** 2 - abs(z.value) ** 2) / (2.0 * (w.re - z.re))
    R = abs(z.value - c)
    far = c + np.copysign(R, c)
    near = (2.0 * c * z.re - abs(z.value) ** 2) / far
    left, right = sorted((far, near))
    if z.re < w.re:
        return HalfPlanePoint(left, 0.0), HalfPlanePoint(right, 0.0)
    return HalfPlanePoint(right, 0.0), HalfPlanePoint(left, 0.0)


def distance(z, w):
    """
    Hyperbolic distance |ln [z, z*; w, w*]| of two interior points.
    """
    z, w = _interior(z), _interior(w)
    if z == w:
        return 0.0
    z_star, w_star = geodesic_endpoints(z, w)
    return float(abs(np.log(abs(cross_ratio(z, z_star, w, w_star)))))


def distance_closed_form(z, w):
    """2 asinh(|z - w| / (2 sqrt(Im z Im w))), i.e. cosh d = 1 + |z - w|^2 / (2 Im z Im w)"""
    z, w = _interior(z), _interior(w)
    return float(2.0 * np.arcsinh(abs(z.value - w.value) / (2.0 * np.sqrt(z.im * w.im))))


# g-functions

@dataclass(frozen=True)
class GFunctionState:
    """
    exp(phi E) = g0 I + g1 E for the companion matrix E of x^2 - 2 p0 x + p2, and U = -g0 / g1.
    """
    p0: float
    p2: float
    phi: float
    g0: float
    g1: float
    U: Optional[float]

    @property
    def mass(self):
        return shell_mass(self.p0, self.p2)

    @property
    def determinant(self):
        return self.g0 ** 2 + 2 * self.p0 * self.g0 * self.g1 + self.p2 * self.g1 ** 2

    def determinant_residual(self):
        expected = np.exp(2.0 * self.p0 * self.phi)
        return abs(self.determinant - expected) / expected


def shell_mass(p0, p2):
    """m = sqrt(p0^2 - p2), half the gap between the roots p0 -+ m."""
    discriminant = p0 * p0 - p2
    if discriminant < 0:
        raise DomainError(f'complex eigenvalues: p0^2 - p2 = {discriminant}')
    return float(np.sqrt(discriminant))


def companion_matrix(p0, p2):
    return np.array([[0.0, -p2], [1.0, 2.0 * p0]])


def g_evolution(p0, p2, phi):
    """
    g1 = e^{p0 phi} sinh(m phi) / m, g0 = e^{p0 phi} (cosh(m phi) - p0 sinh(m phi) / m), with the
    confluent limit g1 = phi e^{p0 phi} at m = 0.
    """
    m = shell_mass(p0, p2)
    scale = np.exp(p0 * phi)
    shape = phi if m == 0 else np.sinh(m * phi) / m
    g1 = scale * shape
    g0 = scale * (np.cosh(m * phi) - p0 * shape)
    U = -g0 / g1 if g1 != 0 else None
    return GFunctionState(p0, p2, phi, float(g0), float(g1), U)


def transfer_matrix(p0, p2, phi):
    state = g_evolution(p0, p2, phi)
    return state.g0 * np.eye(2) + state.g1 * companion_matrix(p0, p2)


def transfer_expm_residual(p0, p2, phi):
    """Entrywise relative gap between g0 I + g1 E and scipy's exp(phi E)."""
    oracle = expm(phi * companion_matrix(p0, p2))
    return float(np.max(np.abs(transfer_matrix(p0, p2, phi) - oracle)) / np.max(np.abs(oracle)))


def transfer_semigroup_residual(p0, p2, phi1, phi2):
    composed = transfer_matrix(p0, p2, phi1) @ transfer_matrix(p0, p2, phi2)
    direct = transfer_matrix(p0, p2, phi1 + phi2)
    return float(np.max(np.abs(direct - composed)) / np.max(np.abs(direct)))


def u_recovery_residual(p0, p2, phi):
    """|p0 - U - m coth(m phi)|, with 1/phi at m = 0"""
    state = g_evolution(p0, p2, phi)
    m = state.mass
    expected = 1.0 / phi if m == 0 else m / np.tanh(m * phi)
    return float(abs(p0 - state.U - expected))


def riccati_residual(p0, p2, phi, h=RICCATI_STEP):
    """
    |(U(phi + h) - U(phi - h)) / 2h - (U^2 - 2 p0 U + p2)|
    """
    if not phi > h > 0:
        raise DomainError(f'need phi > h > 0, got phi={phi}, h={h}')
    U = g_evolution(p0, p2, phi).U
    derivative = (g_evolution(p0, p2, phi + h).U - g_evolution(p0, p2, phi - h).U) / (2.0 * h)
    return float(abs(derivative - (U * U - 2.0 * p0 * U + p2)))


def translate_eigenvalues(p0, p2, u):
    """
    Shift both roots of x^2 - 2 p0 x + p2 by u: p0 -> p0 + u, p2 -> p2 + 2 p0 u + u^2; the mass is unchanged.
    :return: (p0, p2)
    """
    return p0 + u, p2 + 2.0 * p0 * u + u * u


def shell_roots(p0, p2):
    """(x2, x1) = (p0 - m, p0 + m)"""
    m = shell_mass(p0, p2)
    return p0 - m, p0 + m


def _check_segment(zl, wl, p0, p2):
    x2, x1 = shell_roots(p0, p2)
    if not (x2 < min(zl, wl) and max(zl, wl) < x1):
        raise DomainError(f'segment [{zl}, {wl}] must lie strictly between the roots {x2} and {x1}')
    return x2, x1


def momentum_distance_integral(zl, wl, p0, p2):
    """
    2m |integral of dx / (x^2 - 2 p0 x + p2) over [zl, wl]|, the segment strictly inside the roots.
    """
    x2, x1 = _check_segment(zl, wl, p0, p2)
    if zl == wl:
        return 0.0
    m = 0.5 * (x1 - x2)
    value, error = quad(lambda x: 1.0 / ((x - x1) * (x - x2)), zl, wl,
                        epsabs=QUAD_TOLERANCE, epsrel=QUAD_TOLERANCE, limit=200)
    logger.debug('momentum integral %.17g, quadrature error estimate %.3e', value, error)
    return float(2.0 * m * abs(value))


def momentum_distance_closed_form(zl, wl, p0, p2):
    """|ln((wl - x1)(zl - x2) / ((zl - x1)(wl - x2)))|"""
    x2, x1 = _check_segment(zl, wl, p0, p2)
    return float(abs(np.log((wl - x1) * (zl - x2) / ((zl - x1) * (wl - x2)))))


def momentum_distance_cross_ratio(zl, wl, p0, p2):
    """|ln [wl, z*; zl, w*]| with z* the root beside zl and w* the root beside wl."""
    x2, x1 = _check_segment(zl, wl, p0, p2)
    if zl == wl:
        return 0.0
    z_star, w_star = (x2, x1) if zl < wl else (x1, x2)
    return float(abs(np.log(abs(cross_ratio(wl, z_star, zl, w_star)))))
