"""Physical constants, geometry containers and the reduced (dimensionless)
parametrization used throughout the package.

All constants are CODATA-2018 values, compiled in so that golden numbers
are reproducible independently of the installed SciPy version.

Reduced variables
-----------------
    lambda = m c d / hbar            (dimensionless field mass)
    alpha  = c / (omega_p d)         (finite-conductivity parameter)
    theta  = 2 pi k_B T d / (hbar c) (dimensionless temperature)

and the Matsubara frequencies map to ``z_n = n * theta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

HBAR = 1.054571817e-34  # J s
C = 299792458.0  # m / s
K_B = 1.380649e-23  # J / K
EPS0 = 8.8541878128e-12  # F / m
MU0 = 1.25663706212e-6  # H / m
HBAR_C_GEV_M = 1.973269804e-16  # GeV m
ZETA3 = 1.2020569031595943


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = HBAR
    c: float = C
    k_B: float = K_B
    eps0: float = EPS0
    mu0: float = MU0


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class GeometryField:
    """Plate separation ``d`` (m), plate area ``A`` (m^2), field mass
    ``m_mass`` (kg) and temperature ``T_temp`` (K)."""

    d: float
    A: float = 1.0
    m_mass: float = 0.0
    T_temp: float = 0.0

    def __post_init__(self):
        if not (self.d > 0.0 and math.isfinite(self.d)):
            raise ValueError(f"separation d must be positive and finite, got {self.d!r}")
        if not self.A > 0.0:
            raise ValueError(f"plate area A must be positive, got {self.A!r}")
        if not self.m_mass >= 0.0:
            raise ValueError(f"field mass must be non-negative, got {self.m_mass!r}")
        if not self.T_temp >= 0.0:
            raise ValueError(f"temperature must be non-negative, got {self.T_temp!r}")

    def with_d(self, d: float) -> "GeometryField":
        return GeometryField(d=d, A=self.A, m_mass=self.m_mass, T_temp=self.T_temp)


@dataclass(frozen=True)
class ReducedPoint:
    lam: float
    alpha: float
    theta: float

    def __post_init__(self):
        for name in ("lam", "alpha", "theta"):
            value = getattr(self, name)
            if not value >= 0.0:
                raise ValueError(f"{name} must be non-negative, got {value!r}")

    def z_n(self, n):
        return n * self.theta


def to_reduced(geom: GeometryField, omega_p: float) -> ReducedPoint:
    """Map SI inputs to ``(lambda, alpha, theta)``.

    ``omega_p = math.inf`` encodes a perfect conductor and gives ``alpha = 0``.
    """
    if not omega_p > 0.0:
        raise ValueError(f"plasma frequency must be positive, got {omega_p!r}")
    lam = geom.m_mass * C * geom.d / HBAR
    alpha = 0.0 if math.isinf(omega_p) else C / (omega_p * geom.d)
    theta = 2.0 * math.pi * K_B * geom.T_temp * geom.d / (HBAR * C)
    return ReducedPoint(lam, alpha, theta)


def from_reduced(point: ReducedPoint, d: float, A: float = 1.0) -> tuple[GeometryField, float]:
    """Inverse of :func:`to_reduced` for a given separation; returns
    ``(geometry, omega_p)`` with ``omega_p = inf`` when ``alpha == 0``."""
    m_mass = point.lam * HBAR / (C * d)
    T = point.theta * HBAR * C / (2.0 * math.pi * K_B * d)
    omega_p = math.inf if point.alpha == 0.0 else C / (point.alpha * d)
    return GeometryField(d=d, A=A, m_mass=m_mass, T_temp=T), omega_p


def mass_from_lambda(lam: float, d: float) -> float:
    return lam * HBAR / (C * d)


def temperature_from_theta(theta: float, d: float) -> float:
    return theta * HBAR * C / (2.0 * math.pi * K_B * d)


def omega_p_from_alpha(alpha: float, d: float) -> float:
    return math.inf if alpha == 0.0 else C / (alpha * d)


def energy_scale_thermal(geom: GeometryField) -> float:
    """``k_B T A / (2 pi d^2)`` in joules."""
    return K_B * geom.T_temp * geom.A / (2.0 * math.pi * geom.d**2)


def energy_scale_zeroT(geom: GeometryField) -> float:
    """``hbar c A / d^3`` in joules."""
    return HBAR * C * geom.A / geom.d**3
