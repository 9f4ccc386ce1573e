"""Kaluza-Klein tower of a vector field in a warped two-brane geometry and
the Casimir force it produces between parallel plates.

The masses ``m_j c / hbar = z_j`` are the positive roots of

    J0(z/k) Y0(z e^{pi k R}/k) - Y0(z/k) J0(z e^{pi k R}/k) = 0.

Roots are searched in ``X = z e^{pi k R} / k``, the argument of the
second pair of Bessel functions, so that the first argument
``x = X e^{-pi k R}`` is formed in log space and never overflows. For
``x < 1e-8`` the first pair uses its small-argument series.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import j0, y0

from .constants import C, HBAR, HBAR_C_GEV_M, GeometryField
from .engine import SolverConfig, System, casimir_force
from .materials import PEC, Plasma

EULER_GAMMA = 0.5772156649015329
SMALL_ARG = 1e-8
LAMBDA_SKIP = 30.0  # tower terms beyond this reduced mass contribute < e^{-60}


class RootBracketingError(RuntimeError):
    def __init__(self, message: str, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class KKSpectrum:
    """``masses`` are ``m_j c / hbar`` in 1/m; ``kappa`` is in 1/m."""

    kappa: float
    R_radius: float
    masses: np.ndarray
    residuals: np.ndarray
    used_approx: np.ndarray


def kappa_to_inverse_m(kappa_gev: float) -> float:
    return kappa_gev / HBAR_C_GEV_M


def _small_j0_y0(log_x):
    """Leading small-argument forms of J0 and Y0 from ``ln x``."""
    x2 = math.exp(2.0 * log_x) if log_x > -300 else 0.0
    jj = 1.0 - x2 / 4.0
    yy = 2.0 / math.pi * ((log_x - math.log(2.0) + EULER_GAMMA) * jj + x2 / 4.0)
    return jj, yy


def first_pair(X: float, warp: float, series: bool | None = None):
    """``(J0(x), Y0(x))`` at ``x = X e^{-warp}``; ``series`` forces a branch."""
    log_x = math.log(X) - warp
    if series is None:
        series = log_x < math.log(SMALL_ARG)
    if series:
        return _small_j0_y0(log_x)
    x = math.exp(log_x)
    return float(j0(x)), float(y0(x))


def cross_product(X: float, warp: float, series: bool | None = None):
    """Value of the root function at ``X`` and its local scale."""
    jx, yx = first_pair(X, warp, series)
    a = jx * float(y0(X))
    b = yx * float(j0(X))
    return a - b, max(abs(a), abs(b))


def kk_masses(kappa_gev: float, R_radius: float, j_max: int) -> KKSpectrum:
    """First ``j_max`` tower masses for warp ``kappa_gev`` (GeV) and radius
    ``R_radius`` (m)."""
    if not (kappa_gev > 0 and R_radius > 0):
        raise ValueError("kappa and R must be positive")
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    kappa = kappa_to_inverse_m(kappa_gev)
    warp = math.pi * kappa * R_radius

    def f(X):
        return cross_product(X, warp)[0]

    step = math.pi / 16.0
    roots, residuals = [], []
    lo = 1e-2
    f_lo = f(lo)
    limit = 1e-2 + (j_max + 2) * math.pi * 4.0
    while len(roots) < j_max:
        hi = lo + step
        if hi > limit:
            raise RootBracketingError("could not bracket all requested roots",
                                      found=len(roots), last_interval=(lo, hi))
        f_hi = f(hi)
        if f_lo == 0.0:
            roots.append(lo)
        elif f_lo * f_hi < 0.0:
            r = brentq(f, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
            roots.append(r)
        lo, f_lo = hi, f_hi
    roots = np.array(roots[:j_max])
    for r in roots:
        val, scale = cross_product(r, warp)
        residuals.append(abs(val) / scale)
    masses = roots * kappa * math.exp(-warp)
    return KKSpectrum(kappa, R_radius, masses, np.array(residuals), np.zeros(j_max, dtype=bool))


def kk_mass_approx(kappa_gev: float, R_radius: float, j: int) -> float:
    """Linear-spacing estimate ``pi k e^{-pi k R} j`` (1/m)."""
    kappa = kappa_to_inverse_m(kappa_gev)
    if kappa * R_radius < 5.0:
        warnings.warn("linear mass spacing assumes kappa R >= 5", stacklevel=2)
    return math.pi * kappa * math.exp(-math.pi * kappa * R_radius) * j


def _system(alpha: float, d: float) -> System:
    if alpha == 0.0:
        return System(PEC)
    return System(Plasma(C / (alpha * d)))


def rs_force_terms(kappa_gev: float, R_radius: float, d: float, T: float, alpha: float,
                   j_max: int, cfg: SolverConfig = SolverConfig()):
    """Massless pressure and the per-mode tower pressures (N/m^2).

    Modes with reduced mass above 30 are returned as exact zeros.
    """
    if j_max < 0:
        raise ValueError("j_max must be >= 0")
    system = _system(alpha, d)
    massless = casimir_force(system, GeometryField(d, 1.0, 0.0, T), cfg).per_area
    terms = np.zeros(j_max)
    if j_max:
        spec = kk_masses(kappa_gev, R_radius, j_max)
        for i, z in enumerate(spec.masses):
            if z * d > LAMBDA_SKIP:
                break
            geom = GeometryField(d, 1.0, z * HBAR / C, T)
            terms[i] = casimir_force(system, geom, cfg).per_area
    return massless, terms


def rs_casimir_force(kappa_gev: float, R_radius: float, d: float, T: float, alpha: float,
                     j_max: int, cfg: SolverConfig = SolverConfig()) -> float:
    """Casimir pressure (N/m^2): massless mode plus ``j_max`` tower modes."""
    massless, terms = rs_force_terms(kappa_gev, R_radius, d, T, alpha, j_max, cfg)
    return math.fsum([massless, *terms])

