"""Limiting cases evaluated by direct transcription, as cross-checks of the
engine.

Both functions use ``scipy.integrate.quad`` and their own Matsubara loop,
and neither touches the reflection kernels of :mod:`spectrum`.

* :func:`massless_lifshitz_energy` is the Lifshitz formula for a massless
  field, with the scalar Fresnel coefficients written in terms of
  ``eps`` and ``mu``.
* :func:`perfect_conductor_energy` is the closed form for perfectly
  conducting plates: two massless-like modes ``(1 - e^{-2z})^2`` plus
  the continuum factor ``1 - Lambda^2 e^{-2z}`` with
  ``Lambda = (z - sqrt(z^2 - lambda^2)) / (z + sqrt(z^2 - lambda^2))``.
"""
from __future__ import annotations

import math
import warnings

from scipy.integrate import IntegrationWarning, quad

from .constants import C, HBAR, K_B, GeometryField
from .engine import EnergyResult, SolverConfig, System
from .materials import MaterialModel, PerfectConductor
from .quadrature import ConvergenceError

_QUAD_REL = 1e-12
_CUT = 36.0  # exp(-2 * 36) ~ 2e-32 relative to the integrand at the lower limit


def _quad(f, lo, hi, points=None):
    # roundoff warnings near the requested precision are expected; the
    # returned error estimate is propagated instead
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        return quad(f, lo, hi, epsabs=0.0, epsrel=_QUAD_REL, limit=400, points=points)


def _primed_loop(term, cfg: SolverConfig):
    """Primed Matsubara sum of ``term(n) -> (te, tm, err)``; stops after three
    consecutive terms below ``rel_tol`` of the partial sum."""
    te_terms, tm_terms, errs = [], [], []
    partial = 0.0
    small = 0
    for n in range(cfg.max_matsubara):
        w = 0.5 if n == 0 else 1.0
        te, tm, err = term(n)
        te_terms.append(w * te)
        tm_terms.append(w * tm)
        errs.append(w * err)
        value = w * (te + tm)
        partial += value
        if abs(value) <= max(cfg.rel_tol * abs(partial), cfg.abs_floor):
            small += 1
            if small >= 3:
                tail = sum(abs(a) + abs(b) for a, b in zip(te_terms[-3:], tm_terms[-3:]))
                return math.fsum(te_terms), math.fsum(tm_terms), math.fsum(errs) + tail, n + 1
        else:
            small = 0
    raise ConvergenceError("Matsubara sum did not converge", terms=cfg.max_matsubara)


def _material_terms(model: MaterialModel, zeta: float, d: float):
    """``(eps_rel * zeta^2, 1/eps_rel, mu_rel)`` in units of 1/d^2."""
    xi = zeta * C / d
    return float(model.eps_xi2(xi)) * (d / C) ** 2, float(model.inv_eps(xi)), model.mu_rel


def massless_lifshitz_energy(system: System, geom: GeometryField,
                             cfg: SolverConfig = SolverConfig()) -> EnergyResult:
    """Lifshitz free energy (J) of a massless field between two slabs.

    Integrates ``K ln(1 - r_l r_r exp(-2 q))`` over ``K = k d`` for each
    polarization, with ``q = d sqrt(k^2 + eps_b mu_b xi^2/c^2)``. The
    field mass stored in ``geom`` is ignored.
    """
    if not geom.T_temp > 0.0:
        raise ValueError("massless_lifshitz_energy requires T > 0")
    d = geom.d
    theta = 2.0 * math.pi * K_B * geom.T_temp * d / (HBAR * C)

    def fresnel(model, gap_eps_w2, gap_inv_eps, gap_mu, zeta, K2, q):
        if isinstance(model, PerfectConductor):
            return -1.0, 1.0
        eps_w2, inv_eps, mu = _material_terms(model, zeta, d)
        qs = math.sqrt(K2 + mu * eps_w2)
        r_te = (gap_mu * qs - mu * q) / (gap_mu * qs + mu * q)
        # TM written with 1/eps so that the plasma zero mode gives r_TM = 1
        r_tm = (gap_inv_eps * q - inv_eps * qs) / (gap_inv_eps * q + inv_eps * qs)
        return r_te, r_tm

    def term(n):
        zeta = n * theta
        gap_eps_w2, gap_inv_eps, gap_mu = _material_terms(system.gap, zeta, d)
        q0 = math.sqrt(gap_mu * gap_eps_w2)
        k_max = math.sqrt((q0 + _CUT) ** 2 - q0 * q0)

        def parts(K):
            K2 = K * K
            q = math.sqrt(K2 + gap_mu * gap_eps_w2)
            lte, ltm = fresnel(system.left, gap_eps_w2, gap_inv_eps, gap_mu, zeta, K2, q)
            rte, rtm = fresnel(system.right, gap_eps_w2, gap_inv_eps, gap_mu, zeta, K2, q)
            x = math.exp(-2.0 * q)
            return K * math.log1p(-lte * rte * x), K * math.log1p(-ltm * rtm * x)

        pts = [min(1.0, k_max / 2)]
        te, e1 = _quad(lambda K: parts(K)[0], 0.0, k_max, pts)
        tm, e2 = _quad(lambda K: parts(K)[1], 0.0, k_max, pts)
        return te, tm, e1 + e2

    te, tm, err, used = _primed_loop(term, cfg)
    pref = K_B * geom.T_temp * geom.A / (2.0 * math.pi * d**2)
    value = pref * (te + tm)
    return EnergyResult(value, value / geom.A, te + tm, pref * err, used, 0, pref * te, pref * tm)


def _pc_integrand(lam: float):
    lam2 = lam * lam

    def g(z):
        # returns (TE, TM) parts of z ln[(1 - e^{-2z})^2 (1 - Lambda^2 e^{-2z})]
        x = math.exp(-2.0 * z)
        root = math.sqrt(max(z * z - lam2, 0.0))
        big = z + root
        Lam = lam2 / (big * big)
        one = math.log1p(-x) if x < 0.5 else math.log(-math.expm1(-2.0 * z))
        return one, one + math.log1p(-Lam * Lam * x)

    return g


def perfect_conductor_energy(lam: float, theta: float, geom: GeometryField,
                             cfg: SolverConfig = SolverConfig()) -> EnergyResult:
    """Energy (J) between perfectly conducting plates for a field of reduced
    mass ``lam`` at reduced temperature ``theta``.

    Only ``geom.d`` and ``geom.A`` are used; mass and temperature are
    taken from ``lam`` and ``theta``. At ``theta = 0`` the sum over modes
    is an integral, and the order of integration is swapped to give a
    single integral with weight ``z sqrt(z^2 - lam^2)``.
    """
    if lam < 0.0 or theta < 0.0:
        raise ValueError("lam and theta must be non-negative")
    g = _pc_integrand(lam)
    d = geom.d
    if theta == 0.0:
        # z = lam + s^2 removes the square-root endpoint behaviour
        def h(s, part):
            z = lam + s * s
            return 2.0 * s * s * z * math.sqrt(s * s + 2.0 * lam) * g(z)[part]
        hi = math.sqrt(_CUT)
        te, e1 = _quad(lambda s: h(s, 0), 0.0, hi, [1.0])
        tm, e2 = _quad(lambda s: h(s, 1), 0.0, hi, [1.0])
        pref = HBAR * C * geom.A / (4.0 * math.pi**2 * d**3)
        value = pref * (te + tm)
        return EnergyResult(value, value / geom.A, None, pref * (e1 + e2), 0, 0, pref * te, pref * tm)

    def term(n):
        a = math.hypot(n * theta, lam)
        te, e1 = _quad(lambda z: z * g(z)[0], a, a + _CUT, [a + 1.0])
        tm, e2 = _quad(lambda z: z * g(z)[1], a, a + _CUT, [a + 1.0])
        return te, tm, e1 + e2

    te, tm, err, used = _primed_loop(term, cfg)
    # k_B T / (2 pi d^2) written through theta
    pref = HBAR * C * theta * geom.A / (4.0 * math.pi**2 * d**3)
    value = pref * (te + tm)
    return EnergyResult(value, value / geom.A, te + tm, pref * err, used, 0, pref * te, pref * tm)
