"""Imaginary-axis wave numbers and reflection objects for a massive vector
field at a single evaluation point.

Two families of entry points live here:

* SI functions (:func:`wave_numbers`, :func:`reflection_te`,
  :func:`reflection_tm`) taking an imaginary frequency ``xi`` (rad/s), a
  mass (kg) and a transverse wave number (1/m).
* The reduced plasma-model block (:func:`uv_block`,
  :func:`round_trip_factors`) written in ``(z, z_n, lambda, alpha)``.

The reflection kernels are homogeneous in the wave numbers, so the engine
feeds them d-scaled (dimensionless) wave numbers through the same code.
Permeabilities enter only through ratios and are used in relative units.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import C, HBAR
from .materials import MaterialModel, PerfectConductor, Vacuum


class SingularDenominatorError(ArithmeticError):
    """The TM denominator vanished at an evaluation point."""


@dataclass(frozen=True)
class WaveNumbers:
    kappa_T: np.ndarray
    q_T: np.ndarray
    kappa_L: np.ndarray
    q_L: np.ndarray


@dataclass(frozen=True)
class TEReflection:
    value: np.ndarray


@dataclass(frozen=True)
class TMReflectionMatrix:
    r11: np.ndarray
    r12: np.ndarray
    r21: np.ndarray
    r22: np.ndarray
    delta: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.array([[self.r11, self.r12], [self.r21, self.r22]])


@dataclass(frozen=True)
class RoundTripFactors:
    t_plus: np.ndarray
    t_minus: np.ndarray


def _sqrt_clamped(x, scale=1.0):
    x = np.asarray(x, dtype=float)
    if np.any(x < -1e-15 * np.maximum(np.abs(scale), 1e-300)):
        raise ValueError("negative radicand in wave-number evaluation")
    return np.sqrt(np.maximum(x, 0.0))


def _out(x):
    x = np.asarray(x)
    return x[()] if x.ndim == 0 else x


# --- medium description shared by the SI and reduced code paths -------------

@dataclass(frozen=True)
class _Medium:
    """Squared wave numbers of one region, in any consistent unit system.

    ``kT2 = mu * eps_w2 + mass2`` and ``kL2 = w2 + mass2 * inv_n2`` where
    ``w2`` is (xi/c)^2 in the chosen units, ``eps_w2 = eps_rel * w2`` and
    ``inv_n2 = 1 / (eps_rel mu_rel)``.
    """

    kT2: np.ndarray
    kL2: np.ndarray
    mu: float
    inv_n2: np.ndarray
    pec: bool = False


def _medium(model: MaterialModel, xi, w2, scale2, mass2) -> _Medium:
    """``scale2`` converts ``eps_xi2(xi)`` (rad^2/s^2) into the units of ``w2``."""
    if isinstance(model, PerfectConductor):
        w2 = np.asarray(w2, dtype=float)
        return _Medium(np.full_like(w2, np.inf), w2, model.mu_rel, np.zeros_like(w2), pec=True)
    eps_w2 = model.eps_xi2(xi) * scale2
    inv_n2 = model.inv_eps(xi) / model.mu_rel
    kT2 = model.mu_rel * eps_w2 + mass2
    kL2 = w2 + mass2 * inv_n2
    return _Medium(kT2, kL2, model.mu_rel, inv_n2)


def _te_pair(slab: _Medium, gap: _Medium, k2):
    """TE reflection coefficient and its complement ``1 - R``."""
    if slab.pec:
        shape = np.broadcast(k2, gap.kT2).shape
        return np.ones(shape), np.zeros(shape)
    qs = np.sqrt(slab.kT2 + k2)
    qb = np.sqrt(gap.kT2 + k2)
    den = qs * gap.mu + qb * slab.mu
    return (qs * gap.mu - qb * slab.mu) / den, 2.0 * qb * slab.mu / den


def _te_kernel(slab: _Medium, gap: _Medium, k2):
    return _te_pair(slab, gap, k2)[0]


def _tm_kernel(slab: _Medium, gap: _Medium, k2, mass2, sigma):
    """Entries ``(r11, r12, r21, r22, delta)`` of the TM/longitudinal block."""
    k2 = np.asarray(k2, dtype=float)
    if slab.pec:
        return _tm_pec(slab, gap, k2, mass2, sigma)
    kTs2, kTb2 = slab.kT2, gap.kT2
    kLs2, kLb2 = slab.kL2, gap.kL2
    qTs = np.sqrt(kTs2 + k2)
    qTb = np.sqrt(kTb2 + k2)
    qLs = np.sqrt(kLs2 + k2)
    qLb = np.sqrt(kLb2 + k2)
    mus, mub = slab.mu, gap.mu

    trans = qTs * mus * kTb2 + qTb * mub * kTs2
    longi = qLb * kLs2 + qLs * kLb2
    dn = slab.inv_n2 - gap.inv_n2  # (n_b^2 - n_*^2) / (n_b^2 n_*^2)
    cross = kTb2 * mus - kTs2 * mub
    mixing = mass2 * k2 * dn * cross
    delta = trans * longi + mixing
    shape = np.broadcast(delta, k2).shape

    if mass2 == 0.0:
        # r11 written with 1/eps so the plasma zero mode (eps -> inf) is finite
        eps_s = slab.inv_n2 * mus
        eps_b = gap.inv_n2 * mub
        num = qTs * eps_s - qTb * eps_b
        den = qTs * eps_s + qTb * eps_b
        with np.errstate(divide="ignore", invalid="ignore"):
            r11 = num / den
        # xi = k = 0 with a plasma slab is 0/0; take the limit along k > 0
        r11 = np.where(den == 0.0, -1.0, r11)
        r12 = np.zeros(shape)
        r22 = np.zeros(shape)
        with np.errstate(divide="ignore", invalid="ignore"):
            r21 = sigma * 2.0 * qTb * kLs2 * k2 * cross / (np.sqrt(kTb2) * delta)
        # at xi = 0 r21 diverges but multiplies r12 = 0 in every determinant
        r21 = np.where(np.isfinite(r21), r21, 0.0)
        return np.broadcast_to(r11, shape), r12, np.broadcast_to(r21, shape), r22, np.broadcast_to(delta, shape)

    if np.any(np.abs(delta) < 1e-290):
        raise SingularDenominatorError("TM denominator underflowed")
    kTb = np.sqrt(kTb2)
    with np.errstate(divide="ignore", invalid="ignore"):
        r11 = ((qTs * mus * kTb2 - qTb * mub * kTs2) * longi + mixing) / delta
        r12 = -sigma * 2.0 * kTs2 * qLb * kTb * mub * mass2 * dn / delta
        r21 = sigma * 2.0 * qTb * kLs2 * k2 * cross / (kTb * delta)
        r22 = (trans * (qLs * kLb2 - qLb * kLs2) + mixing) / delta
    if not np.all(np.isfinite(r11) & np.isfinite(r21) & np.isfinite(r22)):
        raise SingularDenominatorError("TM block lost precision; the mass is too small for this scale")
    return tuple(np.broadcast_to(x, shape) for x in (r11, r12, r21, r22, delta))


def _tm_pec(slab: _Medium, gap: _Medium, k2, mass2, sigma):
    """Perfect-conductor limit of the TM block for a vacuum gap."""
    kb2 = gap.kT2
    w2 = slab.kL2  # kappa_L of a perfect conductor tends to xi/c
    qb = np.sqrt(kb2 + k2)
    shape = np.broadcast(qb, k2).shape
    if mass2 == 0.0:
        return (np.full(shape, -1.0), np.zeros(shape), np.zeros(shape), np.zeros(shape), np.ones(shape))
    q0 = np.sqrt(w2 + k2)
    kb = np.sqrt(kb2)
    den = qb * (q0 * kb2 + qb * w2) + mass2 * k2
    r11 = (-qb * (q0 * kb2 + qb * w2) + mass2 * k2) / den
    r12 = sigma * 2.0 * qb * kb * mass2 / den
    r21 = -sigma * 2.0 * qb * w2 * k2 / (kb * den)
    r22 = (qb * (q0 * kb2 - qb * w2) + mass2 * k2) / den
    return tuple(np.broadcast_to(x, shape) for x in (r11, r12, r21, r22, den))


def _require_vacuum_gap(gap: MaterialModel):
    if not (isinstance(gap, Vacuum) and gap.mu_rel == 1.0):
        raise ValueError("a perfectly conducting slab requires a vacuum gap")


# --- SI entry points --------------------------------------------------------

def _si_medium(model, xi, m_mass):
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0.0):
        raise ValueError("xi must be >= 0")
    mass2 = (m_mass * C / HBAR) ** 2
    return _medium(model, xi, (xi / C) ** 2, 1.0 / C**2, mass2), mass2


def wave_numbers(model: MaterialModel, xi, m_mass: float, k_perp) -> WaveNumbers:
    """``kappa_T, q_T, kappa_L, q_L`` (1/m) of ``model`` at ``i xi``.

    For a perfect conductor ``kappa_T = q_T = inf`` and the longitudinal
    numbers take their limiting values ``xi/c`` and ``sqrt(xi^2/c^2 + k^2)``.
    """
    k_perp = np.asarray(k_perp, dtype=float)
    if np.any(k_perp < 0.0):
        raise ValueError("k_perp must be >= 0")
    med, _ = _si_medium(model, xi, m_mass)
    k2 = k_perp**2
    kT = _sqrt_clamped(med.kT2, med.kT2)
    kL = _sqrt_clamped(med.kL2, med.kL2)
    return WaveNumbers(_out(kT), _out(np.sqrt(med.kT2 + k2)), _out(kL), _out(np.sqrt(med.kL2 + k2)))


def reflection_te(slab: MaterialModel, gap: MaterialModel, xi, m_mass: float, k_perp) -> TEReflection:
    k2 = np.asarray(k_perp, dtype=float) ** 2
    if isinstance(slab, PerfectConductor):
        _require_vacuum_gap(gap)
    s, _ = _si_medium(slab, xi, m_mass)
    b, _ = _si_medium(gap, xi, m_mass)
    return TEReflection(_out(_te_kernel(s, b, k2)))


def reflection_tm(slab: MaterialModel, gap: MaterialModel, xi, m_mass: float, k_perp,
                  side: str = "left") -> TMReflectionMatrix:
    """TM/longitudinal reflection matrix of ``slab`` seen from ``gap``.

    ``side`` selects the sign convention of the off-diagonal entries
    (+1 for the left slab, -1 for the right one).
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    sigma = 1.0 if side == "left" else -1.0
    if isinstance(slab, PerfectConductor):
        _require_vacuum_gap(gap)
    if isinstance(gap, PerfectConductor):
        raise ValueError("the gap medium cannot be a perfect conductor")
    k2 = np.asarray(k_perp, dtype=float) ** 2
    s, mass2 = _si_medium(slab, xi, m_mass)
    b, _ = _si_medium(gap, xi, m_mass)
    return TMReflectionMatrix(*(_out(x) for x in _tm_kernel(s, b, k2, mass2, sigma)))


# --- reduced plasma-model block --------------------------------------------

def _uv_from_t(t, zn, lam, alpha):
    """``U, V11, V12, V21, V22`` at ``z = sqrt(zn^2 + lam^2) + t``.

    Passing the offset ``t`` keeps ``z^2 - zn^2 - lam^2 = t (t + 2a)`` exact
    near the lower integration limit. ``G-`` below is the rationalized form
    of ``-z zn^2 c1 + h w a2``, a sum of positive terms.
    """
    t, zn = np.broadcast_arrays(np.asarray(t, float), np.asarray(zn, float))
    lam2 = lam * lam
    al2 = alpha * alpha
    zn2 = zn * zn
    a2 = zn2 + lam2
    a = np.sqrt(a2)
    z = a + t
    e = t * (t + 2.0 * a)
    c1 = 1.0 + al2 * a2
    g = np.sqrt(1.0 + al2 * z * z)
    h2 = 1.0 + al2 * zn2
    h = np.sqrt(h2)
    w = np.sqrt(e + zn2 + al2 * z * z * zn2)

    f_plus = alpha * g * a2 + z * c1
    f_minus = alpha * g * a2 - z * c1
    g_plus = z * zn2 * c1 + h * w * a2
    m = a2 * (zn2 * h2 + al2 * zn2 * lam2) + e * (2.0 * zn2 * h2 + lam2 * (1.0 + 2.0 * al2 * zn2))
    with np.errstate(invalid="ignore", divide="ignore"):
        g_minus = np.where(g_plus > 0.0, lam2 * m / g_plus, 0.0)
    le = lam2 * e
    U = f_plus * g_plus + le
    V11 = f_minus * g_plus + le
    V22 = f_plus * g_minus + le
    V12 = 2.0 * lam2 * z * a * c1
    with np.errstate(invalid="ignore", divide="ignore"):
        V21 = np.where(a > 0.0, 2.0 * z * zn2 * c1 * e / a, 0.0)
    return U, V11, V12, V21, V22, f_plus, f_minus


def _check_domain(z, zn, lam):
    z = np.asarray(z, dtype=float)
    zn = np.asarray(zn, dtype=float)
    if np.any(z < 0) or np.any(zn < 0) or lam < 0:
        raise ValueError("arguments must be non-negative")
    a = np.sqrt(zn * zn + lam * lam)
    t = z - a
    if np.any(t < -1e-12 * np.maximum(a, 1.0)):
        raise ValueError("z must be >= sqrt(z_n^2 + lambda^2)")
    return np.maximum(t, 0.0)


def uv_block(z, z_n, lam: float, alpha: float):
    """The five quantities ``(U, V11, V12, V21, V22)`` of the plasma-model
    TM block, with ``R_TM = (1/U) [[V11, s V12], [-s V21, V22]]``."""
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    t = _check_domain(z, z_n, lam)
    U, V11, V12, V21, V22, _, _ = _uv_from_t(t, z_n, lam, alpha)
    return tuple(_out(x) for x in (U, V11, V12, V21, V22))


def reflection_te_reduced(z, alpha: float):
    """Plasma TE reflection ``(sqrt(1+a^2z^2) - az)/(sqrt(1+a^2z^2) + az)``."""
    z = np.asarray(z, dtype=float)
    az = alpha * z
    return _out(1.0 / (np.sqrt(1.0 + az * az) + az) ** 2)


_LAM2_FLOOR = 1e-60


def _round_trip_from_t(t, zn, lam, alpha):
    U, V11, V12, V21, V22, f_plus, f_minus = _uv_from_t(t, zn, lam, alpha)
    if lam * lam < _LAM2_FLOOR:
        # the common factor G+ cancels; finite even at zn = 0. Below the
        # floor the mass corrections are far below double precision relative
        # to the massless terms, while the massive block starts to underflow.
        t_plus = (f_minus / f_plus) ** 2
        return t_plus, np.zeros_like(t_plus)
    with np.errstate(invalid="ignore", divide="ignore"):
        v11, v12, v21, v22 = V11 / U, V12 / U, V21 / U, V22 / U
    s = v11 * v11 + v22 * v22 + 2.0 * v12 * v21
    disc = (v11 + v22) ** 2 + 4.0 * v12 * v21
    if np.any(disc < -1e-12):
        raise ValueError("negative discriminant in round-trip factors")
    root = np.sqrt(np.maximum(disc, 0.0))
    prod = (v11 * v22 + v12 * v21) ** 2
    sgn = v22 - v11
    big = 0.5 * (s + np.abs(sgn) * root)
    with np.errstate(invalid="ignore", divide="ignore"):
        small = np.where(big > 0.0, prod / big, 0.0)
    t_plus = np.where(sgn >= 0.0, big, small)
    t_minus = np.where(sgn >= 0.0, small, big)
    return t_plus, t_minus


def round_trip_factors(z, z_n, lam: float, alpha: float) -> RoundTripFactors:
    """Factors ``T+-`` with ``det(1 - R_l R_r x) = (1 - T+ x)(1 - T- x)``.

    The smaller root is obtained from the product of the roots to avoid
    cancellation; labels follow the sign of ``V22 - V11``.
    """
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    t = _check_domain(z, z_n, lam)
    tp, tm = _round_trip_from_t(t, z_n, lam, alpha)
    return RoundTripFactors(_out(tp), _out(tm))


def tm_matrices_from_uv(z, z_n, lam: float, alpha: float):
    """Left and right TM matrices built from the reduced block.

    Undefined where the block degenerates (``z_n = lam = 0``); use
    :func:`round_trip_factors` there.
    """
    U, V11, V12, V21, V22 = (np.asarray(x, float) for x in uv_block(z, z_n, lam, alpha))
    if np.any(U == 0.0):
        raise ValueError("TM block is degenerate at z_n = lam = 0")
    left = np.array([[V11, V12], [-V21, V22]]) / U
    right = np.array([[V11, -V12], [V21, V22]]) / U
    return left, right
