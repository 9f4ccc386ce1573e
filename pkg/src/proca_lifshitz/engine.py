"""Casimir free interaction energy and force between two planar slabs
coupled through a massive (Proca) vector field.

The energy per unit area is a primed Matsubara sum (``n = 0`` weighted by
one half) of transverse-momentum integrals of

    ln(1 - R_l^TE R_r^TE exp(-2 q_T d)) + ln det(1 - R_l^TM U R_r^TM U)

with ``U = diag(exp(-q_T d), exp(-q_L d))``. Every integral is written in
``z = d q_T`` of the gap, running from ``d kappa_T`` to infinity, so that

    E = (k_B T A / 2 pi d^2) * sum'_n int z [TE + TM] dz.

At zero temperature the sum becomes ``(1/theta) int dz_n`` and

    E = (hbar c A / 4 pi^2 d^3) * int_0^inf dz_n int z [TE + TM] dz.

Two integrands are provided. The general one builds the reflection
matrices of arbitrary lossless slabs and evaluates the determinant
directly. The fast one is restricted to identical plasma (or perfectly
conducting) slabs across a vacuum gap and uses the factorization
``det = (1 - T+ x)(1 - T- x)``.

Every evaluation produces a plan: the Matsubara indices (or outer
quadrature nodes at ``T = 0``) and the final inner partition. Replaying a
plan at a nearby separation gives an energy that is smooth in ``d``,
which is what the finite-difference force relies on.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import C, HBAR, K_B, GeometryField, ReducedPoint
from .materials import VACUUM, ConstantDispersion, MaterialModel, PerfectConductor, Plasma, Vacuum
from .quadrature import (U_MAX, ConvergenceError, Partition, integrate_batch,
                         integrate_on_partition, matsubara_sum)
from .spectrum import _LAM2_FLOOR, _medium, _Medium, _round_trip_from_t, _te_pair, _tm_kernel

__all__ = [
    "SolverConfig", "System", "EnergyResult", "ForceResult",
    "free_energy", "free_energy_te", "free_energy_tm", "free_energy_reduced",
    "reduced_energy_parts", "zero_temperature_energy", "casimir_force", "ConvergenceError",
]

# the inner z-integral is cut where exp(-2 (z - lower)) < 1e-20
_TAIL = 24.0
_INNER_BREAKS = np.array([0.0, 0.45, 0.9, 1.5, 2.3, 3.4, U_MAX])
_OUTER_BREAKS = (0.0, 0.25, 0.5, 1.0, 2.0, 3.5, 6.0, 10.0, 16.0)


@dataclass(frozen=True)
class SolverConfig:
    """Numerical budgets shared by all engine operations.

    ``quad_max_depth`` bounds the number of bisections of any inner
    quadrature interval.
    """

    rel_tol: float = 1e-10
    abs_floor: float = 1e-300
    max_matsubara: int = 10**6
    quad_max_depth: int = 50
    fd_rel_step: float = 1e-4

    def __post_init__(self):
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol!r}")
        if not self.abs_floor >= 0.0:
            raise ValueError("abs_floor must be non-negative")
        if not self.max_matsubara >= 1:
            raise ValueError("max_matsubara must be >= 1")
        if not self.quad_max_depth >= 1:
            raise ValueError("quad_max_depth must be >= 1")
        if not 0.0 < self.fd_rel_step < 0.1:
            raise ValueError("fd_rel_step must lie in (0, 0.1)")

    @property
    def min_width(self) -> float:
        return U_MAX * 2.0 ** (-self.quad_max_depth)


@dataclass(frozen=True)
class System:
    """Left slab, gap medium and right slab (``right`` defaults to ``left``)."""

    left: MaterialModel
    gap: MaterialModel = VACUUM
    right: MaterialModel | None = None

    def __post_init__(self):
        if self.right is None:
            object.__setattr__(self, "right", self.left)
        if isinstance(self.gap, PerfectConductor):
            raise ValueError("the gap medium cannot be a perfect conductor")
        if not isinstance(self.gap, (Vacuum, ConstantDispersion)):
            raise ValueError("the gap must be vacuum or a constant dielectric")
        pec = isinstance(self.left, PerfectConductor) or isinstance(self.right, PerfectConductor)
        if pec and not (isinstance(self.gap, Vacuum) and self.gap.mu_rel == 1.0):
            raise ValueError("perfectly conducting slabs require a vacuum gap")

    @property
    def plasma_symmetric(self) -> bool:
        """Identical non-magnetic plasma or perfectly conducting slabs across vacuum."""
        gap_ok = isinstance(self.gap, Vacuum) and self.gap.mu_rel == 1.0
        same = self.left == self.right and self.left.mu_rel == 1.0
        kind = isinstance(self.left, (PerfectConductor, Plasma))
        return gap_ok and same and kind


@dataclass(frozen=True)
class EnergyResult:
    value_joule: float
    per_area: float
    reduced_thermal: float | None
    est_abs_error: float
    matsubara_terms: int
    quad_evals: int
    te_part: float
    tm_part: float


@dataclass(frozen=True)
class ForceResult:
    """Force (N) and pressure (N/m^2); negative means attraction."""

    force: float
    per_area: float
    est_abs_error: float
    energy: EnergyResult


@dataclass(frozen=True)
class _Plan:
    thermal: bool
    samples: np.ndarray  # Matsubara indices, or z_n nodes at T = 0
    weights: np.ndarray  # primed-sum or outer quadrature weights
    partition: Partition = field(repr=False)


@dataclass(frozen=True)
class _Eval:
    parts: np.ndarray  # reduced (te, tm) totals
    err: float  # reduced absolute error estimate
    plan: _Plan
    evals: int


# --- integrands ------------------------------------------------------------

def _take(med: _Medium, own) -> _Medium:
    def pick(x):
        x = np.asarray(x, dtype=float)
        return x[own] if x.ndim else x
    return _Medium(pick(med.kT2), pick(med.kL2), med.mu, pick(med.inv_n2), med.pec)


def _log1m(y, one_minus_y, z):
    """``ln(1 - y)`` given both ``y`` and an accurate ``1 - y``."""
    # rounding can push 1 - y to <= 0 only where 1 - exp(-2z) is tiny
    omy = np.where((one_minus_y <= 0.0) & (z < 1e-6), 1e-300, one_minus_y)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(y < 0.5, np.log1p(-np.minimum(y, 0.5)), np.log(omy))


def _general_factory(system: System, d: float, lam: float, parts=("te", "tm")):
    """Integrand builder in ``u`` (``z = a_n + u^2``) for arbitrary slabs."""
    # below the floor the longitudinal coupling is zero in double precision
    mass2 = lam * lam if lam * lam >= _LAM2_FLOOR else 0.0
    scale2 = (d / C) ** 2
    do_te, do_tm = "te" in parts, "tm" in parts

    def build(zn):
        zn = np.asarray(zn, dtype=float)
        xi = zn * (C / d)
        w2 = zn * zn
        left = _medium(system.left, xi, w2, scale2, mass2)
        gap = _medium(system.gap, xi, w2, scale2, mass2)
        right = _medium(system.right, xi, w2, scale2, mass2)
        a_own = np.sqrt(np.broadcast_to(gap.kT2, zn.shape))

        def f(u, own):
            t = u * u
            a = a_own[own]
            z = a + t
            k2 = t * (t + 2.0 * a)
            L, B, R = _take(left, own), _take(gap, own), _take(right, own)
            x = np.exp(-2.0 * z)
            omx = -np.expm1(-2.0 * z)
            jac = 2.0 * u * z
            out = []
            if do_te:
                rl, oml = _te_pair(L, B, k2)
                rr, omr = _te_pair(R, B, k2)
                out.append(jac * _log1m(rl * rr * x, omx + (oml + rl * omr) * x, z))
            if do_tm:
                l11, l12, l21, l22, _ = _tm_kernel(L, B, k2, mass2, 1.0)
                r11, r12, r21, r22, _ = _tm_kernel(R, B, k2, mass2, -1.0)
                e1 = np.exp(-z)
                e2 = np.exp(-np.sqrt(B.kL2 + k2))
                e12 = e1 * e2
                x1 = e1 * e1
                m11 = l11 * r11 * x1 + l12 * r21 * e12
                m22 = l21 * r12 * e12 + l22 * r22 * e2 * e2
                det = (l11 * l22 - l12 * l21) * (r11 * r22 - r12 * r21) * x1 * e2 * e2
                y = m11 + m22 - det
                out.append(jac * _log1m(y, 1.0 - y, z))
            return np.array(out)

        return f

    return build


def _fast_factory(lam: float, alpha: float):
    """Integrand builder for identical plasma slabs across vacuum (``alpha = 0``
    is the perfect conductor)."""

    def build(zn):
        zn = np.asarray(zn, dtype=float)
        a_own = np.sqrt(zn * zn + lam * lam)

        def f(u, own):
            t = u * u
            zo = zn[own]
            z = a_own[own] + t
            x = np.exp(-2.0 * z)
            omx = -np.expm1(-2.0 * z)
            jac = 2.0 * u * z
            if alpha == 0.0:
                te = _log1m(x, omx, z)
            else:
                az = alpha * z
                s = np.sqrt(1.0 + az * az) + az
                r = 1.0 / (s * s)
                om_r2 = (2.0 * az / s) * (1.0 + r)
                te = _log1m(r * r * x, omx + om_r2 * x, z)
            tp, tm = _round_trip_from_t(t, zo, lam, alpha)
            tm_log = _log1m(tp * x, omx + np.maximum(1.0 - tp, 0.0) * x, z) + np.log1p(-tm * x)
            return np.array([jac * te, jac * tm_log])

        return f

    return build


# --- sum and integral drivers ----------------------------------------------

def _inner(build, zn, cfg: SolverConfig):
    f = build(zn)
    return integrate_batch(f, len(zn), breaks=_INNER_BREAKS, rtol=cfg.rel_tol,
                           atol=cfg.abs_floor, min_width=cfg.min_width)


def _thermal_eval(build, theta: float, cfg: SolverConfig) -> _Eval:
    chunks = []

    def term(n):
        res = _inner(build, n * theta, cfg)
        w = np.where(n == 0, 0.5, 1.0)
        chunks.append((n, res))
        return w * res.values.sum(axis=0)

    _, used = matsubara_sum(term, cfg.rel_tol, cfg.abs_floor, cfg.max_matsubara)
    n_all = np.arange(used)
    weights = np.where(n_all == 0, 0.5, 1.0)
    vals, errs, owners, los, his = [], [], [], [], []
    evals = 0
    for n, res in chunks:
        evals += res.evals
        keep = n < used
        if not np.any(keep):
            continue
        vals.append(res.values[:, keep])
        errs.append(res.errors[:, keep])
        p = res.partition
        sel = p.owner < keep.sum()
        owners.append(p.owner[sel] + n[0])
        los.append(p.lo[sel])
        his.append(p.hi[sel])
    vals = np.concatenate(vals, axis=1)
    errs = np.concatenate(errs, axis=1)
    part = Partition(np.concatenate(owners), np.concatenate(los), np.concatenate(his), used)
    totals = np.array([math.fsum(weights * v) for v in vals])
    terms = weights * vals.sum(axis=0)
    # truncation: the last terms decay at least geometrically
    tail = float(np.sum(np.abs(terms[-3:])))
    err = float(np.sum(weights * errs.sum(axis=0))) + tail
    return _Eval(totals, err, _Plan(True, n_all.astype(float), weights, part), evals)


def _zero_t_eval(build, lam_gap: float, cfg: SolverConfig) -> _Eval:
    """Outer integral over ``z_n``; ``lam_gap`` sets where the integrand dies."""
    zmax = math.sqrt((lam_gap + _TAIL) ** 2 - lam_gap**2)
    breaks = [b for b in _OUTER_BREAKS if b < zmax] + [zmax]
    evals = 0

    def outer(x, _owner):
        nonlocal evals
        res = _inner(build, x, cfg)
        evals += res.evals
        return res.values

    res_out = integrate_batch(outer, 1, breaks=breaks, rtol=cfg.rel_tol, atol=cfg.abs_floor,
                              min_width=1e-12)
    x, w = res_out.partition.nodes()
    samples, weights = x.ravel(), w.ravel()
    res = _inner(build, samples, cfg)
    evals += res.evals
    totals = np.array([math.fsum(weights * v) for v in res.values])
    err = float(res_out.errors.sum()) + float(np.sum(weights * res.errors.sum(axis=0)))
    return _Eval(totals, err, _Plan(False, samples, weights, res.partition), evals)


def _replay(build, plan: _Plan, theta: float) -> np.ndarray:
    zn = plan.samples * theta if plan.thermal else plan.samples
    vals = integrate_on_partition(build(zn), plan.partition)
    return np.array([math.fsum(plan.weights * v) for v in vals])


# --- SI entry points -------------------------------------------------------

def _reduced_params(geom: GeometryField):
    lam = geom.m_mass * C * geom.d / HBAR
    theta = 2.0 * math.pi * K_B * geom.T_temp * geom.d / (HBAR * C)
    return lam, theta


def _prefactor(geom: GeometryField, thermal: bool) -> float:
    if thermal:
        return K_B * geom.T_temp * geom.A / (2.0 * math.pi * geom.d**2)
    return HBAR * C * geom.A / (4.0 * math.pi**2 * geom.d**3)


def _gap_decay_lambda(system: System, lam: float) -> float:
    # at T = 0 the outer integrand decays like exp(-2 sqrt(n_gap^2 z_n^2 + lam^2))
    n_gap = 1.0
    if isinstance(system.gap, ConstantDispersion):
        n_gap = math.sqrt(system.gap.eps_rel * system.gap.mu_rel)
    return lam / n_gap


def _evaluate(system: System, geom: GeometryField, cfg: SolverConfig, parts):
    lam, theta = _reduced_params(geom)
    build = _general_factory(system, geom.d, lam, parts)
    if geom.T_temp > 0.0:
        ev = _thermal_eval(build, theta, cfg)
    else:
        ev = _zero_t_eval(build, _gap_decay_lambda(system, lam), cfg)
    return ev, build


def _result(ev: _Eval, geom: GeometryField, parts) -> EnergyResult:
    pref = _prefactor(geom, ev.plan.thermal)
    te = float(pref * ev.parts[0]) if "te" in parts else 0.0
    tm = float(pref * ev.parts[-1]) if "tm" in parts else 0.0
    value = te + tm
    reduced = value / pref if ev.plan.thermal else None
    n_terms = len(ev.plan.samples) if ev.plan.thermal else 0
    return EnergyResult(value, value / geom.A, reduced, float(abs(pref) * ev.err), n_terms,
                        ev.evals, te, tm)


def free_energy_te(system: System, geom: GeometryField, cfg: SolverConfig = SolverConfig()) -> EnergyResult:
    """TE contribution to the free interaction energy (J); ``tm_part`` is zero."""
    ev, _ = _evaluate(system, geom, cfg, ("te",))
    return _result(ev, geom, ("te",))


def free_energy_tm(system: System, geom: GeometryField, cfg: SolverConfig = SolverConfig()) -> EnergyResult:
    """TM/longitudinal contribution (J) from the 2x2 determinant; ``te_part`` is zero."""
    ev, _ = _evaluate(system, geom, cfg, ("tm",))
    return _result(ev, geom, ("tm",))


def free_energy(system: System, geom: GeometryField, cfg: SolverConfig = SolverConfig()) -> EnergyResult:
    """Total free interaction energy (J).

    ``T_temp = 0`` switches to the zero-temperature double integral, in
    which case ``reduced_thermal`` is ``None`` and ``matsubara_terms`` is 0.
    """
    ev, _ = _evaluate(system, geom, cfg, ("te", "tm"))
    return _result(ev, geom, ("te", "tm"))


def casimir_force(system: System, geom: GeometryField, cfg: SolverConfig = SolverConfig()) -> ForceResult:
    """``F = -dE/dd`` by a central difference with one Richardson level.

    Temperature, mass and material parameters are held fixed, so the
    reduced parameters all move with ``d``. Every stencil point replays the
    plan of the central evaluation.
    """
    d = geom.d
    h = cfg.fd_rel_step * d
    if not (d - h < d < d + h) or h == 0.0:
        raise ArithmeticError("finite-difference step collapsed at this separation")
    parts = ("te", "tm")
    ev, _ = _evaluate(system, geom, cfg, parts)
    plan = ev.plan

    def energy(dd):
        g = geom.with_d(dd)
        lam, theta = _reduced_params(g)
        build = _general_factory(system, dd, lam, parts)
        return _prefactor(g, plan.thermal) * float(np.sum(_replay(build, plan, theta)))

    def central(step):
        return -(energy(d + step) - energy(d - step)) / (2.0 * step)

    d1, d2 = central(h), central(0.5 * h)
    force = (4.0 * d2 - d1) / 3.0
    energy_res = _result(ev, geom, parts)
    # error: quadrature noise amplified by the stencil plus the Richardson residual
    err = abs(d2 - d1) / 3.0 + 4.0 * energy_res.est_abs_error * cfg.rel_tol / h
    return ForceResult(force, force / geom.A, err, energy_res)


# --- reduced fast path -----------------------------------------------------

def _check_fast(point: ReducedPoint):
    if not isinstance(point, ReducedPoint):
        raise TypeError("point must be a ReducedPoint")


def free_energy_reduced(point: ReducedPoint, cfg: SolverConfig = SolverConfig()) -> float:
    """Dimensionless energy ``e`` with ``E = (k_B T A / 2 pi d^2) e`` for identical
    plasma slabs (``alpha = 0``: perfect conductors) across a vacuum gap."""
    _check_fast(point)
    if not point.theta > 0.0:
        raise ValueError("free_energy_reduced requires theta > 0")
    ev = _thermal_eval(_fast_factory(point.lam, point.alpha), point.theta, cfg)
    return float(np.sum(ev.parts))


def reduced_energy_parts(point: ReducedPoint, cfg: SolverConfig = SolverConfig()):
    """``(te, tm, err, terms)`` of the reduced fast-path energy (``theta > 0``)."""
    _check_fast(point)
    if not point.theta > 0.0:
        raise ValueError("theta must be > 0")
    ev = _thermal_eval(_fast_factory(point.lam, point.alpha), point.theta, cfg)
    return float(ev.parts[0]), float(ev.parts[1]), ev.err, len(ev.plan.samples)


def zero_temperature_energy(point: ReducedPoint, cfg: SolverConfig = SolverConfig()) -> float:
    """Zero-temperature energy ``e0`` with ``E = (hbar c A / d^3) e0``.

    ``point.theta`` must be zero. The primed sum is replaced by the
    integral over ``z_n`` and both integrals are evaluated adaptively.
    """
    _check_fast(point)
    if point.theta != 0.0:
        raise ValueError("zero_temperature_energy requires theta == 0")
    ev = _zero_t_eval(_fast_factory(point.lam, point.alpha), point.lam, cfg)
    return float(np.sum(ev.parts)) / (4.0 * math.pi**2)
