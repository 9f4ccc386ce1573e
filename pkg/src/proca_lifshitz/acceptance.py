"""Self-contained acceptance checks, shared by ``proca-lifshitz check`` and the
test suite. Each check returns a :class:`CriterionResult`; tolerances are
fixed here and never adjusted by callers."""
from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from .asymptotics import te_alpha_expansion_exact
from .constants import C, HBAR, K_B, ZETA3, GeometryField, ReducedPoint, from_reduced
from .engine import SolverConfig, System, casimir_force, free_energy, free_energy_te
from .limits import massless_lifshitz_energy
from .materials import PEC, VACUUM, Plasma
from .rs_tower import kappa_to_inverse_m, kk_mass_approx, kk_masses, rs_casimir_force
from .spectrum import reflection_tm, round_trip_factors

D_REF = 1e-6


@dataclass(frozen=True)
class CriterionResult:
    number: str
    title: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] criterion {self.number}: {self.title} -- {self.detail}"


def _plates(point: ReducedPoint, d: float = D_REF):
    geom, omega_p = from_reduced(point, d)
    system = System(PEC) if math.isinf(omega_p) else System(Plasma(omega_p))
    return system, geom


def crit1_pc_zero_temperature() -> CriterionResult:
    t0 = time.perf_counter()
    system, geom = _plates(ReducedPoint(1e-8, 0.0, 0.001))
    e = free_energy(system, geom).per_area
    elapsed = time.perf_counter() - t0
    ref = -math.pi**2 * HBAR * C / (720 * geom.d**3)
    dev = abs(e / ref - 1)
    return CriterionResult("1", "perfect-conductor massless low-T energy", dev <= 1e-3 and elapsed < 5.0,
                           f"rel dev {dev:.3e} (tol 1e-3), runtime {elapsed:.2f} s (limit 5 s)")


def crit2_high_temperature() -> CriterionResult:
    system, geom = _plates(ReducedPoint(0.0, 0.0, 50.0))
    fr = casimir_force(system, geom)
    kT = K_B * geom.T_temp
    e_ref = -ZETA3 * kT * geom.A / (8 * math.pi * geom.d**2)
    f_ref = -ZETA3 * kT * geom.A / (4 * math.pi * geom.d**3)
    de = abs(fr.energy.value_joule / e_ref - 1)
    df = abs(fr.force / f_ref - 1)
    return CriterionResult("2", "high-temperature classical limit", max(de, df) <= 1e-6,
                           f"energy dev {de:.3e}, force dev {df:.3e} (tol 1e-6)")


def crit3_factorization(n_samples: int = 10_000, seed: int = 20240611) -> CriterionResult:
    rng = np.random.default_rng(seed)
    d = D_REF
    worst = 0.0
    for _ in range(n_samples):
        lam = rng.uniform(0.0, 2.0)
        alpha = rng.uniform(0.0, 0.5)
        zn = rng.uniform(0.0, 10.0)
        lower = math.hypot(zn, lam)
        z = lower + rng.uniform(0.0, 20.0)
        xi = zn * C / d
        m = lam * HBAR / (C * d)
        k = math.sqrt(max(z * z - lower * lower, 0.0)) / d
        slab = PEC if alpha == 0.0 else Plasma(C / (alpha * d))
        rl = reflection_tm(slab, VACUUM, xi, m, k, side="left").as_array()
        rr = reflection_tm(slab, VACUUM, xi, m, k, side="right").as_array()
        x = math.exp(-2.0 * z)
        direct = math.log(np.linalg.det(np.eye(2) - rl @ rr * x))
        t = round_trip_factors(z, zn, lam, alpha)
        fact = math.log1p(-t.t_plus * x) + math.log1p(-t.t_minus * x)
        worst = max(worst, abs(direct - fact))
    return CriterionResult("3", "T+- factorization identity", worst <= 1e-10,
                           f"max |direct - factorized| {worst:.3e} over {n_samples} points (tol 1e-10)")


def crit4_massless_reduction() -> CriterionResult:
    cfg = SolverConfig(rel_tol=1e-12)
    worst = 0.0
    for alpha in (0.0, 0.05, 0.2):
        for theta in (0.5, 2.0, 10.0):
            for d in (1e-7, 1e-6, 1e-5):
                system, geom = _plates(ReducedPoint(0.0, alpha, theta), d)
                e = free_energy(system, geom, cfg).value_joule
                ref = massless_lifshitz_energy(system, geom, cfg).value_joule
                worst = max(worst, abs(e / ref - 1))
    k = np.linspace(0.0, 5e7, 50)
    off = 0.0
    for slab in (PEC, Plasma(3e15)):
        for xi in (0.0, 1e14, 1e16):
            r = reflection_tm(slab, VACUUM, xi, 0.0, k)
            off = max(off, float(np.max(np.abs(r.r12))), float(np.max(np.abs(r.r22))))
    ok = worst <= 1e-10 and off <= 1e-300
    return CriterionResult("4", "massless reduction to Lifshitz", ok,
                           f"max rel dev {worst:.3e} on 27 points (tol 1e-10); max |r12|,|r22| at m=0: {off:.1e}")


def crit5_large_mass() -> CriterionResult:
    system, geom = _plates(ReducedPoint(6.0, 0.0, 20.0))
    e = free_energy(system, geom).value_joule
    lam = 6.0
    ref = -3 * K_B * geom.T_temp * geom.A / (8 * math.pi * geom.d**2) * lam * math.exp(-2 * lam)
    r1 = e / ref
    lam = 8.0
    system, geom = _plates(ReducedPoint(lam, 0.0, 0.0))
    e0 = free_energy(system, geom).value_joule
    ref0 = -3 * HBAR * C * geom.A / (16 * math.pi**1.5 * geom.d**3) * lam**1.5 * math.exp(-2 * lam)
    r2 = e0 / ref0
    ok = 0.85 <= r1 <= 1.15 and 0.90 <= r2 <= 1.10
    return CriterionResult("5", "large-mass asymptotes", ok,
                           f"high-T ratio {r1:.4f} (need [0.85, 1.15]); zero-T ratio {r2:.4f} (need [0.90, 1.10])")


def crit6_small_mass_bracket() -> CriterionResult:
    lam = 0.05
    s1, g1 = _plates(ReducedPoint(lam, 0.0, 50.0))
    s0, g0 = _plates(ReducedPoint(0.0, 0.0, 50.0))
    ratio = free_energy(s1, g1).value_joule / free_energy(s0, g0).value_joule
    z3 = ZETA3
    bracket = (1 + 2 / z3 * lam**2 * math.log(lam) + 3 / (2 * z3) * (2 * math.log(2) - 1) * lam**2
               - 2 / z3 * lam**3)
    rel = abs((ratio - 1) - (bracket - 1)) / abs(bracket - 1)
    return CriterionResult("6", "small-mass high-T bracket", rel <= 0.02,
                           f"E(l)/E(0)-1 = {ratio - 1:.6e}, bracket-1 = {bracket - 1:.6e}, "
                           f"rel diff {rel:.3e} (tol 0.02)")


def crit7_conductivity_slope() -> CriterionResult:
    a = 1e-3
    s0, g0 = _plates(ReducedPoint(0.0, 0.0, 50.0))
    sa, ga = _plates(ReducedPoint(0.0, a, 50.0))
    f0 = casimir_force(s0, g0)
    fa = casimir_force(sa, ga)
    e0, ea = f0.energy.value_joule, fa.energy.value_joule
    se = (ea - e0) / (a * e0)
    sf = (fa.force - f0.force) / (a * f0.force)
    ok = abs(se / -2 - 1) <= 0.01 and abs(sf / -3 - 1) <= 0.01
    return CriterionResult("7", "first-order conductivity slope", ok,
                           f"energy slope {se:.5f} (want -2), force slope {sf:.5f} (want -3), tol 1%")


def crit8_low_temperature_correction() -> CriterionResult:
    theta = 0.3
    st, gt = _plates(ReducedPoint(0.0, 0.0, theta))
    s0, g0 = _plates(ReducedPoint(0.0, 0.0, 0.0))
    et = free_energy(st, gt).value_joule
    e0 = free_energy(s0, g0).value_joule
    got = (et - e0) / e0
    want = 45 * ZETA3 * theta**3 / math.pi**6 - theta**4 / math.pi**4
    rel = abs(got / want - 1)
    return CriterionResult("8", "massless low-T thermal correction", rel <= 0.05,
                           f"got {got:.6e}, series {want:.6e}, rel dev {rel:.3e} (tol 0.05)")


def crit9_te_expansion() -> CriterionResult:
    ratios = []
    for lam, theta in ((0.0, 1.0), (1.0, 2.0)):
        a0, a1 = te_alpha_expansion_exact(lam, theta)
        res = []
        for a in (1e-3, 2e-3):
            system, geom = _plates(ReducedPoint(lam, a, theta))
            te = free_energy_te(system, geom).reduced_thermal
            res.append(te - (a0 + a1 * a))
        ratios.append(res[1] / res[0])
    ok = all(3.5 <= r <= 4.5 for r in ratios)
    return CriterionResult("9", "TE alpha-expansion is exact to first order", ok,
                           "residual ratios " + ", ".join(f"{r:.4f}" for r in ratios) + " (need [3.5, 4.5])")


RS_KAPPA_GEV = 1e8
RS_KR = 12.0


def crit10_rs_spectrum() -> list[CriterionResult]:
    kappa = kappa_to_inverse_m(RS_KAPPA_GEV)
    R = RS_KR / kappa
    spec = kk_masses(RS_KAPPA_GEV, R, 10)
    devs = [abs(m / kk_mass_approx(RS_KAPPA_GEV, R, j) - 1) for j, m in enumerate(spec.masses, 1)]
    a = CriterionResult("10a", "RS roots follow linear spacing", max(devs) <= 1e-3,
                        "rel dev per root " + ", ".join(f"{v:.4f}" for v in devs) + " (tol 1e-3)")
    res = float(np.max(spec.residuals))
    b = CriterionResult("10b", "RS root residuals", res <= 1e-10, f"max scaled residual {res:.2e} (tol 1e-10)")
    f50 = rs_casimir_force(RS_KAPPA_GEV, R, 100e-9, 300.0, 0.0, 50)
    f100 = rs_casimir_force(RS_KAPPA_GEV, R, 100e-9, 300.0, 0.0, 100)
    rel = abs(f50 / f100 - 1)
    c = CriterionResult("10c", "RS tower truncation", rel < 1e-10,
                        f"j_max 50 vs 100: {f50!r} vs {f100!r} N/m^2, rel diff {rel:.2e} (tol 1e-10)")
    return [a, b, c]


def crit11_force_energy(n_points: int = 5, seed: int = 7) -> CriterionResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_points):
        point = ReducedPoint(rng.uniform(0.0, 3.0), rng.uniform(0.0, 0.3), rng.uniform(0.3, 5.0))
        system, geom = _plates(point)
        f4 = casimir_force(system, geom, SolverConfig(fd_rel_step=1e-4)).force
        f5 = casimir_force(system, geom, SolverConfig(fd_rel_step=1e-5)).force
        # independent five-point stencil on fresh energy evaluations
        h = 1e-3 * geom.d
        e = [free_energy(system, geom.with_d(geom.d + k * h)).value_joule for k in (-2, -1, 1, 2)]
        fs = -(e[0] - 8 * e[1] + 8 * e[2] - e[3]) / (12 * h)
        worst = max(worst, abs(f4 / fs - 1), abs(f5 / fs - 1), abs(f4 / f5 - 1))
    return CriterionResult("11", "force matches -dE/dd", worst <= 1e-6,
                           f"max rel dev {worst:.3e} over {n_points} points (tol 1e-6)")


CRITERIA = (crit1_pc_zero_temperature, crit2_high_temperature, crit3_factorization,
            crit4_massless_reduction, crit5_large_mass, crit6_small_mass_bracket,
            crit7_conductivity_slope, crit8_low_temperature_correction, crit9_te_expansion,
            crit10_rs_spectrum, crit11_force_energy)


def run_all(out=None) -> list[CriterionResult]:
    """Run every criterion, printing one line each; returns all results."""
    out = out or sys.stdout
    results = []
    for check in CRITERIA:
        got = check()
        for r in got if isinstance(got, list) else [got]:
            results.append(r)
            out.write(r.line() + "\n")
            out.flush()
    passed = sum(r.passed for r in results)
    out.write(f"{passed}/{len(results)} checks passed\n")
    return results
