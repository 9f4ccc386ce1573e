"""Asymptotic energies and forces for identical plasma slabs across vacuum,
to first order in ``alpha``, together with the exact sums and integrals
that define the expansion coefficients.

Each closed form is valid in one regime of ``(lambda, theta)``. The
numerical guards are: large means ``>= 5``, small means ``<= 0.1``, and
``x << y`` means ``x <= 0.1 y``. A call outside the guards is evaluated
anyway and carries a ``validity_warning``.

Reduced coefficients returned by :func:`te_alpha_expansion_exact` and
:func:`tm_alpha_expansion_terms` are in units of ``k_B T A / (2 pi d^2)``;
the TE energy is ``A0 + A1 alpha + O(alpha^2)`` and the TM energy is
``A0 + C0 + (B1 + C1) alpha + O(alpha^2)``.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import mpmath
from scipy.integrate import IntegrationWarning, quad

from .constants import C, HBAR, ZETA3, GeometryField, ReducedPoint

LARGE = 5.0
SMALL = 0.1
_PI = math.pi


class Regime(enum.Enum):
    LargeMassHighT = "large-mass-high-T"
    LargeMassLowT = "large-mass-low-T"
    SmallMassHighT = "small-mass-high-T"
    SmallMassLowT_ThetaBelowLambda = "small-mass-low-T-theta-below-lambda"
    SmallMassLowT_LambdaBelowTheta = "small-mass-low-T-lambda-below-theta"
    MasslessHighT = "massless-high-T"
    MasslessLowT = "massless-low-T"


@dataclass(frozen=True)
class AsymptoticValue:
    """``value`` in J (energy) or N (force); ``order_alpha`` is 1 when the
    first-order conductivity bracket contributes."""

    value: float
    regime: Regime
    order_alpha: int
    validity_warning: str | None = None


def _guard_failures(point: ReducedPoint, regime: Regime) -> list[str]:
    lam, th, al = point.lam, point.theta, point.alpha
    checks = {
        Regime.LargeMassHighT: [(lam >= LARGE, "lambda >= 5"), (th >= LARGE, "theta >= 5")],
        Regime.LargeMassLowT: [(lam >= LARGE, "lambda >= 5"), (th <= SMALL, "theta <= 0.1")],
        Regime.SmallMassHighT: [(lam <= SMALL, "lambda <= 0.1"), (th >= LARGE, "theta >= 5")],
        Regime.SmallMassLowT_ThetaBelowLambda: [
            (lam <= SMALL, "lambda <= 0.1"), (th <= SMALL * lam, "theta <= 0.1 lambda")],
        Regime.SmallMassLowT_LambdaBelowTheta: [
            (th <= SMALL, "theta <= 0.1"), (lam <= SMALL * th, "lambda <= 0.1 theta")],
        Regime.MasslessHighT: [(lam == 0.0, "lambda == 0"), (th >= LARGE, "theta >= 5")],
        Regime.MasslessLowT: [(lam == 0.0, "lambda == 0"), (th <= SMALL, "theta <= 0.1")],
    }[regime]
    checks.append((al <= SMALL, "alpha <= 0.1"))
    return [label for ok, label in checks if not ok]


def _warning(point, regime):
    bad = _guard_failures(point, regime)
    if not bad:
        return None
    return f"{regime.value} formula used outside its regime (needs {', '.join(bad)})"


def classify(point: ReducedPoint) -> Regime | None:
    """First regime whose guards are all satisfied, or ``None``."""
    for regime in Regime:
        if not _guard_failures(point, regime):
            return regime
    return None


def _lam2_log(lam):
    return 0.0 if lam == 0.0 else lam * lam * math.log(lam)


def _energy_reduced(point: ReducedPoint, regime: Regime):
    """Energy as ``(scale, bracket)``; ``scale`` is ``"thermal"`` for
    ``k_B T A / d^2`` and ``"zeroT"`` for ``hbar c A / d^3``."""
    lam, al, th = point.lam, point.alpha, point.theta
    z3 = ZETA3
    if regime is Regime.LargeMassHighT:
        return "thermal", -3.0 / (8 * _PI) * lam * math.exp(-2 * lam) * (1 - 8 * lam * al / 3)
    if regime is Regime.LargeMassLowT:
        return "zeroT", (-3.0 / (16 * _PI**1.5) * lam**1.5 * math.exp(-2 * lam)
                         * (1 - 8 * lam * al / 3))
    if regime in (Regime.SmallMassHighT, Regime.MasslessHighT):
        if regime is Regime.MasslessHighT:
            lam = 0.0
        b0 = (1 + 2 / z3 * _lam2_log(lam) + 3 / (2 * z3) * (2 * math.log(2) - 1) * lam**2
              - 2 / z3 * lam**3)
        b1 = 1 - lam**2 / z3 + 4 / (3 * z3) * lam**3
        return "thermal", -z3 / (8 * _PI) * (b0 - 2 * b1 * al)
    if regime is Regime.SmallMassLowT_ThetaBelowLambda:
        b0 = 1 - 15 / _PI**2 * lam**2 + (90 / _PI**3 - 80 / _PI**4) * lam**3
        b1 = 1 - 5 / _PI**2 * lam**2
        return "zeroT", -_PI**2 / 720 * (b0 - 4 * b1 * al)
    if regime in (Regime.SmallMassLowT_LambdaBelowTheta, Regime.MasslessLowT):
        if regime is Regime.MasslessLowT:
            lam = 0.0
        t0 = 1 + 45 / _PI**6 * z3 * th**3 - th**4 / _PI**4
        if lam == 0.0:
            m0 = 0.0
        else:
            m0 = 15 / _PI**2 * lam**2 * (
                1 + 6 * th / _PI**2 * (math.log(th) - math.log(lam) - math.log(2 * _PI) + 0.5)
                - th**2 / _PI**2)
        t1 = 1 - 45 / (2 * _PI**6) * z3 * th**3 + th**4 / _PI**4
        m1 = 5 / _PI**2 * lam**2 * (1 + 3 / (2 * _PI**4) * z3 * th**3)
        return "zeroT", -_PI**2 / 720 * ((t0 - m0) - 4 * (t1 - m1) * al)
    raise ValueError(f"unknown regime {regime!r}")


def _force_reduced(point: ReducedPoint, regime: Regime):
    """Force as ``(scale, bracket)``; scales ``k_B T A / d^3`` or ``hbar c A / d^4``."""
    lam, al, th = point.lam, point.alpha, point.theta
    z3 = ZETA3
    if regime is Regime.LargeMassHighT:
        return "thermal", -3.0 / (4 * _PI) * lam**2 * math.exp(-2 * lam) * (1 - 8 * lam * al / 3)
    if regime is Regime.LargeMassLowT:
        # the power of d is fixed by dimensional analysis (F = -dE/dd)
        return "zeroT", (-3.0 / (8 * _PI**1.5) * lam**2.5 * math.exp(-2 * lam)
                         * (1 - 8 * lam * al / 3))
    if regime in (Regime.SmallMassHighT, Regime.MasslessHighT):
        if regime is Regime.MasslessHighT:
            lam = 0.0
        b0 = 1 - lam**2 / z3 + lam**3 / z3
        b1 = 1 - lam**2 / (3 * z3)
        return "thermal", -z3 / (4 * _PI) * (b0 - 3 * b1 * al)
    if regime is Regime.SmallMassLowT_ThetaBelowLambda:
        b0 = 1 - 5 / _PI**2 * lam**2
        b1 = 1 - 5 / (2 * _PI**2) * lam**2
        return "zeroT", -_PI**2 / 240 * (b0 - 16 / 3 * b1 * al)
    if regime in (Regime.SmallMassLowT_LambdaBelowTheta, Regime.MasslessLowT):
        if regime is Regime.MasslessLowT:
            lam = 0.0
        b0 = (1 + th**4 / (3 * _PI**4)) - 5 / _PI**2 * lam**2 * (1 + th**2 / _PI**2)
        b1 = ((1 - 45 / (8 * _PI**6) * z3 * th**3)
              - 5 / (2 * _PI**2) * lam**2 * (1 - 3 / (4 * _PI**4) * z3 * th**3))
        return "zeroT", -_PI**2 / 240 * (b0 - 16 / 3 * b1 * al)
    raise ValueError(f"unknown regime {regime!r}")


def _kT(point: ReducedPoint, d: float) -> float:
    return HBAR * C * point.theta / (2 * _PI * d)


def asym_energy(point: ReducedPoint, geom: GeometryField, regime: Regime) -> AsymptoticValue:
    """Asymptotic free energy (J) at separation ``geom.d`` and area ``geom.A``.

    Temperature and mass enter only through ``point``.
    """
    scale, bracket = _energy_reduced(point, regime)
    d, A = geom.d, geom.A
    pref = _kT(point, d) * A / d**2 if scale == "thermal" else HBAR * C * A / d**3
    return AsymptoticValue(pref * bracket, regime, int(point.alpha > 0.0), _warning(point, regime))


def asym_force(point: ReducedPoint, geom: GeometryField, regime: Regime) -> AsymptoticValue:
    """Asymptotic force (N); negative means attraction."""
    scale, bracket = _force_reduced(point, regime)
    d, A = geom.d, geom.A
    pref = _kT(point, d) * A / d**3 if scale == "thermal" else HBAR * C * A / d**4
    return AsymptoticValue(pref * bracket, regime, int(point.alpha > 0.0), _warning(point, regime))


# --- exact expansion coefficients ------------------------------------------

def _primed(term, theta, rel=1e-17, max_terms=10**6):
    total = 0.0
    parts = []
    for n in range(max_terms):
        w = 0.5 if n == 0 else 1.0
        v = w * term(n * theta)
        parts.append(v)
        total += v
        if n > 0 and abs(v) <= rel * abs(total):
            return math.fsum(parts)
        if total == 0.0 and n > 0 and v == 0.0:
            return 0.0
    raise RuntimeError("expansion sum did not converge")


def te_alpha_expansion_exact(lam: float, theta: float) -> tuple[float, float]:
    """``(A0, A1)`` of the TE energy, reduced.

    With ``a_n = sqrt(z_n^2 + lam^2)`` and ``x_n = exp(-2 a_n)`` the sums
    over reflections are polylogarithms:

        A0 = -sum'_n [ a_n Li2(x_n) / 2 + Li3(x_n) / 4 ]
        A1 =  sum'_n [ 2 a_n^2 Li1(x_n) + 2 a_n Li2(x_n) + Li3(x_n) ]
    """
    if not theta > 0.0 or lam < 0.0:
        raise ValueError("need theta > 0 and lam >= 0")

    def li(s, x):
        return float(mpmath.polylog(s, x))

    def a0(zn):
        a = math.hypot(zn, lam)
        x = math.exp(-2.0 * a)
        return -(0.5 * a * li(2, x) + 0.25 * li(3, x))

    def a1(zn):
        a = math.hypot(zn, lam)
        x = math.exp(-2.0 * a)
        li1 = 0.0 if a == 0.0 else -math.log1p(-x)
        return 2.0 * a * a * li1 + 2.0 * a * li(2, x) + li(3, x)

    return _primed(a0, theta), _primed(a1, theta)


def _quad_tail(f, a):
    """``int_a^inf f(z) dz`` through ``z = a + s^2``."""
    def g(s):
        return 2.0 * s * f(a + s * s)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        return quad(g, 0.0, 6.0, epsabs=0.0, epsrel=1e-12, limit=400, points=[1.0])[0]


def tm_alpha_expansion_terms(lam: float, theta: float) -> tuple[float, float, float]:
    """``(C0, B1, C1)`` of the TM energy, reduced.

    The sums over reflections are done inside the integrands:

        C0 = sum'_n int z ln(1 - Lam^2 e^{-2z}) dz
        B1 = 4 sum'_n int z^2 z_n^2 / (z^2 - lam^2) e^{-2z} / (1 - e^{-2z}) dz
        C1 = -4 sum'_n int z^2 (a_n^2 - z^2) / (z^2 - lam^2)
                              * Lam^2 e^{-2z} / (1 - Lam^2 e^{-2z}) dz

    with ``Lam = lam^2 / (z + sqrt(z^2 - lam^2))^2`` and all integrals
    starting at ``a_n = sqrt(z_n^2 + lam^2)``.
    """
    if not theta > 0.0 or lam < 0.0:
        raise ValueError("need theta > 0 and lam >= 0")
    lam2 = lam * lam

    def Lam2(z):
        big = z + math.sqrt(max(z * z - lam2, 0.0))
        return (lam2 / (big * big)) ** 2

    def c0(zn):
        if lam == 0.0:
            return 0.0
        a = math.hypot(zn, lam)
        return _quad_tail(lambda z: z * math.log1p(-Lam2(z) * math.exp(-2 * z)), a)

    def b1(zn):
        if zn == 0.0:
            return 0.0
        a = math.hypot(zn, lam)

        def f(z):
            x = math.exp(-2 * z)
            return z * z * zn * zn / (z * z - lam2) * x / -math.expm1(-2 * z)
        return 4.0 * _quad_tail(f, a)

    def c1(zn):
        if lam == 0.0:
            return 0.0
        a = math.hypot(zn, lam)

        def f(z):
            t = z - a
            e = t * (t + 2 * a)
            y = Lam2(z) * math.exp(-2 * z)
            # (a^2 - z^2) / (z^2 - lam^2) = -e / (e + zn^2), finite at n = 0
            return -z * z * e / (e + zn * zn) * y / (1 - y) if e + zn * zn > 0 else 0.0
        return -4.0 * _quad_tail(f, a)

    return _primed(c0, theta), _primed(b1, theta), _primed(c1, theta)
