"""Dispersion models evaluated on the imaginary frequency axis.

Only lossless models are supported: vacuum, a perfect conductor, the
plasma model ``eps(i xi) = eps0 (1 + omega_p^2 / xi^2)`` and a
frequency-independent dielectric.

Besides the relative permittivity, every model exposes ``eps_xi2`` (the
product ``eps_rel * xi^2``) and ``inv_eps`` (``1 / eps_rel``). Both stay
finite at ``xi = 0`` for the plasma model, which is what the wave-number
formulas need at the zero Matsubara frequency.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def _check_xi(xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0.0) or np.any(np.isnan(xi)):
        raise ValueError("imaginary frequency xi must be >= 0")
    return xi


def _out(x):
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


@dataclass(frozen=True)
class Vacuum:
    mu_rel: float = 1.0

    def permittivity_rel(self, xi):
        return _out(np.ones_like(_check_xi(xi)))

    def eps_xi2(self, xi):
        xi = _check_xi(xi)
        return _out(xi * xi)

    def inv_eps(self, xi):
        return _out(np.ones_like(_check_xi(xi)))

    def __str__(self):
        return "vacuum"


@dataclass(frozen=True)
class PerfectConductor:
    """Infinite permittivity at every frequency. Never evaluated
    numerically by the reflection code; it is matched on instead."""

    mu_rel: float = 1.0

    def permittivity_rel(self, xi):
        return _out(np.full_like(_check_xi(xi), np.inf))

    def eps_xi2(self, xi):
        return _out(np.full_like(_check_xi(xi), np.inf))

    def inv_eps(self, xi):
        return _out(np.zeros_like(_check_xi(xi)))

    def __str__(self):
        return "pec"


@dataclass(frozen=True)
class Plasma:
    omega_p: float
    mu_rel: float = 1.0

    def __post_init__(self):
        if not (self.omega_p > 0.0 and math.isfinite(self.omega_p)):
            raise ValueError(f"omega_p must be positive and finite, got {self.omega_p!r}")
        if self.omega_p > 1e150:
            # omega_p^2 must stay finite; such a slab is a perfect conductor
            raise ValueError(f"omega_p {self.omega_p!r} is too large; use a perfect conductor")
        if not self.mu_rel > 0.0:
            raise ValueError(f"mu_rel must be positive, got {self.mu_rel!r}")

    def permittivity_rel(self, xi):
        xi = _check_xi(xi)
        with np.errstate(divide="ignore"):
            out = 1.0 + (self.omega_p / xi) ** 2
        return _out(out)

    def eps_xi2(self, xi):
        xi = _check_xi(xi)
        return _out(xi * xi + self.omega_p**2)

    def inv_eps(self, xi):
        xi = _check_xi(xi)
        return _out(xi * xi / (xi * xi + self.omega_p**2))

    def __str__(self):
        if self.mu_rel == 1.0:
            return f"plasma:{self.omega_p!r}"
        return f"plasma:{self.omega_p!r}:{self.mu_rel!r}"


@dataclass(frozen=True)
class ConstantDispersion:
    eps_rel: float
    mu_rel: float = 1.0

    def __post_init__(self):
        if not (self.eps_rel > 0.0 and math.isfinite(self.eps_rel)):
            raise ValueError(f"eps_rel must be positive and finite, got {self.eps_rel!r}")
        if not self.mu_rel > 0.0:
            raise ValueError(f"mu_rel must be positive, got {self.mu_rel!r}")

    def permittivity_rel(self, xi):
        return _out(np.full_like(_check_xi(xi), self.eps_rel))

    def eps_xi2(self, xi):
        xi = _check_xi(xi)
        return _out(self.eps_rel * xi * xi)

    def inv_eps(self, xi):
        return _out(np.full_like(_check_xi(xi), 1.0 / self.eps_rel))

    def __str__(self):
        return f"const:{self.eps_rel!r}:{self.mu_rel!r}"


MaterialModel = Vacuum | PerfectConductor | Plasma | ConstantDispersion

VACUUM = Vacuum()
PEC = PerfectConductor()


def permittivity_rel(model: MaterialModel, xi):
    """Relative permittivity ``eps(i xi) / eps0``; ``inf`` for a perfect
    conductor and for the plasma model at ``xi = 0``."""
    return model.permittivity_rel(xi)


def permeability_rel(model: MaterialModel, xi):
    """Relative permeability ``mu(i xi) / mu0`` (frequency independent for
    every supported model)."""
    xi = _check_xi(xi)
    return _out(np.full_like(xi, model.mu_rel))


def parse_material(spec: str) -> MaterialModel:
    """Parse ``vacuum``, ``pec``, ``plasma:<omega_p>[:<mu_rel>]`` or
    ``const:<eps_rel>:<mu_rel>``."""
    parts = spec.strip().split(":")
    kind = parts[0].lower()
    try:
        if kind == "vacuum" and len(parts) == 1:
            return VACUUM
        if kind == "pec" and len(parts) == 1:
            return PEC
        if kind == "plasma" and len(parts) in (2, 3):
            return Plasma(*(float(p) for p in parts[1:]))
        if kind == "const" and len(parts) == 3:
            return ConstantDispersion(float(parts[1]), float(parts[2]))
    except ValueError as exc:
        raise ValueError(f"invalid material spec {spec!r}: {exc}") from None
    raise ValueError(f"invalid material spec {spec!r}")
