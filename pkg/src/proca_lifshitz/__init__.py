"""Casimir free energy and force of a massive vector (Proca) field between
dielectric, plasma or perfectly conducting slabs."""
from .asymptotics import (AsymptoticValue, Regime, asym_energy, asym_force, classify,
                          te_alpha_expansion_exact, tm_alpha_expansion_terms)
from .constants import (CONSTANTS, GeometryField, ReducedPoint, from_reduced, to_reduced)
from .engine import (EnergyResult, ForceResult, SolverConfig, System, casimir_force,
                     free_energy, free_energy_reduced, free_energy_te, free_energy_tm,
                     zero_temperature_energy)
from .limits import massless_lifshitz_energy, perfect_conductor_energy
from .materials import PEC, VACUUM, ConstantDispersion, PerfectConductor, Plasma, Vacuum
from .quadrature import ConvergenceError
from .rs_tower import kk_mass_approx, kk_masses, rs_casimir_force
from .spectrum import SingularDenominatorError, reflection_te, reflection_tm, round_trip_factors

__version__ = "0.1.0"
