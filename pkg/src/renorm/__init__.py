from src.renorm.core import CoreEnergyLimit, RadialProfile, core_energy, core_energy_limit
from src.renorm.energy import RenormalizedEnergy, WBeta, renormalized_energy, w_beta
from src.renorm.harmonic import CanonicalMap, HarmonicSolver, VortexConfig, canonical_harmonic_map
from src.renorm.optimize import WBetaOptimum, minimize_w_beta

__all__ = [
    "CoreEnergyLimit",
    "RadialProfile",
    "core_energy",
    "core_energy_limit",
    "RenormalizedEnergy",
    "WBeta",
    "renormalized_energy",
    "w_beta",
    "CanonicalMap",
    "HarmonicSolver",
    "VortexConfig",
    "canonical_harmonic_map",
    "WBetaOptimum",
    "minimize_w_beta",
]
