from src.ferrosim.params import Params, fit_kappa_star, kappa_eps, kappa_star
from src.ferrosim.state import BoundaryDatum, State, boundary_datum
from src.ferrosim.energy import EnergyReport, el_residual, potential_f_eps, total_energy
from src.ferrosim.relax import (
    RelaxResult,
    RelaxSchedule,
    max_principle_audit,
    relax_continuation,
    relax_minimize,
    relax_with_restarts,
)
from src.ferrosim.decouple import DecoupledReport, WallProfileVar, decoupled_energy, wall_transition_cost
from src.ferrosim.walls import WallReport, detect_wall
from src.ferrosim.competitor import Competitor, recovery_competitor

__all__ = [
    "Params",
    "fit_kappa_star",
    "kappa_eps",
    "kappa_star",
    "BoundaryDatum",
    "State",
    "boundary_datum",
    "EnergyReport",
    "el_residual",
    "potential_f_eps",
    "total_energy",
    "RelaxResult",
    "RelaxSchedule",
    "max_principle_audit",
    "relax_continuation",
    "relax_minimize",
    "relax_with_restarts",
    "DecoupledReport",
    "WallProfileVar",
    "decoupled_energy",
    "wall_transition_cost",
    "WallReport",
    "detect_wall",
    "Competitor",
    "recovery_competitor",
]
