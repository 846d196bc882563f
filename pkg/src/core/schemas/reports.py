"""
Run manifest and summary schemas
"""
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from src.core.schemas.enums import RunMode


class RunManifest(BaseModel):
    """Written first in every run directory"""
    mode: RunMode
    seed: int
    spec: dict
    settings: dict
    versions: Dict[str, str]
    files: List[str] = Field(default_factory=list)


class DefectRecord(BaseModel):
    x: float
    y: float
    winding: int
    touches_boundary: bool = False


class WallRecord(BaseModel):
    length: float = Field(..., ge=0)
    closed: bool = False
    start: Optional[Tuple[float, float]] = None
    end: Optional[Tuple[float, float]] = None


class SimulationSummary(BaseModel):
    eps: float
    beta: float
    kappa: float = 0.0
    kappa_star_fit: float = 0.0
    kappa_star_closed: float = 0.0
    energy: float
    residual: float
    converged: bool
    sweeps: int
    defects: List[DefectRecord] = Field(default_factory=list)
    walls: List[WallRecord] = Field(default_factory=list)
    wall_length: float = 0.0
    max_principle: dict = Field(default_factory=dict)
    decoupling: dict = Field(default_factory=dict)


class PipelineComparison(BaseModel):
    """Minimizer diagnostics set against the W_β prediction"""
    eps: float
    defect_count: int
    defect_mismatch: Optional[float] = None
    l_omega_defects: Optional[float] = None
    wall_length: float
    wall_mismatch: Optional[float] = None
    length_at_least_l_omega: Optional[bool] = None
    endpoints_within_3h: Optional[bool] = None
    divergence_residual: Optional[float] = None
    predicted_points: List[Tuple[float, float]] = Field(default_factory=list)
    w_beta: Optional[float] = None
