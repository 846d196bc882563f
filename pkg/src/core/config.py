"""
Configuration management for ferroconnect
"""
import math
from typing import Tuple

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings"""

    model_config = SettingsConfigDict(
        env_prefix="FERROCONNECT_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    app_name: str = "ferroconnect"
    debug: bool = Field(default=False)

    # Workers
    threads: int = Field(default=4, ge=1)
    parallel_backend: str = Field(default="threading")

    # Geometry
    geom_tolerance_factor: float = Field(default=1e-9, gt=0)
    turning_angle_cap: float = Field(default=0.5, gt=0, lt=math.pi)

    # Connection
    max_dp_points: int = Field(default=16, ge=1)
    max_oracle_points: int = Field(default=8, ge=1)
    max_oracle_incidence: int = Field(default=3, ge=1)
    orthogonality_tolerance: float = Field(default=1e-3, gt=0)

    # Cover
    unit_tolerance: float = Field(default=1e-12, gt=0)
    xi_cutoff: float = Field(default=math.pi / 2, gt=0, lt=math.pi)

    # Lifting
    core_half_width: int = Field(default=1, ge=1)
    defect_padding: int = Field(default=2, ge=1)
    rasterization_allowance: float = Field(default=2.0, ge=0)
    trail_subsample: int = Field(default=8, ge=1)

    # Ferrosim
    dt_factor: float = Field(default=0.2, gt=0)
    sweep_steps: int = Field(default=50, ge=1)
    max_sweeps: int = Field(default=400, ge=1)
    tol_flow_factor: float = Field(default=1e-8, gt=0)
    tol_stationary_factor: float = Field(default=1e-5, gt=0)
    restart_noise: float = Field(default=0.1, ge=0)
    restarts: int = Field(default=4, ge=0)
    max_principle_slack: float = Field(default=5e-3, ge=0)

    # Renorm
    # multiples of h
    sigma_factors: Tuple[float, float, float] = (2.0, 4.0, 8.0)
    radial_nodes: int = Field(default=1200, ge=50)
    core_eps_levels: Tuple[float, float, float] = (0.1, 0.05, 0.025)
    w_beta_starts: int = Field(default=4, ge=1)
    w_beta_tie_tolerance: float = Field(default=1e-3, ge=0)


# Create global settings instance
settings = Settings()
