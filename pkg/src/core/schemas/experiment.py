"""
Experiment description schemas
"""
from pathlib import Path
from typing import List, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.core.exceptions import UsageError
from src.core.schemas.enums import FieldFormat, MagnetizationBoundary, RunMode


class ExperimentSpec(BaseModel):
    """One run; every knob a module reads is a field here"""
    model_config = ConfigDict(extra="forbid", use_enum_values=False)

    mode: RunMode
    domain: str = Field("disk", min_length=1)
    points: List[Tuple[float, float]] = Field(default_factory=list)
    degree: int = 1
    beta: float = Field(1.0, ge=0)
    eps: List[float] = Field(default_factory=lambda: [0.04], min_length=1)
    grid: int = Field(128, ge=16)
    seed: int = Field(0, ge=0)
    samples: int = Field(1000, ge=1)
    restarts: Optional[int] = Field(None, ge=0)
    max_sweeps: Optional[int] = Field(None, ge=1)
    boundary: MagnetizationBoundary = MagnetizationBoundary.NEUMANN
    sigma_factors: Optional[List[float]] = Field(None, min_length=2)
    starts: Optional[int] = Field(None, ge=1)
    minimize: bool = True
    field_format: FieldFormat = FieldFormat.TEXT
    output: str = "runs/latest"

    @field_validator("eps")
    @classmethod
    def eps_positive(cls, v: List[float]) -> List[float]:
        if any(e <= 0 or e >= 0.5 for e in v):
            raise ValueError("every eps must lie in (0, 1/2)")
        return sorted(v, reverse=True)

    @field_validator("sigma_factors")
    @classmethod
    def sigma_positive(cls, v: Optional[List[float]]) -> Optional[List[float]]:
        if v is not None and any(s <= 0 for s in v):
            raise ValueError("sigma factors must be positive")
        return v

    @classmethod
    def parse(cls, data: dict) -> "ExperimentSpec":
        """Validate a flat mapping; failures name the offending field"""
        nested = [k for k, v in data.items() if isinstance(v, dict)]
        if nested:
            raise UsageError("nested sections are not supported", field=nested[0])
        try:
            return cls.model_validate(data)
        except ValidationError as exc:
            error = exc.errors()[0]
            field = ".".join(str(loc) for loc in error["loc"]) or "spec"
            raise UsageError(error["msg"], field=field) from exc

    @classmethod
    def from_yaml(cls, path: Path) -> "ExperimentSpec":
        try:
            data = yaml.safe_load(Path(path).read_text())
        except (OSError, yaml.YAMLError) as exc:
            raise UsageError(f"cannot read {path}: {exc}", field="spec") from exc
        if not isinstance(data, dict):
            raise UsageError("experiment file must hold a key-value mapping", field="spec")
        return cls.parse(data)

    @property
    def output_dir(self) -> Path:
        return Path(self.output)
