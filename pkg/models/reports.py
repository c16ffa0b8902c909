from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from core import settings
from .strategy import Strategy
from .witness import Witness


class OptimizeOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    restarts: int = Field(default=16, ge=0)
    max_iter: int = Field(default=200, ge=1)
    tol: float = Field(default=1e-9, gt=0)
    seed: int = 0
    workers: int = Field(default=1, ge=1)
    branches: Optional[int] = Field(default=None, ge=1)  # None means d_A * d_A0
    top_k: int = Field(default=3, ge=1)

    @classmethod
    def from_settings(cls, **overrides) -> "OptimizeOptions":
        values = {
            "restarts": settings.RESTARTS,
            "max_iter": settings.MAX_ITER,
            "tol": settings.TOL,
            "seed": settings.SEED,
            "workers": settings.MAX_WORKERS,
            "top_k": settings.TOP_K,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


class PayoffReport(BaseModel):
    value: float
    upper_bound: float
    converged: bool
    iterations: int
    restarts: int
    seed: int
    strategy: Strategy
    witness: Optional[Witness] = None
    trace: List[float] = Field(default_factory=list)
    certified_lower_bound: bool = True
    note: Optional[str] = None


class SLambdaVerdict(BaseModel):
    model_config = ConfigDict(validate_by_name=True, serialize_by_alias=True)

    lam: float = Field(alias="lambda", ge=0)
    member: bool
    certificate: PayoffReport


class EstimateReport(BaseModel):
    mean: float
    stderr: float
    shots: int
    per_question_counts: Dict[int, Tuple[int, int]]
    seed: int
    partitions: int = 1
    clamped: int = 0
