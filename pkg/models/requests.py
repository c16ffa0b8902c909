from typing import Any, Dict, Optional, Union

from pydantic import BaseModel, Field

# Named input ("bell:phi+", "swap:2", "pairing:identity") or the JSON wire form
Source = Union[str, Dict[str, Any]]


class WitnessRequest(BaseModel):
    psi: Source


class GameRequest(BaseModel):
    witness: Source


class StateRequest(BaseModel):
    state: Source


class EvaluateRequest(BaseModel):
    game: Source
    state: Source
    strategy: Source


class OptimizeRequest(BaseModel):
    game: Source
    state: Source
    family: str = Field(default="matched", pattern="^(product|matched)$")
    restarts: Optional[int] = Field(default=None, ge=0)
    tol: Optional[float] = Field(default=None, gt=0)
    max_iter: Optional[int] = Field(default=None, ge=1)
    seed: Optional[int] = None


class NptRequest(BaseModel):
    state: Source
    game: Optional[Source] = None
    restarts: Optional[int] = Field(default=None, ge=0)
    seed: Optional[int] = None


class BulletRequest(BaseModel):
    state: Source
    top_k: Optional[int] = Field(default=None, ge=1)
    restarts: Optional[int] = Field(default=None, ge=0)
    seed: Optional[int] = None


class MemberRequest(BulletRequest):
    lam: float = Field(alias="lambda")


class UpperBoundRequest(BaseModel):
    game: Source
    state: Source


class SimulationRequest(BaseModel):
    game: Source
    state: Source
    strategy: Source
    shots: int = Field(default=10_000, ge=1, le=10_000_000)
    seed: Optional[int] = None
    partitions: int = Field(default=1, ge=1)
