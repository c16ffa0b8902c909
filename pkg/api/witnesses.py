from typing import Any, Dict

from fastapi import APIRouter, Request

import witness as witnesses
from core import limiter, settings
from inputs import resolve_vector
from models import WitnessRequest

router = APIRouter()


@router.post("/decomposable", response_model=Dict[str, Any])
def create_decomposable_witness(body: WitnessRequest):
    """W = -D |psi><psi|^{T_B0} from a vector or a named entangled state."""
    return witnesses.decomposable_witness(resolve_vector(body.psi)).model_dump(mode="json")


@router.get("/swap/{d}", response_model=Dict[str, Any])
@limiter.limit(settings.RATE_LIMIT)
def get_swap_witness(request: Request, d: int):
    return witnesses.swap_witness(d).model_dump(mode="json")
