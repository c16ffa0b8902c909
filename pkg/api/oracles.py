from typing import Any, Dict

from fastapi import APIRouter

import oracle
from core.config import PPT_TOL
from inputs import resolve_game, resolve_state
from models import StateRequest, UpperBoundRequest

router = APIRouter()


@router.post("/negativity", response_model=Dict[str, Any])
def get_negativity(body: StateRequest):
    return {"negativity": oracle.negativity(resolve_state(body.state))}


@router.post("/ppt", response_model=Dict[str, Any])
def get_ppt(body: StateRequest):
    value = oracle.ppt_min_eigenvalue(resolve_state(body.state))
    return {"min_eigenvalue": value, "ppt": value >= -PPT_TOL}


@router.post("/upper-bound", response_model=Dict[str, Any])
def get_upper_bound(body: UpperBoundRequest):
    W = resolve_game(body.game).witness
    return {"upper_bound": oracle.upper_bound_global(W, resolve_state(body.state))}


@router.post("/witness", response_model=Dict[str, Any])
def get_detecting_witness(body: StateRequest):
    W, value = oracle.optimal_decomposable_witness(resolve_state(body.state))
    return {"witness": W.model_dump(mode="json"), "detection_value": value}
