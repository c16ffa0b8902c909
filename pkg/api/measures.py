from typing import Any, Dict

from fastapi import APIRouter, Request

import optimize
import witness as witnesses
from core import limiter, settings
from inputs import resolve_game, resolve_state
from models import BulletRequest, MemberRequest, NptRequest, OptimizeOptions

router = APIRouter()


@router.post("/npt", response_model=Dict[str, Any])
@limiter.limit(settings.RATE_LIMIT)
def measure_npt(request: Request, body: NptRequest):
    rho = resolve_state(body.state)
    if body.game is None:
        W = witnesses.canonical_witness(*rho.dims)
    else:
        W = resolve_game(body.game).witness
    opts = OptimizeOptions.from_settings(restarts=body.restarts, seed=body.seed)
    return optimize.payoff_npt(W, rho, opts).model_dump(mode="json")


@router.post("/bullet", response_model=Dict[str, Any])
@limiter.limit(settings.RATE_LIMIT)
def measure_bullet(request: Request, body: BulletRequest):
    opts = OptimizeOptions.from_settings(restarts=body.restarts, seed=body.seed, top_k=body.top_k)
    return optimize.payoff_bullet(resolve_state(body.state), opts).model_dump(mode="json")


@router.post("/member", response_model=Dict[str, Any])
@limiter.limit(settings.RATE_LIMIT)
def measure_member(request: Request, body: MemberRequest):
    opts = OptimizeOptions.from_settings(restarts=body.restarts, seed=body.seed, top_k=body.top_k)
    return optimize.s_lambda_member(resolve_state(body.state), body.lam, opts).model_dump(mode="json")
