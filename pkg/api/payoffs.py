from typing import Any, Dict

from fastapi import APIRouter, Request

import game as games
import optimize
from core import limiter, settings
from inputs import resolve_game, resolve_state, resolve_strategy
from models import EvaluateRequest, OptimizeOptions, OptimizeRequest

router = APIRouter()


@router.post("/evaluate", response_model=Dict[str, Any])
def evaluate_payoff(body: EvaluateRequest):
    value = games.average_reward(resolve_game(body.game), resolve_state(body.state), resolve_strategy(body.strategy))
    return {"value": value}


@router.post("/optimize", response_model=Dict[str, Any])
@limiter.limit(settings.RATE_LIMIT)
def optimize_payoff(request: Request, body: OptimizeRequest):
    """See-saw optimization over product or matched one-way strategies."""
    opts = OptimizeOptions.from_settings(
        restarts=body.restarts, tol=body.tol, max_iter=body.max_iter, seed=body.seed
    )
    W = resolve_game(body.game).witness
    solver = optimize.seesaw_product if body.family == "product" else optimize.seesaw_matched
    return solver(W, resolve_state(body.state), opts).model_dump(mode="json")
