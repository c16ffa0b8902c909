from typing import Any, Dict

from fastapi import APIRouter, Request

import protocol
from core import limiter, settings
from inputs import resolve_game, resolve_state, resolve_strategy
from models import SimulationRequest

router = APIRouter()


@router.post("", response_model=Dict[str, Any])
@limiter.limit(settings.RATE_LIMIT)
def run_simulation(request: Request, body: SimulationRequest):
    """Finite-shot estimate of the average reward."""
    report = protocol.run(
        resolve_game(body.game),
        resolve_state(body.state),
        resolve_strategy(body.strategy),
        shots=body.shots,
        seed=settings.SEED if body.seed is None else body.seed,
        partitions=body.partitions,
        workers=settings.MAX_WORKERS,
    )
    return report.model_dump(mode="json")
