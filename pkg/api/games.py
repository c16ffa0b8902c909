from typing import Any, Dict

from fastapi import APIRouter

import game as games
from inputs import resolve_witness
from models import GameRequest

router = APIRouter()


@router.post("/from-witness", response_model=Dict[str, Any])
def create_game(body: GameRequest):
    return games.from_witness(resolve_witness(body.witness)).model_dump(mode="json")
