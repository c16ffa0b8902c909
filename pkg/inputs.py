"""Resolve command-line and request inputs: named objects or JSON wire forms."""
import json
from pathlib import Path
from typing import Any, Dict

import numpy as np

import game as games
import states
import strategy as strategies
import witness as witnesses
from core.exceptions import ValidationError
from models import Game, QuantumOperator, QuantumVector, Strategy, Witness, strategy_adapter
from models.requests import Source

NAMED_STRATEGIES = ("pairing:identity", "pairing:twisted", "accept-all:<d>", "reject-all:<d>")


def read_source(text: str) -> Source:
    """Named inputs pass through; anything else is a path to a JSON file."""
    if ":" in text and not Path(text).exists():
        return text
    try:
        return json.loads(Path(text).read_text())
    except OSError as exc:
        raise ValidationError(f"cannot read {text!r}: {exc.strerror}")
    except UnicodeDecodeError:
        raise ValidationError(f"{text!r} is not UTF-8 text")


def _require_dict(value: Source, what: str) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise ValidationError(f"unknown named {what} {value!r}")
    return value


def resolve_state(value: Source) -> QuantumOperator:
    if isinstance(value, str):
        return states.parse_named_state(value)
    return QuantumOperator.model_validate(value)


def resolve_vector(value: Source) -> QuantumVector:
    if isinstance(value, str):
        return states.parse_named_vector(value, witnesses.QUESTION_LABELS)
    return QuantumVector.model_validate(value)


def resolve_witness(value: Source) -> Witness:
    if isinstance(value, str):
        kind, _, arg = value.partition(":")
        if kind == "swap":
            if not arg.isdigit():
                raise ValidationError(f"swap witness needs an integer dimension, got {arg!r}")
            return witnesses.swap_witness(int(arg))
        return witnesses.decomposable_witness(resolve_vector(value))
    return Witness.model_validate(value)


def resolve_game(value: Source) -> Game:
    if isinstance(value, str):
        return games.from_witness(resolve_witness(value))
    value = _require_dict(value, "game")
    if "ensemble" not in value:
        return games.from_witness(Witness.model_validate(value))
    return Game.model_validate(value)


def _side(arg: str) -> int:
    if not arg.isdigit() or int(arg) < 1:
        raise ValidationError(f"strategy dimension {arg!r} must be a positive integer")
    return int(arg)


def resolve_strategy(value: Source) -> Strategy:
    if isinstance(value, dict):
        return strategy_adapter.validate_python(value)
    kind, _, arg = value.partition(":")
    if kind == "pairing":
        pairings = {"identity": strategies.IDENTITY_PAIRING, "twisted": strategies.TWISTED_PAIRING}
        if arg not in pairings:
            raise ValidationError(f"unknown pairing {arg!r}; use identity or twisted")
        return strategies.bell_matched(pairings[arg])
    if kind == "reject-all":
        d = _side(arg)
        return strategies.trivial(d, d)
    if kind == "accept-all":
        d = _side(arg)
        return strategies.product(
            strategies.alice_effect(np.eye(d * d), d),
            strategies.bob_effect(np.eye(d * d), d),
        )
    raise ValidationError(f"unknown named strategy {value!r}; use one of {list(NAMED_STRATEGIES)}")
