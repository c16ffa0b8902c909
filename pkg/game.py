import logging
from typing import Tuple

import numpy as np

import qops
import witness as witness_ops
from core.exceptions import DimensionError, EffectValidityError, ValidationError
from models import Game, QuantumOperator, Strategy, Witness
from strategy import SPLIT_ORDER, realized_effect

logger = logging.getLogger(__name__)

PROBABILITY_TOL = 1e-10
STATE_LABELS = ("A", "B")


def from_witness(W: Witness) -> Game:
    ensemble = witness_ops.decompose_product_ensemble(W)
    reward11 = [item.beta / item.p for item in ensemble.items]
    return Game(witness=W, ensemble=ensemble, reward11=reward11)


def as_state(rho: QuantumOperator) -> QuantumOperator:
    """Validate a bipartite state and label it [A, B]."""
    if len(rho.labels) != 2:
        raise DimensionError(f"shared states live on two parties, got {list(rho.labels)}")
    qops.check_state(rho)
    if rho.labels == STATE_LABELS:
        return rho
    return qops.relabel(rho, STATE_LABELS)


def _check_dims(effect: QuantumOperator, question_dims: Tuple[int, int], rho: QuantumOperator) -> None:
    expected = (question_dims[0], rho.dims[0], rho.dims[1], question_dims[1])
    if effect.dims != expected:
        raise DimensionError(f"strategy acts on dims {list(effect.dims)}, game and state need {list(expected)}")


def win_probabilities(game: Game, rho: QuantumOperator, strategy: Strategy) -> np.ndarray:
    """Born-rule probability of the answer pair (1, 1) for each question, unclamped."""
    rho = as_state(rho)
    Z = realized_effect(strategy)
    _check_dims(Z, game.witness.op.dims, rho)
    probs = np.empty(len(game.ensemble.items))
    for i, item in enumerate(game.ensemble.items):
        question = qops.tensor([item.tau, rho, item.omega])
        probs[i] = np.trace(Z.data @ question.data).real
    if np.any(probs < -PROBABILITY_TOL) or np.any(probs > 1.0 + PROBABILITY_TOL):
        raise EffectValidityError("strategy yields probabilities outside [0, 1]")
    return probs


def outcome_probability(game: Game, rho: QuantumOperator, strategy: Strategy, i: int, x: int, y: int) -> float:
    if not 0 <= i < len(game.ensemble.items):
        raise ValidationError(f"question index {i} out of range")
    if x not in (0, 1) or y not in (0, 1):
        raise ValidationError("answers are binary")
    p11 = float(np.clip(win_probabilities(game, rho, strategy)[i], 0.0, 1.0))
    if (x, y) == (1, 1):
        return p11
    if (x, y) == (0, 0):
        return 1.0 - p11
    return 0.0


def average_reward(game: Game, rho: QuantumOperator, strategy: Strategy) -> float:
    probs = win_probabilities(game, rho, strategy)
    return float(sum(item.p * reward * prob for item, reward, prob in zip(game.ensemble.items, game.reward11, probs)))


def objective_operator(W: Witness, rho: QuantumOperator, order: Tuple[str, ...] = qops.CANONICAL_ORDER) -> QuantumOperator:
    """W^T (x) rho on the question slots and the state, in the requested order."""
    rho = as_state(rho)
    if W.op.dims != rho.dims:
        raise DimensionError(f"witness dims {list(W.op.dims)} do not match state dims {list(rho.dims)}")
    transposed = QuantumOperator(layout=W.op.layout, data=W.op.data.T)
    return qops.permute_subsystems(qops.tensor([transposed, rho]), order)


def split_objective(W: Witness, rho: QuantumOperator) -> np.ndarray:
    """Objective operator ordered [A, A0, B0, B] for see-saw updates."""
    return objective_operator(W, rho, SPLIT_ORDER).data


def payoff_via_witness(W: Witness, rho: QuantumOperator, strategy: Strategy) -> float:
    Y = objective_operator(W, rho)
    Z = realized_effect(strategy)
    if Z.dims != Y.dims:
        raise DimensionError(f"strategy acts on dims {list(Z.dims)}, expected {list(Y.dims)}")
    return float(np.trace(Z.data @ Y.data).real)
