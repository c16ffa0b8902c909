import logging
from typing import Optional, Sequence, Tuple

import numpy as np

import game
import qops
import strategy as strategies
from core.config import PPT_TOL
from core.exceptions import NoDetectionError, ValidationError
from core.rng import haar_vector, stream
from models import MatchedOneWayStrategy, QuantumOperator, QuantumVector, Witness
from optimize import SeesawProblem, negative_directions, upper_bound_global
from witness import QUESTION_LABELS, decomposable_witness, evaluate

logger = logging.getLogger(__name__)

NORMALIZATION_TOL = 1e-9


def ppt_min_eigenvalue(rho: QuantumOperator) -> float:
    rho = game.as_state(rho)
    return qops.min_ppt_eigenvalue(rho)


def negativity(rho: QuantumOperator) -> float:
    """Sum of |negative eigenvalues| of rho^{T_B}; eigenvalues above -PPT_TOL count as zero."""
    rho = game.as_state(rho)
    vals = np.linalg.eigvalsh(qops.partial_transpose(rho, ["B"]).data)
    return float(-np.sum(vals[vals < -PPT_TOL]))


def optimal_decomposable_witness(rho: QuantumOperator) -> Tuple[Witness, float]:
    """
    Decomposable witness built on the most negative partial-transpose direction.

    Returns:
        Tuple of (witness, detection value Tr(V rho) = D |lambda_min|)

    Raises:
        NoDetectionError: rho is PPT
    """
    rho = game.as_state(rho)
    vals, vecs = negative_directions(rho)
    if not len(vals):
        raise NoDetectionError("state is PPT; no decomposable witness detects it")
    V = decomposable_witness(QuantumVector.build(list(QUESTION_LABELS), list(rho.dims), vecs[:, 0]))
    return V, evaluate(V, rho)


def sample_separable(d_a: int, d_b: int, terms: int, seed: int = 0) -> QuantumOperator:
    """Dirichlet-weighted mixture of Haar-random pure product states."""
    if terms < 1:
        raise ValidationError("need at least one product term")
    if d_a < 1 or d_b < 1:
        raise ValidationError("dimensions must be positive")
    rng = stream(seed)
    weights = rng.dirichlet(np.ones(terms))
    data = np.zeros((d_a * d_b, d_a * d_b), dtype=complex)
    for p in weights:
        ket = np.kron(haar_vector(rng, d_a), haar_vector(rng, d_b))
        data += p * np.outer(ket, ket.conj())
    return QuantumOperator.build(list(game.STATE_LABELS), [d_a, d_b], qops.hermitian_part(data))


def brute_force_payoff(
    W: Witness, rho: QuantumOperator, trials: int, seed: int = 0, branches: Optional[int] = None
) -> float:
    """
    Best reward over `trials` unoptimized random strategies from the see-saw start sampler.

    Trial i draws from the stream (seed, i), alternating product and Bell-like
    matched strategies, so the result never exceeds seesaw_matched with the same
    seed and restarts = trials.
    """
    if trials < 1:
        raise ValidationError("need at least one trial")
    rho = game.as_state(rho)
    problem = SeesawProblem(game.split_objective(W, rho), *rho.dims)
    width = max(2, branches or problem.side_a)
    best = -np.inf
    for i in range(trials):
        alice, bob = strategies.random_start(stream(seed, i), rho.dims, i, width)
        hermitian_alice = [qops.hermitian_part(P) for P in alice]
        hermitian_bob = [qops.hermitian_part(Q) for Q in bob]
        best = max(best, problem.value(hermitian_alice, hermitian_bob))
    logger.debug("brute force best %.12f over %d trials", best, trials)
    return float(best)


def _as_probabilities(x: Sequence[float], name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or not arr.size:
        raise ValidationError(f"{name} must be a non-empty vector")
    if np.any(arr < -NORMALIZATION_TOL) or abs(arr.sum() - 1.0) > NORMALIZATION_TOL:
        raise ValidationError(f"{name} is not a probability vector")
    return arr


def majorizes(x: Sequence[float], y: Sequence[float]) -> bool:
    """True iff x is majorized by y (x < y); shorter vectors are zero padded."""
    x = _as_probabilities(x, "x")
    y = _as_probabilities(y, "y")
    n = max(x.size, y.size)
    x = np.sort(np.pad(x, (0, n - x.size)))[::-1]
    y = np.sort(np.pad(y, (0, n - y.size)))[::-1]
    return bool(np.all(np.cumsum(x) <= np.cumsum(y) + NORMALIZATION_TOL))


def relabeled_bound(W: Witness, rho: QuantumOperator, strategy: MatchedOneWayStrategy) -> float:
    """
    Branch-wise product maximum sum_u ||Tr_Atilde[(P_u (x) I) Y]||_+ for a matched strategy.
    Bob's best conditional per branch can only raise the reward, so this bounds it from above.
    """
    if not isinstance(strategy, MatchedOneWayStrategy):
        raise ValidationError("relabeled bound needs a matched one-way strategy")
    rho = game.as_state(rho)
    problem = SeesawProblem(game.split_objective(W, rho), *rho.dims)
    total = 0.0
    for P in strategy.alice_povm:
        P = qops.permute_subsystems(P, strategies.ALICE_ORDER)
        _, weight = qops.positive_projector(problem.bob_operator(P.data))
        total += weight
    return float(total)


__all__ = [
    "ppt_min_eigenvalue",
    "negativity",
    "optimal_decomposable_witness",
    "sample_separable",
    "brute_force_payoff",
    "majorizes",
    "relabeled_bound",
    "upper_bound_global",
]
