import json
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, TextIO, Tuple

import numpy as np

import game as games
from core.exceptions import ValidationError
from core.rng import stream
from models import EstimateReport, Game, QuantumOperator, Strategy

logger = logging.getLogger(__name__)


def _partition_sizes(shots: int, partitions: int) -> List[int]:
    base, extra = divmod(shots, partitions)
    return [base + (1 if k < extra else 0) for k in range(partitions)]


def _simulate_partition(
    probs: np.ndarray, p11: np.ndarray, seed: int, partition: int, size: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Question indices and (1, 1) indicators for one partition's shots."""
    rng = stream(seed, partition)
    questions = rng.choice(len(probs), size=size, p=probs)
    wins = rng.random(size) < p11[questions]
    return questions, wins


def run(
    game: Game,
    rho: QuantumOperator,
    strategy: Strategy,
    shots: int,
    seed: int = 0,
    partitions: int = 1,
    workers: int = 1,
    transcript: Optional[TextIO] = None,
) -> EstimateReport:
    """
    Simulate the referee protocol shot by shot.

    Each shot draws a question i from {p_i}, then the answer pair (1, 1) with the
    Born probability of the strategy's distinguished effect, else (0, 0). The
    reward of a shot is reward11[i] on (1, 1) and 0 otherwise.

    Args:
        game: Game to play
        rho: Shared bipartite state
        strategy: Players' strategy
        shots: Number of rounds, at least 1
        seed: Root seed; partition k draws from the stream (seed, k)
        partitions: Number of independent shot partitions
        workers: Threads used to simulate partitions
        transcript: Optional text stream receiving one JSON line {"i", "x", "y"} per shot

    Returns:
        EstimateReport with the sample mean of the per-shot rewards and its standard error
    """
    if shots < 1:
        raise ValidationError("shots must be at least 1")
    if partitions < 1 or partitions > shots:
        raise ValidationError("partitions must lie between 1 and shots")

    p11 = games.win_probabilities(game, rho, strategy)
    clamped = int(np.sum((p11 < 0.0) | (p11 > 1.0)))
    if clamped:
        logger.warning("clamped %d outcome probabilities into [0, 1]", clamped)
    p11 = np.clip(p11, 0.0, 1.0)
    probs = np.array([item.p for item in game.ensemble.items])
    rewards = np.asarray(game.reward11, dtype=float)

    sizes = _partition_sizes(shots, partitions)

    def simulate(k: int) -> Tuple[np.ndarray, np.ndarray]:
        return _simulate_partition(probs, p11, seed, k, sizes[k])

    if workers > 1 and partitions > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(simulate, range(partitions)))
    else:
        results = [simulate(k) for k in range(partitions)]

    questions = np.concatenate([q for q, _ in results])
    wins = np.concatenate([w for _, w in results])

    if transcript is not None:
        for i, won in zip(questions, wins):
            answer = 1 if won else 0
            transcript.write(json.dumps({"i": int(i), "x": answer, "y": answer}) + "\n")

    per_shot = np.where(wins, rewards[questions], 0.0)
    mean = float(per_shot.mean())
    stderr = float(per_shot.std(ddof=1) / np.sqrt(shots)) if shots > 1 else 0.0

    n_counts = np.bincount(questions, minlength=len(probs))
    win_counts = np.bincount(questions, weights=wins.astype(float), minlength=len(probs))
    counts: Dict[int, Tuple[int, int]] = {
        i: (int(n_counts[i]), int(win_counts[i])) for i in range(len(probs)) if n_counts[i]
    }
    logger.debug("simulated %d shots in %d partitions: mean %.6f +/- %.6f", shots, partitions, mean, stderr)
    return EstimateReport(
        mean=mean,
        stderr=stderr,
        shots=shots,
        per_question_counts=counts,
        seed=seed,
        partitions=partitions,
        clamped=clamped,
    )


def estimate_ci(report: EstimateReport, z: float) -> Tuple[float, float]:
    if z < 0:
        raise ValidationError("z must be non-negative")
    half = z * report.stderr
    return report.mean - half, report.mean + half
