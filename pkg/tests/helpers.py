"""Random instances shared across the test modules."""
from typing import List, Optional, Tuple

import numpy as np

import states
import strategy as strategies
from core.rng import haar_unitary, stream
from models import QuantumOperator, Witness


def random_state(seed: int, d_a: int = 2, d_b: int = 2, rank: Optional[int] = None) -> QuantumOperator:
    """Ginibre-distributed mixed state on [A, B]."""
    rng = stream(seed, 99)
    side = d_a * d_b
    g = rng.standard_normal((side, rank or side)) + 1j * rng.standard_normal((side, rank or side))
    rho = g @ g.conj().T
    return QuantumOperator.build(["A", "B"], [d_a, d_b], rho / np.trace(rho).real)


def random_witness(seed: int, d_a: int, d_b: int) -> Witness:
    """Generic Hermitian operator shifted to trace -min(d_a, d_b)."""
    rng = stream(seed, 98)
    side = d_a * d_b
    g = rng.standard_normal((side, side)) + 1j * rng.standard_normal((side, side))
    H = g + g.conj().T
    D = min(d_a, d_b)
    H = H - (np.trace(H).real + D) / side * np.eye(side)
    return Witness(op=QuantumOperator.build(["A0", "B0"], [d_a, d_b], H), D=D)


def random_strategy(seed: int, d_a: int, d_b: int, index: int = 1):
    alice, bob = strategies.random_start(stream(seed, 11), (d_a, d_b), index, max(2, d_a * d_a))
    return strategies.matched_from_arrays(alice, bob, d_a, d_b)


def local_unitary(seed: int, d_a: int = 2, d_b: int = 2) -> np.ndarray:
    rng = stream(seed, 7)
    return np.kron(haar_unitary(rng, d_a), haar_unitary(rng, d_b))


def rotate(rho: QuantumOperator, U: np.ndarray) -> QuantumOperator:
    return QuantumOperator(layout=rho.layout, data=U @ rho.data @ U.conj().T)


def phi_plus_product(d: int = 2):
    phi = states.density(states.maximally_entangled((d, d))).data
    return strategies.product(strategies.alice_effect(phi, d), strategies.bob_effect(phi, d))


def accept_all(d: int = 2):
    return strategies.product(strategies.alice_effect(np.eye(d * d), d), strategies.bob_effect(np.eye(d * d), d))


def random_local_channel(seed: int, d: int = 2, kraus: int = 2) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """Kraus operators of independent channels on A and B, cut from Haar isometries."""
    rng = stream(seed, 12)

    def operators() -> List[np.ndarray]:
        isometry = haar_unitary(rng, d * kraus)[:, :d]
        return [isometry[k * d:(k + 1) * d, :] for k in range(kraus)]

    return operators(), operators()


def apply_local_channel(rho: QuantumOperator, kraus_a: List[np.ndarray], kraus_b: List[np.ndarray]) -> QuantumOperator:
    data = sum(np.kron(K, L) @ rho.data @ np.kron(K, L).conj().T for K in kraus_a for L in kraus_b)
    return QuantumOperator(layout=rho.layout, data=data)


def mix(rho1: QuantumOperator, rho2: QuantumOperator, p: float) -> QuantumOperator:
    return QuantumOperator(layout=rho1.layout, data=p * rho1.data + (1 - p) * rho2.data)
