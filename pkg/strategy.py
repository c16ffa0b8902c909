import logging
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

import qops
import states
from core.config import NORM_TOL
from core.exceptions import DimensionError, InfeasibleConversionError, LayoutError, ValidationError
from core.rng import haar_unitary, haar_vector
from models import (
    FilteredStrategy,
    FilterResult,
    MatchedOneWayStrategy,
    ProductStrategy,
    QuantumOperator,
    QuantumVector,
    Strategy,
)
from states import BellLabel

logger = logging.getLogger(__name__)

ALICE_ORDER = ("A", "A0")
BOB_ORDER = ("B0", "B")
SPLIT_ORDER = ALICE_ORDER + BOB_ORDER

IDENTITY_PAIRING: Dict[str, str] = {b.value: b.value for b in BellLabel}
TWISTED_PAIRING: Dict[str, str] = {
    BellLabel.PHI_PLUS.value: BellLabel.PHI_MINUS.value,
    BellLabel.PHI_MINUS.value: BellLabel.PHI_PLUS.value,
    BellLabel.PSI_PLUS.value: BellLabel.PSI_MINUS.value,
    BellLabel.PSI_MINUS.value: BellLabel.PSI_PLUS.value,
}


def alice_effect(data: np.ndarray, d_a: int) -> QuantumOperator:
    return QuantumOperator.build(list(ALICE_ORDER), [d_a, d_a], data)


def bob_effect(data: np.ndarray, d_b: int) -> QuantumOperator:
    return QuantumOperator.build(list(BOB_ORDER), [d_b, d_b], data)


# Realization

def _pair_effect(P: QuantumOperator, Q: QuantumOperator) -> np.ndarray:
    return qops.to_canonical(qops.tensor([P, Q])).data


def _realize(s: Strategy) -> QuantumOperator:
    if isinstance(s, ProductStrategy):
        return qops.to_canonical(qops.tensor([s.P, s.Q]))
    if isinstance(s, MatchedOneWayStrategy):
        first = qops.to_canonical(qops.tensor([s.alice_povm[0], s.bob_conditional[0]]))
        data = sum(_pair_effect(P, Q) for P, Q in zip(s.alice_povm, s.bob_conditional))
        return QuantumOperator(layout=first.layout, data=data)
    inner = realized_effect(s.inner)
    d_a0, d_a, d_b, d_b0 = inner.dims
    if s.filter_a0.side != d_a0 or s.filter_b0.side != d_b0:
        raise DimensionError("filter dimensions do not match the question slots")
    F = np.kron(np.kron(s.filter_a0.data, np.eye(d_a * d_b)), s.filter_b0.data)
    return QuantumOperator(layout=inner.layout, data=F.conj().T @ inner.data @ F)


def realized_effect(s: Strategy) -> QuantumOperator:
    """Distinguished effect Z11 in canonical order [A0, A, B, B0]; cached on the strategy."""
    if s._effect is None:
        s._effect = _realize(s)
    return s._effect


# Builders

def product(P: QuantumOperator, Q: QuantumOperator) -> ProductStrategy:
    s = ProductStrategy(P=P, Q=Q)
    realized_effect(s)
    return s


def matched_one_way(
    alice_povm: Sequence[QuantumOperator], bob_conditional: Sequence[QuantumOperator]
) -> MatchedOneWayStrategy:
    s = MatchedOneWayStrategy(alice_povm=list(alice_povm), bob_conditional=list(bob_conditional))
    realized_effect(s)
    return s


def matched_from_arrays(alice: Sequence[np.ndarray], bob: Sequence[np.ndarray], d_a: int, d_b: int) -> MatchedOneWayStrategy:
    return matched_one_way(
        [alice_effect(qops.hermitian_part(P), d_a) for P in alice],
        [bob_effect(qops.hermitian_part(Q), d_b) for Q in bob],
    )


def trivial(d_a: int, d_b: int) -> ProductStrategy:
    """Z11 = 0; never answers (1, 1)."""
    return product(
        alice_effect(np.zeros((d_a * d_a, d_a * d_a)), d_a),
        bob_effect(np.zeros((d_b * d_b, d_b * d_b)), d_b),
    )


def bell_matched(pairing: Mapping[str, str]) -> MatchedOneWayStrategy:
    """
    Alice projects AA0 onto the Bell basis and announces the outcome; Bob projects
    B0B onto the Bell state the pairing assigns to it.
    """
    names = {b.value for b in BellLabel}
    try:
        normalized = {BellLabel(k).value: BellLabel(v).value for k, v in pairing.items()}
    except ValueError:
        raise ValidationError(f"pairing entries must be among {sorted(names)}")
    if set(normalized) != names or set(normalized.values()) != names:
        raise ValidationError(f"pairing must be a permutation of {sorted(names)}")
    alice = []
    bob = []
    for name in sorted(normalized):
        alice.append(states.density(states.bell(name, ALICE_ORDER)))
        bob.append(states.density(states.bell(normalized[name], BOB_ORDER)))
    return matched_one_way(alice, bob)


def weyl_bell_basis(d: int) -> np.ndarray:
    """Rows are (I (x) X^m Z^n)|phi+_d>, an orthonormal maximally entangled basis."""
    omega = np.exp(2j * np.pi / d)
    shift = np.roll(np.eye(d), 1, axis=0)
    clock = np.diag(omega ** np.arange(d))
    phi = np.eye(d).ravel() / np.sqrt(d)
    rows = []
    for m in range(d):
        for n in range(d):
            local = np.linalg.matrix_power(shift, m) @ np.linalg.matrix_power(clock, n)
            rows.append(np.kron(np.eye(d), local) @ phi)
    return np.array(rows)


# Random starts shared by the see-saw optimizers and the brute-force oracle

def _pad(effects: List[np.ndarray], branches: int, side: int) -> List[np.ndarray]:
    return effects + [np.zeros((side, side), dtype=complex) for _ in range(branches - len(effects))]


def random_start(
    rng: np.random.Generator, dims: Tuple[int, int], index: int, branches: int
) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """
    Draw one random matched strategy as raw effect lists.

    Even indices give a Haar rank-1 product pair (P, Q) written as the POVM
    {P, I - P} with conditionals {Q, 0}; odd indices give a Bell-like strategy,
    a locally rotated Bell basis for Alice with randomly paired, locally rotated
    Bell projectors for Bob.

    Returns:
        Tuple of (alice effects on [A, A0], bob effects on [B0, B]), each of length branches
    """
    d_a, d_b = dims
    side_a, side_b = d_a * d_a, d_b * d_b
    if branches < 2:
        raise ValidationError("random starts need at least two branches")
    if index % 2 == 0:
        a = haar_vector(rng, side_a)
        b = haar_vector(rng, side_b)
        P = np.outer(a, a.conj())
        Q = np.outer(b, b.conj())
        return _pad([P, np.eye(side_a) - P], branches, side_a), _pad([Q], branches, side_b)

    rot_a = np.kron(haar_unitary(rng, d_a), haar_unitary(rng, d_a))
    rot_b = np.kron(haar_unitary(rng, d_b), haar_unitary(rng, d_b))
    alice_kets = weyl_bell_basis(d_a) @ rot_a.T
    bob_kets = weyl_bell_basis(d_b) @ rot_b.T
    pairing = rng.permutation(side_b)

    alice = [np.zeros((side_a, side_a), dtype=complex) for _ in range(branches)]
    bob = [np.zeros((side_b, side_b), dtype=complex) for _ in range(branches)]
    for k, ket in enumerate(alice_kets):
        alice[k % branches] += np.outer(ket, ket.conj())
    for u in range(min(branches, side_a)):
        ket = bob_kets[pairing[u % side_b]]
        bob[u] = np.outer(ket, ket.conj())
    return alice, bob


# SLOCC filters and dual maps

def slocc_filter(psi: QuantumVector, phi: QuantumVector) -> FilterResult:
    """
    Stochastic local conversion psi -> phi built in the Schmidt bases.

    K = c sum_i sqrt(nu_i / mu_i) |l_i^phi><l_i^psi| acts on the first slot with
    c = min_i sqrt(mu_i / nu_i); a unitary on the second slot aligns the right
    Schmidt bases. Then (K (x) U)|psi> = sqrt(q)|phi> with q = c^2.
    """
    if psi.dims != phi.dims or len(psi.dims) != 2:
        raise DimensionError("filter endpoints must be two-slot vectors of equal dims")
    rank_psi = qops.schmidt_decompose(psi, ([psi.labels[0]], [psi.labels[1]])).rank
    rank_phi = qops.schmidt_decompose(phi, ([phi.labels[0]], [phi.labels[1]])).rank
    if rank_phi > rank_psi:
        raise InfeasibleConversionError(f"Schmidt rank {rank_phi} target is unreachable from rank {rank_psi}")

    d1, d2 = psi.dims
    u_psi, s_psi, vh_psi = np.linalg.svd(psi.vec.reshape(d1, d2))
    u_phi, s_phi, vh_phi = np.linalg.svd(phi.vec.reshape(d1, d2))
    support = np.arange(rank_phi)
    ratios = s_phi[support] / s_psi[support]
    c = 1.0 / float(np.max(ratios))

    K = c * (u_phi[:, support] * ratios) @ u_psi[:, support].conj().T
    U = vh_phi.T @ vh_psi.conj()
    q = c * c
    logger.debug("SLOCC filter of ranks %d -> %d with success probability %.6f", rank_psi, rank_phi, q)
    return FilterResult(
        filter=QuantumOperator.build([psi.labels[0]], [d1], K),
        local_unitary=QuantumOperator.build([psi.labels[1]], [d2], U),
        q=q,
    )


def question_filters(result: FilterResult) -> Tuple[QuantumOperator, QuantumOperator]:
    """Question-slot filters (conj K on A0, U on B0) that carry W's game onto q times V's."""
    return (
        QuantumOperator.build(["A0"], [result.filter.side], result.filter.data.conj()),
        QuantumOperator.build(["B0"], [result.local_unitary.side], result.local_unitary.data),
    )


def filter_pullback(inner: Strategy, filter_pair: Tuple[QuantumOperator, QuantumOperator]) -> FilteredStrategy:
    filter_a0, filter_b0 = filter_pair
    s = FilteredStrategy(filter_a0=filter_a0, filter_b0=filter_b0, inner=inner)
    realized_effect(s)
    return s


def channel_dual_pullback(
    Z: QuantumOperator,
    kraus_pairs: Sequence[Tuple[QuantumOperator, QuantumOperator]],
    weights: Sequence[float],
) -> QuantumOperator:
    """
    Heisenberg-picture image sum_j q_j F_j^dag Z F_j of a separable operation.

    Args:
        Z: Effect in any layout
        kraus_pairs: Local Kraus factors (F_Atilde, F_Btilde) whose labels jointly cover Z's
        weights: Convex weights q_j

    Returns:
        Pulled-back effect in Z's layout
    """
    weights = np.asarray(weights, dtype=float)
    if len(weights) != len(kraus_pairs) or not len(weights):
        raise ValidationError("need one weight per Kraus pair")
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > NORM_TOL:
        raise ValidationError("channel weights must be a probability vector")

    factors = []
    for F_a, F_b in kraus_pairs:
        joint = qops.tensor([F_a, F_b])
        if sorted(joint.labels) != sorted(Z.labels):
            raise LayoutError(f"Kraus labels {list(joint.labels)} do not cover {list(Z.labels)}")
        factors.append(qops.permute_subsystems(joint, Z.labels).data)

    total = sum(q * F.conj().T @ F for q, F in zip(weights, factors))
    if np.linalg.eigvalsh(qops.hermitian_part(total))[-1] > 1.0 + NORM_TOL:
        raise ValidationError("separable operation is not trace non-increasing")
    data = sum(q * F.conj().T @ Z.data @ F for q, F in zip(weights, factors))
    return QuantumOperator(layout=Z.layout, data=data)


def is_valid_effect(op: QuantumOperator, tol: float = 1e-9) -> bool:
    eigs = np.linalg.eigvalsh(qops.hermitian_part(op.data))
    return bool(eigs[0] >= -tol and eigs[-1] <= 1.0 + tol)
