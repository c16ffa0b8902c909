import logging
from typing import List, Tuple, Union

import numpy as np

import qops
from core.exceptions import DimensionError, NotEntangledError, SolverError, ValidationError
from core.rng import haar_vector, stream
from models import QuantumOperator, QuantumVector, QuestionEnsemble, QuestionItem, Witness, WitnessKind
from models.base import check_slot_dims

logger = logging.getLogger(__name__)

QUESTION_LABELS = ("A0", "B0")
RECONSTRUCTION_TOL = 1e-9


def _on_question_slots(vec: QuantumVector) -> QuantumVector:
    if len(vec.labels) != 2:
        raise DimensionError(f"witness source vectors live on two slots, got {list(vec.labels)}")
    if vec.labels == QUESTION_LABELS:
        return vec
    return QuantumVector.build(list(QUESTION_LABELS), list(vec.dims), vec.vec)


def decomposable_witness(psi: QuantumVector) -> Witness:
    """
    Build W = -D |psi><psi|^{T_B0} from an entangled source vector.

    Args:
        psi: Unit vector on two slots; relabelled onto the question slots A0, B0

    Returns:
        Decomposable witness with trace -D, D = min(d_A0, d_B0)
    """
    psi = _on_question_slots(psi)
    check_slot_dims(*psi.dims)
    schmidt = qops.schmidt_decompose(psi, (["A0"], ["B0"]))
    if schmidt.rank < 2:
        raise NotEntangledError("source vector has Schmidt rank 1")
    D = min(psi.dims)
    pt = qops.partial_transpose(qops.projector(psi), ["B0"])
    op = QuantumOperator(layout=psi.layout, data=-D * pt.data)
    return Witness(op=op, D=D, kind=WitnessKind.DECOMPOSABLE, source_vector=psi)


def swap_matrix(d: int) -> np.ndarray:
    swap = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            swap[j * d + i, i * d + j] = 1.0
    return swap


def swap_witness(d: int) -> Witness:
    """-S on d x d; equals -d |phi+_d><phi+_d|^{T_B0}."""
    if d < 2:
        raise ValidationError("swap witness needs d >= 2")
    check_slot_dims(d)
    source = np.zeros(d * d, dtype=complex)
    source[[i * d + i for i in range(d)]] = 1.0 / np.sqrt(d)
    return Witness(
        op=QuantumOperator.build(list(QUESTION_LABELS), [d, d], -swap_matrix(d)),
        D=d,
        kind=WitnessKind.DECOMPOSABLE,
        source_vector=QuantumVector.build(list(QUESTION_LABELS), [d, d], source),
    )


def canonical_witness(d_a: int, d_b: int) -> Witness:
    check_slot_dims(d_a, d_b)
    if d_a == d_b:
        return swap_witness(d_a)
    rank = min(d_a, d_b)
    vec = np.zeros(d_a * d_b, dtype=complex)
    vec[[i * d_b + i for i in range(rank)]] = 1.0 / np.sqrt(rank)
    return decomposable_witness(QuantumVector.build(list(QUESTION_LABELS), [d_a, d_b], vec))


def evaluate(W: Witness, rho: QuantumOperator) -> float:
    if W.op.dims != rho.dims:
        raise DimensionError(f"witness dims {list(W.op.dims)} do not match state dims {list(rho.dims)}")
    qops.check_state(rho)
    return float(np.trace(W.op.data @ rho.data).real)


def is_block_negative_sampled(
    W: Union[Witness, QuantumOperator], n: int, seed: int = 0
) -> Tuple[bool, float]:
    """
    Sample <a,b|W|a,b> over Haar-random product vectors.

    Returns:
        Tuple of (all samples <= 1e-9, largest sampled value)
    """
    if n < 1:
        raise ValidationError("need at least one sample")
    op = W.op if isinstance(W, Witness) else W
    if len(op.dims) != 2:
        raise DimensionError("block negativity is defined for two-slot operators")
    d_a, d_b = op.dims
    rng = stream(seed)
    samples = np.array([np.kron(haar_vector(rng, d_a), haar_vector(rng, d_b)) for _ in range(n)])
    values = np.einsum("ni,ij,nj->n", samples.conj(), op.data, samples).real
    worst = float(np.max(values))
    return worst <= 1e-9, worst


def question_basis(d: int) -> List[np.ndarray]:
    """d^2 pure states |k>, (|j>+|k>)/sqrt2, (|j>+i|k>)/sqrt2; informationally complete."""
    kets = [np.eye(d)[k] for k in range(d)]
    for j in range(d):
        for k in range(j + 1, d):
            kets.append((np.eye(d)[j] + np.eye(d)[k]) / np.sqrt(2))
            kets.append((np.eye(d)[j] + 1j * np.eye(d)[k]) / np.sqrt(2))
    return [np.outer(ket, ket.conj()) for ket in kets]


def _reshuffle(mat: np.ndarray, d_a: int, d_b: int) -> np.ndarray:
    # X (x) Y  ->  vec(X) vec(Y)^T
    return mat.reshape(d_a, d_b, d_a, d_b).transpose(0, 2, 1, 3).reshape(d_a * d_a, d_b * d_b)


def decompose_product_ensemble(W: Witness) -> QuestionEnsemble:
    d_a, d_b = W.op.dims
    check_slot_dims(d_a, d_b)
    basis_a = question_basis(d_a)
    basis_b = question_basis(d_b)
    T = np.array([tau.T.ravel() for tau in basis_a]).T
    S = np.array([omega.T.ravel() for omega in basis_b]).T

    R = _reshuffle(W.op.data, d_a, d_b)
    partial = np.linalg.lstsq(T, R, rcond=None)[0]
    beta = np.linalg.lstsq(S, partial.T, rcond=None)[0].T
    if np.max(np.abs(beta.imag)) > 1e-9:
        raise SolverError("product decomposition produced complex coefficients")
    beta = beta.real

    cutoff = 1e-14 * max(1.0, float(np.max(np.abs(beta))))
    terms = [(x, y, beta[x, y]) for x in range(len(basis_a)) for y in range(len(basis_b)) if abs(beta[x, y]) > cutoff]
    total = sum(abs(b) for _, _, b in terms)
    if not terms:
        raise SolverError("witness has an empty product decomposition")
    items = [
        QuestionItem(
            p=abs(b) / total,
            beta=float(b),
            tau=QuantumOperator.build([W.op.labels[0]], [d_a], basis_a[x]),
            omega=QuantumOperator.build([W.op.labels[1]], [d_b], basis_b[y]),
        )
        for x, y, b in terms
    ]
    ensemble = QuestionEnsemble(items=items)

    residual = np.max(np.abs(reconstruct(ensemble).data - W.op.data))
    if residual > RECONSTRUCTION_TOL:
        raise SolverError(f"product decomposition residual {residual:.2e} exceeds {RECONSTRUCTION_TOL}")
    logger.debug("decomposed witness into %d product questions", len(items))
    return ensemble


def reconstruct(ensemble: QuestionEnsemble) -> QuantumOperator:
    """Sum of beta_i tau_i^T (x) omega_i^T."""
    if not ensemble.items:
        raise ValidationError("cannot reconstruct from an empty ensemble")
    first = ensemble.items[0]
    data = sum(item.beta * np.kron(item.tau.data.T, item.omega.data.T) for item in ensemble.items)
    return QuantumOperator.build(
        [first.tau.labels[0], first.omega.labels[0]],
        [first.tau.side, first.omega.side],
        data,
    )
