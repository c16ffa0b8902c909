from functools import reduce
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from core.config import HERMITIAN_TOL, NORM_TOL, RANK_TOL
from core.exceptions import DimensionError, LayoutError, ValidationError
from models import QuantumOperator, QuantumVector, SchmidtForm, SubsystemLayout
from models.base import check_density, is_hermitian

CANONICAL_ORDER = ("A0", "A", "B", "B0")


# Array kernels

def permute_array(data: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    n = len(dims)
    side = data.shape[0]
    tensor = data.reshape(tuple(dims) * 2)
    axes = list(perm) + [n + p for p in perm]
    return tensor.transpose(axes).reshape(side, side)


def permute_vector(vec: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    return vec.reshape(tuple(dims)).transpose(list(perm)).ravel()


def ptrace_array(data: np.ndarray, dims: Sequence[int], drop: Iterable[int]) -> np.ndarray:
    tensor = data.reshape(tuple(dims) * 2)
    for axis in sorted(drop, reverse=True):
        tensor = np.trace(tensor, axis1=axis, axis2=axis + tensor.ndim // 2)
    kept = int(np.sqrt(tensor.size))
    return tensor.reshape(kept, kept)


def ptranspose_array(data: np.ndarray, dims: Sequence[int], on: Iterable[int]) -> np.ndarray:
    n = len(dims)
    side = data.shape[0]
    tensor = data.reshape(tuple(dims) * 2)
    axes = list(range(2 * n))
    for i in on:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    return tensor.transpose(axes).reshape(side, side)


def hermitian_part(mat: np.ndarray) -> np.ndarray:
    return 0.5 * (mat + mat.conj().T)


def positive_projector(mat: np.ndarray) -> Tuple[np.ndarray, float]:
    """Projector onto the positive eigenspace and the sum of positive eigenvalues."""
    vals, vecs = np.linalg.eigh(hermitian_part(mat))
    mask = vals > RANK_TOL
    kept = vecs[:, mask]
    return kept @ kept.conj().T, float(np.sum(vals[mask]))


# Operator-level API

def _indices(layout: SubsystemLayout, labels: Iterable[str]) -> List[int]:
    return [layout.index(label) for label in labels]


def tensor(factors: Sequence[QuantumOperator]) -> QuantumOperator:
    if not factors:
        raise ValidationError("tensor needs at least one factor")
    layout = reduce(lambda acc, f: acc.concat(f.layout), factors[1:], factors[0].layout)
    data = reduce(np.kron, (f.data for f in factors))
    return QuantumOperator(layout=layout, data=data)


def permute_subsystems(op: QuantumOperator, new_order: Sequence[str]) -> QuantumOperator:
    if sorted(new_order) != sorted(op.labels):
        raise LayoutError(f"{list(new_order)} is not a permutation of {list(op.labels)}")
    perm = _indices(op.layout, new_order)
    layout = SubsystemLayout(labels=tuple(new_order), dims=tuple(op.dims[p] for p in perm))
    return QuantumOperator(layout=layout, data=permute_array(op.data, op.dims, perm))


def to_canonical(op: QuantumOperator) -> QuantumOperator:
    order = [label for label in CANONICAL_ORDER if label in op.labels]
    if len(order) != len(op.labels):
        raise LayoutError(f"layout {list(op.labels)} has non-canonical labels")
    return permute_subsystems(op, order)


def partial_trace(op: QuantumOperator, keep: Iterable[str]) -> QuantumOperator:
    keep = set(keep)
    for label in keep:
        op.layout.index(label)
    drop = [i for i, label in enumerate(op.labels) if label not in keep]
    kept = [i for i, label in enumerate(op.labels) if label in keep]
    layout = SubsystemLayout(
        labels=tuple(op.labels[i] for i in kept),
        dims=tuple(op.dims[i] for i in kept),
    )
    return QuantumOperator(layout=layout, data=ptrace_array(op.data, op.dims, drop))


def partial_transpose(op: QuantumOperator, on: Iterable[str]) -> QuantumOperator:
    idx = _indices(op.layout, on)
    return QuantumOperator(layout=op.layout, data=ptranspose_array(op.data, op.dims, idx))


def relabel(op: QuantumOperator, labels: Sequence[str]) -> QuantumOperator:
    if len(labels) != len(op.labels):
        raise DimensionError(f"cannot relabel {list(op.labels)} as {list(labels)}")
    return QuantumOperator.build(list(labels), list(op.dims), op.data)


def identity(labels: Sequence[str], dims: Sequence[int]) -> QuantumOperator:
    return QuantumOperator.build(list(labels), list(dims), np.eye(int(np.prod(dims))))


def projector(vec: QuantumVector) -> QuantumOperator:
    return QuantumOperator(layout=vec.layout, data=np.outer(vec.vec, vec.vec.conj()))


def eig_hermitian(op: QuantumOperator) -> Tuple[np.ndarray, np.ndarray]:
    """
    Diagonalize a Hermitian operator.

    Returns:
        Tuple of (eigenvalues sorted descending, orthonormal eigenvector columns)
    """
    if not is_hermitian(op.data, HERMITIAN_TOL):
        raise ValidationError("operator is not Hermitian")
    vals, vecs = np.linalg.eigh(hermitian_part(op.data))
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def positive_part(op: QuantumOperator) -> Tuple[QuantumOperator, float]:
    if not is_hermitian(op.data, HERMITIAN_TOL):
        raise ValidationError("operator is not Hermitian")
    proj, weight = positive_projector(op.data)
    return QuantumOperator(layout=op.layout, data=proj), weight


def schmidt_decompose(vec: QuantumVector, split: Tuple[Sequence[str], Sequence[str]]) -> SchmidtForm:
    left, right = list(split[0]), list(split[1])
    if sorted(left + right) != sorted(vec.labels):
        raise LayoutError(f"split {left}|{right} does not partition {list(vec.labels)}")
    norm = np.linalg.norm(vec.vec)
    if abs(norm - 1.0) > NORM_TOL:
        raise ValidationError(f"vector norm {norm:.3g} deviates from 1")
    perm = _indices(vec.layout, left + right)
    d_left = int(np.prod([vec.layout.dim(label) for label in left]))
    d_right = int(np.prod([vec.layout.dim(label) for label in right]))
    coeff = permute_vector(vec.vec, vec.dims, perm).reshape(d_left, d_right)
    u, s, vh = np.linalg.svd(coeff)
    k = min(d_left, d_right)
    return SchmidtForm(coefficients=s[:k], left_basis=u[:, :k].T, right_basis=vh[:k, :])


def check_state(op: QuantumOperator, name: str = "state") -> None:
    check_density(op.data, name)


def min_ppt_eigenvalue(rho: QuantumOperator) -> float:
    """Smallest eigenvalue of the partial transpose on the second party."""
    pt = partial_transpose(rho, [rho.labels[-1]])
    return float(np.linalg.eigvalsh(hermitian_part(pt.data))[0])
