from typing import Any, Dict, List, Sequence

import numpy as np

from core.config import HERMITIAN_TOL, MAX_SLOT_DIM, NORM_TOL, PSD_TOL
from core.exceptions import DimensionError, EffectValidityError, ValidationError


def encode_complex(arr: np.ndarray) -> List[List[float]]:
    """Flatten row-major into [re, im] pairs."""
    flat = np.asarray(arr, dtype=complex).ravel()
    return [[float(z.real), float(z.imag)] for z in flat]


def decode_complex(value: Any, shape: Sequence[int]) -> np.ndarray:
    if isinstance(value, np.ndarray):
        arr = value.astype(complex)
    else:
        pairs = np.asarray(value, dtype=float)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise ValidationError("complex payload must be a list of [re, im] pairs")
        arr = pairs[:, 0] + 1j * pairs[:, 1]
    if arr.size != int(np.prod(shape)):
        raise ValidationError(f"payload has {arr.size} entries, expected {int(np.prod(shape))}")
    return arr.reshape(tuple(shape))


def require_keys(values: Dict[str, Any], keys: Sequence[str], what: str) -> None:
    missing = [k for k in keys if k not in values]
    if missing:
        raise ValidationError(f"{what} is missing {missing}")


def check_slot_dims(*dims: int) -> None:
    """Reject slot dimensions whose joint game space would exceed the dense cap."""
    if max(dims) > MAX_SLOT_DIM:
        raise DimensionError(f"slot dimension {max(dims)} exceeds {MAX_SLOT_DIM}")


def frozen_array(value: Any) -> np.ndarray:
    arr = np.array(value, dtype=complex)
    arr.flags.writeable = False
    return arr


def is_hermitian(mat: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(mat - mat.conj().T), initial=0.0) < tol)


def check_density(mat: np.ndarray, name: str) -> None:
    if not is_hermitian(mat):
        raise ValidationError(f"{name} is not Hermitian")
    if abs(np.trace(mat).real - 1.0) > NORM_TOL:
        raise ValidationError(f"{name} does not have unit trace")
    if np.linalg.eigvalsh(mat)[0] < -PSD_TOL:
        raise ValidationError(f"{name} is not positive semidefinite")


def check_effect(mat: np.ndarray, name: str) -> None:
    if not is_hermitian(mat):
        raise EffectValidityError(f"{name} is not Hermitian")
    eigs = np.linalg.eigvalsh(mat)
    if eigs[0] < -PSD_TOL or eigs[-1] > 1.0 + PSD_TOL:
        raise EffectValidityError(f"{name} has eigenvalues outside [0, 1]")


def check_contraction(mat: np.ndarray, name: str) -> None:
    if np.linalg.norm(mat, 2) > 1.0 + NORM_TOL:
        raise ValidationError(f"{name} has operator norm above 1")
