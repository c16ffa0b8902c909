from enum import Enum
from typing import Sequence, Tuple

import numpy as np

from core.exceptions import ValidationError
from models import QuantumOperator, QuantumVector
from models.base import check_slot_dims


class BellLabel(str, Enum):
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"


_BELL_AMPLITUDES = {
    BellLabel.PHI_PLUS: (1, 0, 0, 1),
    BellLabel.PHI_MINUS: (1, 0, 0, -1),
    BellLabel.PSI_PLUS: (0, 1, 1, 0),
    BellLabel.PSI_MINUS: (0, 1, -1, 0),
}


def bell(name: str, labels: Sequence[str] = ("A", "B")) -> QuantumVector:
    try:
        amplitudes = _BELL_AMPLITUDES[BellLabel(name)]
    except ValueError:
        raise ValidationError(f"unknown Bell state {name!r}; use one of {[b.value for b in BellLabel]}")
    return QuantumVector.build(list(labels), [2, 2], np.array(amplitudes, dtype=complex) / np.sqrt(2))


def maximally_entangled(dims: Tuple[int, int], labels: Sequence[str] = ("A", "B")) -> QuantumVector:
    """Rank-min(dims) maximally entangled vector sum_i |ii> / sqrt(D)."""
    d_left, d_right = dims
    check_slot_dims(d_left, d_right)
    rank = min(d_left, d_right)
    vec = np.zeros(d_left * d_right, dtype=complex)
    for i in range(rank):
        vec[i * d_right + i] = 1.0
    return QuantumVector.build(list(labels), [d_left, d_right], vec / np.sqrt(rank))


def product_vector(a: np.ndarray, b: np.ndarray, labels: Sequence[str] = ("A", "B")) -> QuantumVector:
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    return QuantumVector.build(list(labels), [a.size, b.size], np.kron(a, b))


def density(vec: QuantumVector) -> QuantumOperator:
    return QuantumOperator(layout=vec.layout, data=np.outer(vec.vec, vec.vec.conj()))


def werner(v: float, labels: Sequence[str] = ("A", "B")) -> QuantumOperator:
    """v |phi+><phi+| + (1 - v) I/4; entangled iff v > 1/3."""
    if not 0.0 <= v <= 1.0:
        raise ValidationError(f"Werner parameter {v} outside [0, 1]")
    phi = density(bell("phi+", labels)).data
    return QuantumOperator.build(list(labels), [2, 2], v * phi + (1.0 - v) * np.eye(4) / 4)


def _split(text: str) -> Tuple[str, str]:
    kind, _, arg = text.partition(":")
    if not arg:
        raise ValidationError(f"named input {text!r} must look like kind:argument")
    return kind.strip().lower(), arg.strip()


def _dimension(arg: str) -> int:
    if not arg.isdigit() or int(arg) < 2:
        raise ValidationError(f"dimension {arg!r} must be an integer >= 2")
    check_slot_dims(int(arg))
    return int(arg)


def parse_named_vector(text: str, labels: Sequence[str] = ("A", "B")) -> QuantumVector:
    kind, arg = _split(text)
    if kind == "bell":
        if arg.isdigit():
            d = _dimension(arg)
            return maximally_entangled((d, d), labels)
        return bell(arg, labels)
    if kind == "maxent":
        d = _dimension(arg)
        return maximally_entangled((d, d), labels)
    raise ValidationError(f"unknown named vector {text!r}")


def parse_named_state(text: str, labels: Sequence[str] = ("A", "B")) -> QuantumOperator:
    """Resolve bell:<name>, werner:<v> and maxent:<d> into density operators."""
    kind, arg = _split(text)
    if kind == "werner":
        try:
            v = float(arg)
        except ValueError:
            raise ValidationError(f"Werner parameter {arg!r} is not a number")
        return werner(v, labels)
    return density(parse_named_vector(text, labels))
