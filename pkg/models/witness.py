from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_serializer, model_validator

from core.config import NORM_TOL
from core.exceptions import ValidationError
from .base import check_density, is_hermitian, require_keys
from .operator import QuantumOperator, QuantumVector


class WitnessKind(str, Enum):
    DECOMPOSABLE = "decomposable"  # -D |psi><psi|^{T_B0}
    GENERIC = "generic"


class Witness(BaseModel):
    model_config = ConfigDict(frozen=True)

    op: QuantumOperator
    D: int
    kind: WitnessKind = WitnessKind.GENERIC
    source_vector: Optional[QuantumVector] = None

    @model_validator(mode="before")
    @classmethod
    def _from_wire(cls, values: Any):
        if isinstance(values, dict) and "op" not in values and "labels" in values:
            require_keys(values, ("labels", "dims", "data", "D"), "witness")
            values = {
                "op": {k: values[k] for k in ("labels", "dims", "data")},
                "D": values["D"],
                "kind": values.get("kind", WitnessKind.GENERIC),
                "source_vector": values.get("psi"),
            }
        return values

    @model_validator(mode="after")
    def _check(self):
        if self.op.labels != ("A0", "B0"):
            raise ValidationError(f"a witness acts on the question slots A0, B0, got {list(self.op.labels)}")
        if self.D < 1:
            raise ValidationError("D must be positive")
        if not is_hermitian(self.op.data):
            raise ValidationError("witness is not Hermitian")
        if abs(np.trace(self.op.data).real + self.D) > NORM_TOL:
            raise ValidationError(f"witness trace must equal -D = {-self.D}")
        if self.kind == WitnessKind.DECOMPOSABLE and self.source_vector is None:
            raise ValidationError("a decomposable witness needs its source vector")
        return self

    @model_serializer
    def _to_wire(self) -> Dict[str, Any]:
        payload = self.op.model_dump()
        payload.update({
            "D": self.D,
            "kind": self.kind.value,
            "psi": self.source_vector.model_dump() if self.source_vector is not None else None,
        })
        return payload


class QuestionItem(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: float
    beta: float
    tau: QuantumOperator
    omega: QuantumOperator


class QuestionEnsemble(BaseModel):
    model_config = ConfigDict(frozen=True)

    items: List[QuestionItem]

    @model_validator(mode="before")
    @classmethod
    def _from_wire(cls, values: Any):
        if isinstance(values, list):
            values = {"items": values}
        return values

    @model_validator(mode="after")
    def _check(self):
        if not self.items:
            raise ValidationError("question ensemble is empty")
        if any(item.p <= 0 for item in self.items):
            raise ValidationError("question probabilities must be positive")
        if abs(sum(item.p for item in self.items) - 1.0) > 1e-12:
            raise ValidationError("question probabilities do not sum to 1")
        for i, item in enumerate(self.items):
            check_density(item.tau.data, f"tau[{i}]")
            check_density(item.omega.data, f"omega[{i}]")
        return self

    @model_serializer
    def _to_wire(self) -> List[Dict[str, Any]]:
        return [item.model_dump() for item in self.items]

    def __len__(self) -> int:
        return len(self.items)
