from typing import Any, Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_serializer, model_validator

from core.config import MAX_SIDE
from core.exceptions import DimensionError, LayoutConflictError, LayoutError, ValidationError
from .base import decode_complex, encode_complex, frozen_array, require_keys


class SubsystemLayout(BaseModel):
    model_config = ConfigDict(frozen=True)

    labels: Tuple[str, ...]
    dims: Tuple[int, ...]

    @model_validator(mode="after")
    def _check(self):
        if len(self.labels) != len(self.dims):
            raise LayoutError("labels and dims differ in length")
        if len(set(self.labels)) != len(self.labels):
            raise LayoutConflictError(f"duplicate labels in {list(self.labels)}")
        if any(d < 1 for d in self.dims):
            raise LayoutError("dimensions must be positive")
        if self.total > MAX_SIDE:
            raise DimensionError(f"total dimension {self.total} exceeds {MAX_SIDE}")
        return self

    @property
    def total(self) -> int:
        return int(np.prod(self.dims, dtype=np.int64)) if self.dims else 1

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LayoutError(f"unknown label {label!r}; layout has {list(self.labels)}")

    def dim(self, label: str) -> int:
        return self.dims[self.index(label)]

    def concat(self, other: "SubsystemLayout") -> "SubsystemLayout":
        clash = set(self.labels) & set(other.labels)
        if clash:
            raise LayoutConflictError(f"labels {sorted(clash)} appear in more than one factor")
        return SubsystemLayout(labels=self.labels + other.labels, dims=self.dims + other.dims)


class QuantumOperator(BaseModel):
    """Dense complex matrix over an ordered, labelled tensor layout."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    layout: SubsystemLayout
    data: np.ndarray

    @model_validator(mode="before")
    @classmethod
    def _from_wire(cls, values: Any):
        if isinstance(values, dict) and "layout" not in values and "labels" in values:
            require_keys(values, ("labels", "dims", "data"), "operator")
            layout = SubsystemLayout(labels=values["labels"], dims=values["dims"])
            side = layout.total
            values = {"layout": layout, "data": decode_complex(values["data"], (side, side))}
        return values

    @field_validator("data", mode="before")
    @classmethod
    def _freeze(cls, value: Any) -> np.ndarray:
        return frozen_array(value)

    @model_validator(mode="after")
    def _check_shape(self):
        side = self.layout.total
        if self.data.shape != (side, side):
            raise DimensionError(f"matrix shape {self.data.shape} does not match layout side {side}")
        return self

    @model_serializer
    def _to_wire(self) -> Dict[str, Any]:
        return {
            "labels": list(self.layout.labels),
            "dims": list(self.layout.dims),
            "data": encode_complex(self.data),
        }

    @classmethod
    def build(cls, labels: List[str], dims: List[int], data: Any) -> "QuantumOperator":
        return cls(layout=SubsystemLayout(labels=tuple(labels), dims=tuple(dims)), data=data)

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.layout.labels

    @property
    def dims(self) -> Tuple[int, ...]:
        return self.layout.dims

    @property
    def side(self) -> int:
        return self.layout.total


class QuantumVector(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    layout: SubsystemLayout
    vec: np.ndarray

    @model_validator(mode="before")
    @classmethod
    def _from_wire(cls, values: Any):
        if isinstance(values, dict) and "layout" not in values and "labels" in values:
            require_keys(values, ("labels", "dims", "vec"), "vector")
            layout = SubsystemLayout(labels=values["labels"], dims=values["dims"])
            values = {"layout": layout, "vec": decode_complex(values["vec"], (layout.total,))}
        return values

    @field_validator("vec", mode="before")
    @classmethod
    def _freeze(cls, value: Any) -> np.ndarray:
        return frozen_array(np.ravel(value))

    @model_validator(mode="after")
    def _check_length(self):
        if self.vec.shape != (self.layout.total,):
            raise DimensionError(f"vector length {self.vec.size} does not match layout side {self.layout.total}")
        return self

    @model_serializer
    def _to_wire(self) -> Dict[str, Any]:
        return {
            "labels": list(self.layout.labels),
            "dims": list(self.layout.dims),
            "vec": encode_complex(self.vec),
        }

    @classmethod
    def build(cls, labels: List[str], dims: List[int], vec: Any) -> "QuantumVector":
        return cls(layout=SubsystemLayout(labels=tuple(labels), dims=tuple(dims)), vec=vec)

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.layout.labels

    @property
    def dims(self) -> Tuple[int, ...]:
        return self.layout.dims


class SchmidtForm(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    coefficients: np.ndarray
    left_basis: np.ndarray  # rows are vectors
    right_basis: np.ndarray
    rank_tol: float = 1e-12

    @model_validator(mode="after")
    def _check(self):
        if abs(float(np.sum(self.coefficients ** 2)) - 1.0) > 1e-10:
            raise ValidationError("Schmidt coefficients are not normalized")
        return self

    @property
    def rank(self) -> int:
        return int(np.sum(self.coefficients > self.rank_tol))

    def reconstruct(self) -> np.ndarray:
        return np.einsum("i,ia,ib->ab", self.coefficients, self.left_basis, self.right_basis).ravel()
