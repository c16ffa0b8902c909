from typing import Annotated, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, TypeAdapter, model_validator

from core.config import COMPLETENESS_TOL
from core.exceptions import EffectValidityError, LayoutError, ValidationError
from .base import check_contraction, check_effect
from .operator import QuantumOperator


ALICE_LABELS = frozenset({"A", "A0"})
BOB_LABELS = frozenset({"B0", "B"})


def _check_side(op: QuantumOperator, expected: frozenset, name: str) -> None:
    if frozenset(op.labels) != expected:
        raise LayoutError(f"{name} must act on {sorted(expected)}, got {list(op.labels)}")


class _StrategyBase(BaseModel):
    model_config = ConfigDict(frozen=True)

    # canonical Z11, filled on first realization
    _effect: Optional[QuantumOperator] = PrivateAttr(default=None)


class ProductStrategy(_StrategyBase):
    variant: Literal["product"] = "product"
    P: QuantumOperator
    Q: QuantumOperator

    @model_validator(mode="after")
    def _check(self):
        _check_side(self.P, ALICE_LABELS, "P")
        _check_side(self.Q, BOB_LABELS, "Q")
        check_effect(self.P.data, "P")
        check_effect(self.Q.data, "Q")
        return self


class MatchedOneWayStrategy(_StrategyBase):
    variant: Literal["matched_one_way"] = "matched_one_way"
    alice_povm: List[QuantumOperator]
    bob_conditional: List[QuantumOperator]

    @model_validator(mode="after")
    def _check(self):
        if not self.alice_povm or len(self.alice_povm) != len(self.bob_conditional):
            raise ValidationError("Alice's POVM and Bob's conditionals must be non-empty and of equal length")
        first = self.alice_povm[0]
        for u, (P, Q) in enumerate(zip(self.alice_povm, self.bob_conditional)):
            _check_side(P, ALICE_LABELS, f"alice_povm[{u}]")
            _check_side(Q, BOB_LABELS, f"bob_conditional[{u}]")
            if P.labels != first.labels or P.dims != first.dims:
                raise LayoutError("Alice's POVM elements must share one layout")
            check_effect(P.data, f"alice_povm[{u}]")
            check_effect(Q.data, f"bob_conditional[{u}]")
        total = sum(P.data for P in self.alice_povm)
        if np.max(np.abs(total - np.eye(first.side))) > COMPLETENESS_TOL:
            raise EffectValidityError("Alice's POVM does not sum to the identity")
        return self


class FilteredStrategy(_StrategyBase):
    variant: Literal["filtered"] = "filtered"
    filter_a0: QuantumOperator
    filter_b0: QuantumOperator
    inner: "Strategy"

    @model_validator(mode="after")
    def _check(self):
        if self.filter_a0.labels != ("A0",) or self.filter_b0.labels != ("B0",):
            raise LayoutError("filters act on the single slots A0 and B0")
        check_contraction(self.filter_a0.data, "filter_a0")
        check_contraction(self.filter_b0.data, "filter_b0")
        return self


Strategy = Annotated[
    Union[ProductStrategy, MatchedOneWayStrategy, FilteredStrategy],
    Field(discriminator="variant"),
]
FilteredStrategy.model_rebuild()

strategy_adapter = TypeAdapter(Strategy)


class FilterResult(BaseModel):
    """K on the first slot, a unitary on the second; (K x U)|psi> = sqrt(q)|phi>."""

    model_config = ConfigDict(frozen=True)

    filter: QuantumOperator
    local_unitary: QuantumOperator
    q: float
