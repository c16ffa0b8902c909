from typing import List

from pydantic import BaseModel, ConfigDict, model_validator

from core.exceptions import ValidationError
from .witness import QuestionEnsemble, Witness


class Game(BaseModel):
    """Witnessing game: only the answer pair (1, 1) is rewarded, with reward11[i] = beta_i / p_i."""

    model_config = ConfigDict(frozen=True)

    witness: Witness
    ensemble: QuestionEnsemble
    reward11: List[float]

    @model_validator(mode="after")
    def _check(self):
        if len(self.reward11) != len(self.ensemble.items):
            raise ValidationError("reward table and ensemble differ in length")
        for i, (reward, item) in enumerate(zip(self.reward11, self.ensemble.items)):
            if abs(reward * item.p - item.beta) > 1e-12 * max(1.0, abs(item.beta)):
                raise ValidationError(f"reward11[{i}] * p does not reproduce beta")
        return self
