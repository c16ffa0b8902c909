import json

import numpy as np
import pytest

import states
import strategy as strategies
from core import settings
from core.exceptions import DimensionError, LayoutConflictError, LayoutError, ValidationError
from models import (
    MatchedOneWayStrategy,
    OptimizeOptions,
    ProductStrategy,
    QuantumOperator,
    QuantumVector,
    SubsystemLayout,
    Witness,
    strategy_adapter,
)
from witness import swap_witness


def test_operator_wire_form():
    op = QuantumOperator.model_validate({"labels": ["A"], "dims": [2], "data": [[1, 0], [0, 2], [0, -2], [3, 0]]})
    assert np.array_equal(op.data, np.array([[1, 2j], [-2j, 3]]))
    assert op.model_dump() == {"labels": ["A"], "dims": [2], "data": [[1.0, 0.0], [0.0, 2.0], [0.0, -2.0], [3.0, 0.0]]}


def test_operator_data_is_frozen():
    op = QuantumOperator.build(["A"], [2], np.eye(2))
    with pytest.raises(ValueError):
        op.data[0, 0] = 5


def test_operator_shape_must_match_layout():
    with pytest.raises(DimensionError):
        QuantumOperator.build(["A", "B"], [2, 2], np.eye(3))
    with pytest.raises(ValidationError):
        QuantumOperator.model_validate({"labels": ["A"], "dims": [2], "data": [[1, 0], [0, 0]]})


def test_layout_errors():
    with pytest.raises(LayoutConflictError):
        SubsystemLayout(labels=("A", "A"), dims=(2, 2))
    with pytest.raises(LayoutError):
        SubsystemLayout(labels=("A",), dims=(2, 2))
    with pytest.raises(LayoutError):
        SubsystemLayout(labels=("A",), dims=(0,))
    with pytest.raises(DimensionError):
        SubsystemLayout(labels=("A", "B", "C"), dims=(20, 20, 20))


def test_vector_wire_form():
    vec = QuantumVector.model_validate({"labels": ["A"], "dims": [2], "vec": [[0.6, 0], [0, 0.8]]})
    assert np.allclose(vec.vec, [0.6, 0.8j])


def test_witness_wire_form_round_trip():
    W = swap_witness(2)
    restored = Witness.model_validate(json.loads(W.model_dump_json()))
    assert restored.D == 2
    assert np.array_equal(restored.op.data, W.op.data)
    assert np.array_equal(restored.source_vector.vec, W.source_vector.vec)


def test_witness_validation():
    with pytest.raises(ValidationError):
        Witness(op=QuantumOperator.build(["A0", "B0"], [2, 2], np.eye(4)), D=2)
    with pytest.raises(ValidationError):
        Witness(op=QuantumOperator.build(["A", "B"], [2, 2], -np.eye(4) / 2), D=2)
    with pytest.raises(ValidationError):
        Witness(op=QuantumOperator.build(["A0", "B0"], [2, 2], -np.eye(4) / 2), D=2, kind="decomposable")


def test_strategy_union_dispatches_on_variant():
    matched = strategies.bell_matched(strategies.IDENTITY_PAIRING)
    restored = strategy_adapter.validate_python(json.loads(matched.model_dump_json()))
    assert isinstance(restored, MatchedOneWayStrategy)
    assert np.allclose(strategies.realized_effect(restored).data, strategies.realized_effect(matched).data)

    product = strategies.trivial(2, 2)
    assert isinstance(strategy_adapter.validate_python(json.loads(product.model_dump_json())), ProductStrategy)


def test_options_from_settings(monkeypatch):
    monkeypatch.setattr(settings, "RESTARTS", 7)
    opts = OptimizeOptions.from_settings(seed=3, tol=None)
    assert opts.restarts == 7
    assert opts.seed == 3
    assert opts.tol == settings.TOL


def test_named_states():
    assert np.allclose(states.parse_named_state("bell:phi+").data, states.density(states.bell("phi+")).data)
    assert states.parse_named_state("maxent:3").dims == (3, 3)
    assert np.trace(states.parse_named_state("werner:0.5").data).real == pytest.approx(1.0)
    assert states.parse_named_vector("bell:2").dims == (2, 2)


@pytest.mark.parametrize("text", ["bell", "werner:x", "werner:1.5", "maxent:1", "ghz:3", "bell:chi"])
def test_bad_named_states(text):
    with pytest.raises(ValidationError):
        states.parse_named_state(text)


def test_named_states_beyond_the_slot_cap():
    with pytest.raises(DimensionError):
        states.parse_named_state("maxent:9")
    with pytest.raises(DimensionError):
        states.maximally_entangled((2, 40))
