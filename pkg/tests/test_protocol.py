import io
import json

import numpy as np
import pytest

import game
import protocol
import states
import strategy as strategies
from core.exceptions import ValidationError
from models import EstimateReport


@pytest.fixture
def de_game(w_de):
    return game.from_witness(w_de)


@pytest.fixture
def identity_pairing():
    return strategies.bell_matched(strategies.IDENTITY_PAIRING)


def test_reject_all_never_pays(de_game, phi_plus):
    report = protocol.run(de_game, phi_plus, strategies.trivial(2, 2), shots=500, seed=1)
    assert report.mean == 0.0
    assert report.stderr == 0.0
    assert report.clamped == 0


def test_bell_strategy_estimate_is_close(de_game, phi_plus, identity_pairing):
    report = protocol.run(de_game, phi_plus, identity_pairing, shots=20_000, seed=7)
    assert report.shots == 20_000
    assert abs(report.mean - 1.0) <= 5 * report.stderr
    assert report.stderr > 0


def test_counts_cover_every_shot(de_game, phi_plus, identity_pairing):
    report = protocol.run(de_game, phi_plus, identity_pairing, shots=3_000, seed=2)
    assert sum(n for n, _ in report.per_question_counts.values()) == 3_000
    assert all(0 <= wins <= n for n, wins in report.per_question_counts.values())
    assert all(0 <= i < len(de_game.ensemble) for i in report.per_question_counts)


def test_results_do_not_depend_on_worker_count(de_game, phi_plus, identity_pairing):
    serial = protocol.run(de_game, phi_plus, identity_pairing, shots=4_000, seed=3, partitions=4, workers=1)
    threaded = protocol.run(de_game, phi_plus, identity_pairing, shots=4_000, seed=3, partitions=4, workers=4)
    assert serial == threaded


def test_same_seed_same_estimate(de_game, phi_plus, identity_pairing):
    first = protocol.run(de_game, phi_plus, identity_pairing, shots=1_000, seed=11)
    second = protocol.run(de_game, phi_plus, identity_pairing, shots=1_000, seed=11)
    other = protocol.run(de_game, phi_plus, identity_pairing, shots=1_000, seed=12)
    assert first == second
    assert first.per_question_counts != other.per_question_counts


def test_single_shot_has_no_error_bar(de_game, phi_plus, identity_pairing):
    report = protocol.run(de_game, phi_plus, identity_pairing, shots=1)
    assert report.stderr == 0.0


def test_invalid_shot_counts(de_game, phi_plus, identity_pairing):
    with pytest.raises(ValidationError):
        protocol.run(de_game, phi_plus, identity_pairing, shots=0)
    with pytest.raises(ValidationError):
        protocol.run(de_game, phi_plus, identity_pairing, shots=10, partitions=11)
    with pytest.raises(ValidationError):
        protocol.run(de_game, phi_plus, identity_pairing, shots=10, partitions=0)


def test_transcript_lines(de_game, phi_plus, identity_pairing):
    sink = io.StringIO()
    report = protocol.run(de_game, phi_plus, identity_pairing, shots=50, seed=5, transcript=sink)
    lines = [json.loads(line) for line in sink.getvalue().splitlines()]
    assert len(lines) == 50
    assert all(line["x"] == line["y"] and line["x"] in (0, 1) for line in lines)
    assert sum(line["x"] for line in lines) == sum(w for _, w in report.per_question_counts.values())


def test_confidence_intervals():
    report = EstimateReport(mean=0.4, stderr=0.01, shots=100, per_question_counts={0: (100, 40)}, seed=0)
    assert protocol.estimate_ci(report, 0.0) == (0.4, 0.4)
    low1, high1 = protocol.estimate_ci(report, 1.0)
    low2, high2 = protocol.estimate_ci(report, 2.0)
    assert low2 <= low1 <= high1 <= high2
    assert high2 - low2 == pytest.approx(0.04)
    with pytest.raises(ValidationError):
        protocol.estimate_ci(report, -1.0)


@pytest.mark.parametrize("shots, seeds", [(20_000, 10), pytest.param(1_000_000, 100, marks=pytest.mark.slow)])
def test_bell_estimates_cover_the_exact_value(de_game, phi_plus, identity_pairing, shots, seeds):
    exact = game.average_reward(de_game, phi_plus, identity_pairing)
    covered = 0
    for seed in range(seeds):
        report = protocol.run(de_game, phi_plus, identity_pairing, shots=shots, seed=seed)
        low, high = protocol.estimate_ci(report, 5.0)
        covered += low <= exact <= high
    assert covered >= seeds - max(1, seeds // 100)


def test_standard_error_shrinks_with_shots(de_game, phi_plus, identity_pairing):
    small = protocol.run(de_game, phi_plus, identity_pairing, shots=10_000, seed=1)
    large = protocol.run(de_game, phi_plus, identity_pairing, shots=1_000_000, seed=2)
    assert 8.0 <= small.stderr / large.stderr <= 12.5
    assert np.isfinite(large.mean)


@pytest.mark.parametrize("seeds", [20, pytest.param(200, marks=pytest.mark.slow)])
def test_estimates_are_unbiased(de_game, identity_pairing, seeds):
    rho = states.werner(0.8)
    exact = game.average_reward(de_game, rho, identity_pairing)
    reports = [protocol.run(de_game, rho, identity_pairing, shots=10_000, seed=seed) for seed in range(seeds)]
    grand_mean = np.mean([r.mean for r in reports])
    pooled = np.sqrt(np.sum([r.stderr ** 2 for r in reports])) / seeds
    assert abs(grand_mean - exact) < 4 * pooled
