"""Smoke tests for the pybind11 module against the C++ core."""

import math

import pytest

import syrup


def test_brier_score():
    assert syrup.brier_score(1.0, 1) == 0.0
    assert syrup.brier_score(0.7, 1) == pytest.approx(0.09)


def test_brier_skill_score_perfect_and_base_rate():
    assert syrup.brier_skill_score([1.0, 0.0, 1.0], [1, 0, 1]) == pytest.approx(1.0)
    assert syrup.brier_skill_score([0.5, 0.5, 0.5, 0.5], [1, 0, 1, 0]) == pytest.approx(0.0)


def test_fit_platt_recovers_direction():
    import random

    rng = random.Random(7)
    z, y = [], []
    for _ in range(4000):
        zi = rng.uniform(-3, 3)
        p = 1.0 / (1.0 + math.exp(-(2.0 * zi + 1.0)))
        z.append(zi)
        y.append(1 if rng.random() < p else 0)
    fit = syrup.fit_platt(z, y, 0.0)
    assert fit["converged"]
    assert fit["alpha"] == pytest.approx(2.0, abs=0.25)
    assert fit["beta"] == pytest.approx(1.0, abs=0.25)

    p_hat = syrup.predict(fit, 0.0, 0)
    assert 0.0 < p_hat < 1.0


def test_fit_syrup_reference_cell():
    z = [-0.5, -1.5, -0.4, -1.2, -0.6, -1.1, -0.3, -1.4]
    cat = [0, 0, 1, 1, 2, 2, 3, 3]
    y = [1, 0, 1, 0, 1, 0, 1, 0]
    fit = syrup.fit_syrup(z, cat, y, 1e-4)
    assert fit["kind"] == "syrup"
    assert fit["gamma1"][0] == 0.0
    assert fit["gamma2"][0] == 0.0


def test_degenerate_labels_raise():
    with pytest.raises(ValueError):
        syrup.fit_platt([0.1, 0.2, 0.3], [1, 1, 1], 0.0)


def test_parse_answer():
    answer, dnc = syrup.parse_answer(
        "<ANSWER> (A) </ANSWER> <CONFIDENCE> 7 </CONFIDENCE>", "qa", True
    )
    assert answer == "(A)"
    assert dnc == 7

    answer, dnc = syrup.parse_answer("ANSWER = 7", "forecast", True)
    assert answer == "yes"
    assert dnc == 7

    with pytest.raises(ValueError):
        syrup.parse_answer("I cannot answer", "qa", True)


def test_derivatives():
    assert syrup.compute_itp([-0.1, -0.2, -0.3]) == pytest.approx(-0.6)
    assert syrup.dnc_to_derivative(7, "(A)", "qa") == pytest.approx(math.log(0.7))
    assert syrup.dnc_to_derivative(2, "no", "forecast") == pytest.approx(math.log(0.8))


def test_behavior_and_suggestion():
    assert syrup.encode_behavior(None) == (0, [1, 0, 0, 0])
    assert syrup.encode_behavior("low") == (2, [0, 0, 1, 0])
    assert syrup.render_suggestion("B", "high") == (
        "I think the answer is B, but I'm curious to hear your thoughts. "
        "I am about 80% sure I am correct."
    )


def test_aggregate_and_expected_bias():
    mean, std = syrup.aggregate_splits([0.0, 2.0])
    assert mean == pytest.approx(1.0)
    assert std == pytest.approx(1.0)
    assert syrup.expected_acc_bias(0.6, 0.5, 0.0) == pytest.approx(0.30)
