from itertools import combinations
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from defensibility import (
    DefenseAllocation,
    DefenseError,
    OracleCapExceeded,
    ThreatModel,
    build_system,
    optimal_defense_bruteforce,
    predictive_defense,
    reflexive_defense,
    residual_value,
)
from defensibility._backend import available_kernels


def minimax(values, attacker, a, b):
    """Full two-stage enumeration: every defense, then every attack set.

    The attacker maximizes its own value of the struck set, then the
    defender's loss; the defender keeps the best residual.
    """
    n = len(values)
    best = None
    for defended in combinations(range(n), b):
        open_ = [i for i in range(n) if i not in defended]
        k = min(a, len(open_))
        worst = max(
            (sum(attacker[i] for i in hit), sum(values[i] for i in hit))
            for hit in combinations(open_, k)
        )
        residual = sum(values) - worst[1]
        if best is None or residual > best:
            best = residual
    return best


def expected_random(values, a, b):
    n = len(values)
    return max(
        sum(values[i] if i in d else values[i] * (1 - a / n) for i in range(n))
        for d in combinations(range(n), b)
    )


def test_reflexive_examples(property_losses, air_departures):
    assert reflexive_defense(property_losses, 1).defended_ids == {"New York"}
    assert reflexive_defense(property_losses, 0).defended_ids == frozenset()
    assert reflexive_defense(air_departures, 2).defended_ids == {"ORD", "LAX"}


def test_reflexive_skips_pre_defended(property_losses):
    d = reflexive_defense(property_losses, 2, {"New York"})
    assert d.defended_ids == {"Chicago", "San Francisco"}
    assert d.pre_defended_ids == {"New York"}


def test_budget_errors(property_losses):
    with pytest.raises(DefenseError):
        reflexive_defense(property_losses, 11)
    with pytest.raises(DefenseError):
        reflexive_defense(property_losses, 10, {"Chicago"})
    with pytest.raises(DefenseError):
        reflexive_defense(property_losses, 1, {"Atlantis"})
    with pytest.raises(DefenseError):
        DefenseAllocation({"x"}, {"x"})


def test_predictive_examples(air_population, property_losses):
    assert predictive_defense(air_population, ThreatModel.different_value(), 1, 1).defended_ids == {"LAX"}
    assert predictive_defense(air_population, ThreatModel.different_value(), 1, 3).defended_ids == {
        "LAX", "LGA", "ORD"}
    assert predictive_defense(property_losses, ThreatModel.uniform_random(), 3, 2) == reflexive_defense(
        property_losses, 2)
    assert predictive_defense(property_losses, ThreatModel.optimal(), 2, 2) == reflexive_defense(
        property_losses, 2)


def test_predictive_stationary(property_losses):
    t = ThreatModel.stationary({"Houston": 0.9, "Seattle": 0.9, "Boston": 0.1})
    assert predictive_defense(property_losses, t, 1, 2).defended_ids == {"Houston", "Seattle"}
    assert predictive_defense(property_losses, t, 1, 3).defended_ids == {"Houston", "Seattle", "Boston"}


def test_oracle_property_losses(property_losses, optimal):
    defense, value = optimal_defense_bruteforce(property_losses, optimal, 1, 1)
    assert defense.defended_ids == {"New York"}
    assert value == pytest.approx(604)
    assert value == pytest.approx(minimax(property_losses.values, property_losses.values, 1, 1))


def test_oracle_mismatch_counterexample(different):
    s = build_system([("hi", 10, 1), ("mid", 5, 10), ("lo", 1, 5)])
    defense, value = optimal_defense_bruteforce(s, different, 1, 1)
    assert defense.defended_ids == {"mid"}
    assert value == 15
    assert residual_value(s, different, 1, reflexive_defense(s, 1)) == 11


def test_oracle_uniform_random(random_threat):
    s = build_system([("p", 9), ("q", 8.5), ("r", 6)])
    defense, value = optimal_defense_bruteforce(s, random_threat, 2, 1)
    assert defense.defended_ids == {"p"}
    assert value == pytest.approx(expected_random(s.values, 2, 1))


def test_oracle_tie_break_smallest_ids(optimal):
    s = build_system([("c", 5), ("a", 5), ("b", 5)])
    defense, value = optimal_defense_bruteforce(s, optimal, 1, 1)
    assert defense.defended_ids == {"a"} and value == 10
    defense, _ = optimal_defense_bruteforce(s, optimal, 1, 2)
    assert defense.defended_ids == {"a", "b"}


def test_oracle_cap(optimal):
    big = build_system([(f"x{i}", i + 1) for i in range(21)])
    with pytest.raises(OracleCapExceeded):
        optimal_defense_bruteforce(big, optimal, 1, 1)
    _, v = optimal_defense_bruteforce(big, optimal, 1, 1, max_n=21)
    assert v == sum(range(1, 22)) - 20


def test_oracle_pre_defended(property_losses, optimal):
    defense, value = optimal_defense_bruteforce(property_losses, optimal, 1, 1, {"New York"})
    assert defense.defended_ids == {"Chicago"}
    assert defense.pre_defended_ids == {"New York"}
    assert value == pytest.approx(719 - 57)


small_rows = st.lists(st.tuples(st.integers(1, 40), st.integers(1, 40)), min_size=1, max_size=7)


@settings(max_examples=150, deadline=None)
@given(small_rows, st.data())
def test_oracle_matches_minimax(rows, data):
    s = build_system([(f"a{i}", v, w) for i, (v, w) in enumerate(rows)])
    a = data.draw(st.integers(0, s.n + 1))
    b = data.draw(st.integers(0, s.n))
    for threat, w in ((ThreatModel.optimal(), s.values), (ThreatModel.different_value(), s.attacker_values)):
        _, value = optimal_defense_bruteforce(s, threat, a, b)
        assert value == pytest.approx(minimax(s.values, w, a, b), abs=1e-9)
    if a <= s.n:
        _, value = optimal_defense_bruteforce(s, ThreatModel.uniform_random(), a, b)
        assert value == pytest.approx(expected_random(s.values, a, b), abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(small_rows, st.data())
def test_oracle_monotone_in_b(rows, data):
    s = build_system([(f"a{i}", v, w) for i, (v, w) in enumerate(rows)])
    a = data.draw(st.integers(0, s.n))
    for threat in (ThreatModel.optimal(), ThreatModel.different_value(), ThreatModel.uniform_random()):
        values = [optimal_defense_bruteforce(s, threat, a, b)[1] for b in range(s.n + 1)]
        assert all(x <= y + 1e-9 for x, y in zip(values, values[1:]))


@settings(max_examples=100, deadline=None)
@given(small_rows, st.data())
def test_oracle_beats_reflexive_on_mismatch(rows, data):
    s = build_system([(f"a{i}", v, w) for i, (v, w) in enumerate(rows)])
    a = data.draw(st.integers(0, s.n))
    b = data.draw(st.integers(0, s.n))
    t = ThreatModel.different_value()
    _, best = optimal_defense_bruteforce(s, t, a, b)
    assert best >= residual_value(s, t, a, reflexive_defense(s, b)) - 1e-9


@pytest.mark.skipif("compiled" not in available_kernels(), reason="compiled kernel not built")
@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0, 100), min_size=1, max_size=10), st.data())
def test_kernels_agree(values, data):
    kernels = available_kernels()
    n = len(values)
    b = data.draw(st.integers(0, n))
    a = data.draw(st.integers(0, n + 1))
    deterministic = data.draw(st.booleans())
    order = data.draw(st.permutations(range(n)))
    probs = data.draw(st.lists(st.floats(0, 1), min_size=n, max_size=n))
    pre = data.draw(st.lists(st.booleans(), min_size=n, max_size=n))
    cand = [i for i in range(n) if not pre[i]]
    order = [i for i in order if not pre[i]]
    if b > len(cand):
        b = len(cand)
    args = (values, cand, b, deterministic, order, a, probs, pre, 1e-9)
    py = kernels["python"].best_subset(*args)
    c = kernels["compiled"].best_subset(*args)
    assert list(py[0]) == list(c[0])
    assert py[1] == c[1]  # identical summation order gives bit-identical values
    assert py[2] == c[2] == comb(len(cand), b)
