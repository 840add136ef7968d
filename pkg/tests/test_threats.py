import pytest
from hypothesis import given, strategies as st

from defensibility import (
    DefenseAllocation,
    ThreatError,
    ThreatModel,
    attack_outcome,
    build_system,
    optimal_attack,
    reflexive_defense,
    survival,
    uniform_random_probabilities,
)


def _fraction_left(system, outcome):
    return sum(v * s for v, s in zip(system.values, outcome.survival_probabilities)) / system.total_value


def test_no_defense_hits_new_york(property_losses):
    out = optimal_attack(property_losses, None, 1)
    assert out.attacked_set == {"New York"}
    assert _fraction_left(property_losses, out) == pytest.approx(306 / 719)
    assert round(100 * 306 / 719, 1) == 42.6


def test_defending_new_york_deflects_to_chicago(property_losses):
    out = optimal_attack(property_losses, DefenseAllocation({"New York"}), 1)
    assert out.attacked_set == {"Chicago"}
    assert _fraction_left(property_losses, out) * 719 == pytest.approx(604)


def test_population_attacker_after_ord_defended(air_population):
    out = optimal_attack(air_population, DefenseAllocation({"ORD"}), 1, targeting="attacker")
    assert out.attacked_set == {"LAX"}
    assert round(100 * _fraction_left(air_population, out), 1) == 87.2


def test_attacker_targeting_needs_values(property_losses):
    with pytest.raises(ThreatError):
        optimal_attack(property_losses, None, 1, targeting="attacker")
    with pytest.raises(ThreatError):
        attack_outcome(property_losses, ThreatModel.different_value(), 1)


def test_attack_exceeding_undefended_hits_all(property_losses):
    defense = reflexive_defense(property_losses, 8)
    out = optimal_attack(property_losses, defense, 5)
    assert out.attacked_set == {"Newark", "Seattle"}


def test_tie_goes_to_higher_defender_value():
    s = build_system([("A", 1, 7), ("B", 9, 7), ("C", 5, 1)])
    assert optimal_attack(s, None, 1, "attacker").attacked_set == {"B"}
    s2 = build_system([("A", 3), ("B", 3)])
    assert optimal_attack(s2, None, 1).attacked_set == {"A"}


@pytest.mark.parametrize("a, expected", [(1, 0.1), (0, 0.0), (10, 1.0)])
def test_uniform_probabilities(property_losses, a, expected):
    out = uniform_random_probabilities(property_losses, a)
    assert out.attack_probabilities == (expected,) * 10
    assert out.attacked_set is None


def test_uniform_rejects_a_above_n(property_losses):
    with pytest.raises(ThreatError):
        uniform_random_probabilities(property_losses, 11)


def test_survival_cases():
    s = build_system([("x", 1), ("y", 1)])
    d = DefenseAllocation({"x"})
    assert survival(s, [0.3, 0.3], d) == (1.0, pytest.approx(0.7))
    assert survival(s, [1.0, 1.0], d) == (1.0, 0.0)


def test_stationary_probabilities(property_losses):
    t = ThreatModel.stationary({"Chicago": 0.5, "Houston": 0.2})
    out = attack_outcome(property_losses, t, 1, DefenseAllocation({"Houston"}))
    p = dict(zip(property_losses.ids, out.attack_probabilities))
    s = dict(zip(property_losses.ids, out.survival_probabilities))
    assert p["Chicago"] == 0.5 and p["New York"] == 0.0
    assert s["Chicago"] == 0.5 and s["Houston"] == 1.0
    assert attack_outcome(property_losses, t, 0).attack_probabilities == (0.0,) * 10


def test_stationary_validation(property_losses):
    with pytest.raises(ThreatError):
        ThreatModel.stationary({"Chicago": 1.5})
    with pytest.raises(ThreatError):
        attack_outcome(property_losses, ThreatModel.stationary({"Atlantis": 0.1}), 1)
    with pytest.raises(ThreatError):
        ThreatModel.parse("bogus")


systems = st.lists(
    st.tuples(st.integers(0, 50), st.integers(0, 50)), min_size=1, max_size=9
).map(lambda rows: build_system([(f"a{i}", v, w) for i, (v, w) in enumerate(rows)]))


@given(systems, st.integers(0, 10), st.data())
def test_outcome_invariants(system, a, data):
    b = data.draw(st.integers(0, system.n))
    defense = reflexive_defense(system, b)
    threats = [ThreatModel.optimal(), ThreatModel.different_value()]
    if a <= system.n:
        threats.append(ThreatModel.uniform_random())
    for threat in threats:
        out = attack_outcome(system, threat, a, defense)
        for asset, p, s in zip(system.assets, out.attack_probabilities, out.survival_probabilities):
            assert 0.0 <= s <= 1.0 and s >= 1.0 - p - 1e-15
            assert s == pytest.approx((1 - p) + p * (asset.id in defense.defended_ids))
            if asset.id in defense.defended_ids:
                assert s == 1.0
        if threat.deterministic:
            assert set(out.attack_probabilities) <= {0.0, 1.0}
            assert len(out.attacked_set) == min(a, system.n - b)
        else:
            assert sum(out.attack_probabilities) == pytest.approx(a)


@given(systems, st.integers(0, 10))
def test_same_value_consistency(system, a):
    mirrored = system.with_attacker_values(list(system.values))
    assert (
        optimal_attack(mirrored, None, a, "defender").attacked_set
        == optimal_attack(mirrored, None, a, "attacker").attacked_set
    )


@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=9, unique=True), st.integers(0, 10), st.randoms())
def test_relabeling_invariance(values, a, rnd):
    s1 = build_system([(f"a{i}", v) for i, v in enumerate(values)])
    labels = [f"z{i}" for i in range(len(values))]
    rnd.shuffle(labels)
    s2 = build_system([(labels[i], v) for i, v in enumerate(values)])
    rename = dict(zip([f"a{i}" for i in range(len(values))], labels))
    hit1 = {rename[x] for x in optimal_attack(s1, None, a).attacked_set}
    assert hit1 == optimal_attack(s2, None, a).attacked_set
