"""Acceptance criteria, one test each.  Every test prints a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import subprocess
import sys

import pytest

from defensibility import (
    PropositionId,
    ThreatModel,
    average_defensibility,
    build_system,
    check_geometric_threshold,
    check_proposition,
    defensibility,
    geometric_threshold_p9,
    geometric_threshold_p10,
    load_builtin,
    randomized_property_suite,
    reflexive_defense,
    residual_value,
    skewness,
)

OPT = ThreatModel.optimal()
RND = ThreatModel.uniform_random()
DIFF = ThreatModel.different_value()


@pytest.fixture
def verdict(capsys):
    def report(criterion, checks):
        failed = [name for name, ok in checks if not ok]
        line = f"[{'PASS' if not failed else 'FAIL'}] {criterion}"
        if failed:
            line += "  failed: " + "; ".join(failed)
        with capsys.disabled():
            print("\n" + line)
        assert not failed, line

    return report


def _avg(system, threat, a):
    return average_defensibility(system, threat, a, 1, 10)


def test_ac01_worked_example(verdict):
    pl = load_builtin("property_losses")
    v0 = residual_value(pl, OPT, 1, reflexive_defense(pl, 0))
    v1 = residual_value(pl, OPT, 1, reflexive_defense(pl, 1))
    verdict("AC1 worked example V(1,0)=306 (42.6%), V(1,1)=604 (84.0%)", [
        (f"V(1,0)={v0}", v0 == 306),
        (f"V(1,0)/U={v0 / 719:.4f}", round(100 * v0 / 719, 1) == 42.6),
        (f"V(1,1)={v1}", v1 == 604),
        (f"V(1,1)/U={v1 / 719:.4f}", round(100 * v1 / 719, 1) == 84.0),
    ])


def test_ac02_average_optimal(verdict):
    pl, ad = load_builtin("property_losses"), load_builtin("air_departures")
    cases = [
        ("PL a=1", _avg(pl, OPT, 1), 0.532, 0.005),
        ("PL a=4", _avg(pl, OPT, 4), 0.76, 0.01),
        ("PL a=10", _avg(pl, OPT, 10), 0.88, 0.01),
        ("AD a=1", _avg(ad, OPT, 1), 0.11, 0.01),
    ]
    verdict("AC2 average defensibility, optimal attacker",
            [(f"{n}={x:.4f} vs {t}±{tol}", abs(x - t) <= tol) for n, x, t, tol in cases])


def test_ac03_average_random(verdict):
    pl = load_builtin("property_losses")
    a1, a10 = _avg(pl, RND, 1), _avg(pl, RND, 10)
    verdict("AC3 average defensibility, uniform random attacker", [
        (f"PL a=1 {a1:.4f} < 0.09", a1 < 0.09),
        (f"PL a=10 {a10:.4f} vs 0.88±0.01", abs(a10 - 0.88) <= 0.01),
    ])


def test_ac04_mismatch(verdict):
    ad = load_builtin("air_departures", attacker_values="population")
    frac = [residual_value(ad, DIFF, 1, reflexive_defense(ad, b)) / ad.total_value for b in (0, 1, 2)]
    gain = defensibility(ad, DIFF, 1, 1)
    avg = _avg(ad, DIFF, 1)
    verdict("AC4 mismatched valuations (population-targeting attacker)", [
        (f"b=0 {frac[0]:.4f}", round(frac[0], 3) == 0.872),
        (f"b=1 {frac[1]:.4f}", round(frac[1], 3) == 0.872),
        (f"D(1,1)={gain}", gain == 0),
        (f"b=2 {frac[2]:.4f}", round(frac[2], 3) == 0.915),
        (f"avg {avg:.4f} vs 0.05±0.01", abs(avg - 0.05) <= 0.01),
    ])


def test_ac05_negative_skew(verdict):
    ns = load_builtin("negative_skew")
    o, r = _avg(ns, OPT, 1), _avg(ns, RND, 1)
    verdict("AC5 negative skew averages", [
        (f"optimal {o:.4f} vs 0.025±0.003", abs(o - 0.025) <= 0.003),
        (f"random {r:.4f} vs 0.059±0.003", abs(r - 0.059) <= 0.003),
    ])


def test_ac06_skewness(verdict):
    cases = [("property_losses", 2.8), ("air_departures", 2.4), ("negative_skew", -1.4)]
    checks = []
    for name, target in cases:
        g = skewness(load_builtin(name).values)
        checks.append((f"{name} {g:.4f} vs {target}±0.05", abs(g - target) <= 0.05))
    verdict("AC6 skewness of built-in datasets", checks)


def test_ac07_prop9_examples(verdict):
    concave = build_system([("v1", 9.0), ("v2", 8.5), ("v3", 6.0)])
    convex = build_system([("v1", 9.0), ("v2", 3.0), ("v3", 2.0)])
    d = {
        "concave D_R": (defensibility(concave, RND, 2, 1), 6 / 23.5),
        "concave D*": (defensibility(concave, OPT, 2, 1), 3 / 23.5),
        "convex D_R": (defensibility(convex, RND, 2, 1), 6 / 14),
        "convex D*": (defensibility(convex, OPT, 2, 1), 7 / 14),
    }
    checks = [(f"{k}={x!r} vs {y!r}", abs(x - y) <= 1e-12) for k, (x, y) in d.items()]
    checks.append(("concave D_R > D*", d["concave D_R"][0] > d["concave D*"][0]))
    checks.append(("convex D* > D_R", d["convex D*"][0] > d["convex D_R"][0]))
    verdict("AC7 optimal-vs-random numeric examples", checks)


def test_ac08_geometric_thresholds(verdict):
    t9, t10 = geometric_threshold_p9(2, 0.5), geometric_threshold_p10(2, 0.9)
    r9 = check_geometric_threshold(PropositionId.GEO9, 2, 0.5, extra=10)
    r10 = check_geometric_threshold(PropositionId.GEO10, 2, 0.9, extra=10)
    verdict("AC8 geometric-series thresholds", [
        (f"p9(2,0.5)={t9}", t9 == 3),
        (f"p10(2,0.9)={t10}", t10 == 13),
        (f"GEO9 cross-check n=2..{t9 + 10}: {r9.witness}", r9.holds),
        (f"GEO10 cross-check n=2..{t10 + 10}: {r10.witness}", r10.holds),
    ])


@pytest.fixture(scope="module")
def random_results():
    return randomized_property_suite(seed=0, instance_count=100, n_max=8)


def test_ac09_oracle_equivalence(verdict, random_results):
    by = lambda p: [r for r in random_results if r.proposition_id is p]  # noqa: E731
    p1, p6, p3 = by(PropositionId.P1), by(PropositionId.P6), by(PropositionId.P3)
    n_max = max(int(r.instance_descriptor.split("n=")[1].rstrip(")")) for r in p1)
    verdict("AC9 reflexive defense vs exhaustive oracle (Props 1, 6) and Prop 3", [
        (f"instances={len(p1)}", len(p1) >= 100 and n_max <= 8),
        (f"P1 counterexamples={sum(r.counterexample for r in p1)}", not any(r.counterexample for r in p1)),
        (f"P6 counterexamples={sum(r.counterexample for r in p6)}", not any(r.counterexample for r in p6)),
        (f"P3 failures={sum(not r.holds for r in p3)}", len(p3) >= 100 and all(r.holds for r in p3)),
    ])


def test_ac10_monotonicity_and_characterizations(verdict, random_results):
    monotone = (PropositionId.P2, PropositionId.P4, PropositionId.P5, PropositionId.P7, PropositionId.P8)
    char = (PropositionId.P9, PropositionId.P10)
    results = [r for r in random_results if r.proposition_id in monotone + char]
    for name in ("property_losses", "air_departures", "negative_skew"):
        system = load_builtin(name)
        grid = range(system.n + 1)
        results += [check_proposition(p, system, grid, grid) for p in monotone + char]
    checks = []
    for p in monotone:
        bad = [r for r in results if r.proposition_id is p and not r.holds]
        checks.append((f"{p.value} failures={len(bad)}", not bad))
    for p in char:
        rs = [r for r in results if r.proposition_id is p]
        agree = sum(r.agreement is True for r in rs)
        checks.append((f"{p.value} agreement {agree}/{len(rs)}", agree == len(rs) and rs))
    verdict("AC10 monotonicity / sensitivity suites", checks)


def _cli(*argv):
    proc = subprocess.run([sys.executable, "-m", "defensibility", *argv], capture_output=True, check=False)
    return proc.returncode, proc.stdout


def test_ac11_determinism(verdict):
    curve = ("curve", "--dataset", "property_losses", "--threat", "optimal", "--a", "1,2,4,10", "--b", "0..10")
    verify = ("verify", "--seed", "0", "--instances", "100")
    c1, c2 = _cli(*curve), _cli(*curve)
    v1, v2 = _cli(*verify), _cli(*verify)
    verdict("AC11 byte-identical curve and verify output", [
        ("curve exit 0", c1[0] == 0 and c2[0] == 0),
        ("curve identical", c1[1] == c2[1] and len(c1[1]) > 0),
        ("verify exit 0", v1[0] == 0 and v2[0] == 0),
        ("verify identical", v1[1] == v2[1] and len(v1[1]) > 0),
    ])
