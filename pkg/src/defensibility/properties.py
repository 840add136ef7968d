"""Executable checks of the structural results for discrete-asset systems.

Each check evaluates residual value and defensibility by simulating the
attack (``evaluation``) and compares against either the exhaustive defense
search or the closed forms in ``formulas``.  Checks never raise on a failed
inequality; they return a :class:`PropositionCheckResult` with a witness.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional, Sequence

import numpy as np

from . import formulas
from .assets import AssetSystem, build_system, value_at_rank
from .defense import DEFAULT_ORACLE_MAX_N, OracleCapExceeded, optimal_defense_bruteforce, reflexive_defense
from .evaluation import residual_value
from .threats import ThreatModel

ABS_TOL = 1e-12
REL_TOL = 1e-9


class PropositionId(enum.Enum):
    P1 = "P1"  # reflexive defense optimal vs same-value optimal attacker
    P2 = "P2"  # residual value monotone, optimal attacker
    P3 = "P3"  # mismatched attacker values never hurt an optimizing defender
    P4 = "P4"  # defensibility monotone, optimal attacker
    P5 = "P5"  # sensitivity to b versus a
    P6 = "P6"  # reflexive defense optimal vs uniform random attacker
    P7 = "P7"  # residual value monotone, random attacker
    P8 = "P8"  # defensibility monotone, random attacker
    P9 = "P9"  # optimal-attack defensibility >= random-attack defensibility
    P10 = "P10"  # attack-effort sensitivity, optimal vs random
    GEO9 = "GEO9"  # geometric-value threshold for P9
    GEO10 = "GEO10"  # geometric-value threshold for P10

    @property
    def uses_oracle(self) -> bool:
        return self in (PropositionId.P1, PropositionId.P3, PropositionId.P6)

    @property
    def is_characterization(self) -> bool:
        """P9/P10 are iff-statements: a False ``holds`` is not a bug."""
        return self in (PropositionId.P9, PropositionId.P10)


@dataclass(frozen=True)
class PropositionCheckResult:
    proposition_id: PropositionId
    instance_descriptor: str
    holds: bool
    witness: Optional[dict] = None
    cells_checked: int = 0
    # P9/P10 only: the direct comparison agreed with the closed-form condition on every cell
    agreement: Optional[bool] = None

    def __post_init__(self):
        if not self.holds and self.witness is None:
            raise ValueError("a failed check must carry a witness")

    @property
    def counterexample(self) -> bool:
        if self.proposition_id.is_characterization:
            return self.agreement is False
        return not self.holds

    def to_dict(self) -> dict:
        return {
            "proposition": self.proposition_id.value,
            "instance": self.instance_descriptor,
            "holds": self.holds,
            "agreement": self.agreement,
            "cells_checked": self.cells_checked,
            "counterexample": self.counterexample,
            "witness": self.witness,
        }


class _Surfaces:
    """Cached residual values of one system under reflexive defense."""

    def __init__(self, system: AssetSystem):
        self.system = system
        self.u = system.total_value
        self.optimal = ThreatModel.optimal()
        self.random = ThreatModel.uniform_random()
        self.v_opt = lru_cache(maxsize=None)(self._v_opt)
        self.v_rand = lru_cache(maxsize=None)(self._v_rand)

    def _v_opt(self, a: int, b: int) -> float:
        return residual_value(self.system, self.optimal, a, reflexive_defense(self.system, b))

    def _v_rand(self, a: int, b: int) -> float:
        return residual_value(self.system, self.random, a, reflexive_defense(self.system, b))

    def d_opt(self, a: int, b: int) -> float:
        return (self.v_opt(a, b) - self.v_opt(a, 0)) / self.u

    def d_rand(self, a: int, b: int) -> float:
        return (self.v_rand(a, b) - self.v_rand(a, 0)) / self.u

    def value_tol(self) -> float:
        return REL_TOL * max(1.0, self.u)


def _cells(system: AssetSystem, a_range: Iterable[int], b_range: Iterable[int], random: bool):
    n = system.n
    for a in a_range:
        if a < 0 or (random and a > n):
            continue
        for b in b_range:
            if 0 <= b <= n:
                yield a, b


def _describe(system: AssetSystem) -> str:
    return system.name or "values=" + ",".join(f"{v:g}" for v in system.values)


def _values_payload(system: AssetSystem) -> dict:
    out = {"values": list(system.values)}
    if system.has_attacker_values:
        out["attacker_values"] = list(system.attacker_values)
    return out


def check_proposition(
    prop_id,
    system: AssetSystem,
    a_range: Iterable[int],
    b_range: Iterable[int],
    oracle_max_n: int = DEFAULT_ORACLE_MAX_N,
) -> PropositionCheckResult:
    """Check one proposition on every valid ``(a, b)`` cell of the given ranges."""
    prop = PropositionId(prop_id) if not isinstance(prop_id, PropositionId) else prop_id
    if prop in (PropositionId.GEO9, PropositionId.GEO10):
        raise ValueError("use check_geometric_threshold for the geometric-series thresholds")
    if prop.uses_oracle and system.n > oracle_max_n:
        raise OracleCapExceeded(f"{prop.value} needs the exhaustive search; n={system.n} > {oracle_max_n}")
    a_range, b_range = list(a_range), list(b_range)
    s = _Surfaces(system)
    fn = _CHECKS[prop]
    failure, agreement, count = fn(s, a_range, b_range)
    holds = failure is None
    witness = None
    if failure is not None:
        witness = dict(failure, **_values_payload(system))
    if agreement is not None and agreement is not True:
        # agreement carries the first disagreeing cell
        disagreement = dict(agreement, **_values_payload(system))
        witness = dict(witness or {}, disagreement=disagreement)
        agreement = False
    return PropositionCheckResult(prop, _describe(system), holds, witness, count, agreement)


# Each check returns (first failing cell or None, agreement marker, cells checked).
# The agreement marker is None (not applicable), True, or the first disagreeing cell.


def _check_p1(s: _Surfaces, a_range, b_range):
    count = 0
    for a, b in _cells(s.system, a_range, b_range, random=False):
        count += 1
        reflexive = s.v_opt(a, b)
        defense, oracle = optimal_defense_bruteforce(s.system, s.optimal, a, b)
        if abs(reflexive - oracle) > s.value_tol():
            return dict(a=a, b=b, reflexive=reflexive, oracle=oracle,
                        oracle_defense=sorted(defense.defended_ids)), None, count
    return None, None, count


def _check_p6(s: _Surfaces, a_range, b_range):
    count = 0
    for a, b in _cells(s.system, a_range, b_range, random=True):
        count += 1
        reflexive = s.v_rand(a, b)
        defense, oracle = optimal_defense_bruteforce(s.system, s.random, a, b)
        if abs(reflexive - oracle) > s.value_tol():
            return dict(a=a, b=b, reflexive=reflexive, oracle=oracle,
                        oracle_defense=sorted(defense.defended_ids)), None, count
    return None, None, count


def _check_p3(s: _Surfaces, a_range, b_range):
    if not s.system.has_attacker_values:
        raise ValueError("P3 needs a system with attacker values")
    different = ThreatModel.different_value()
    count = 0
    for a, b in _cells(s.system, a_range, b_range, random=False):
        count += 1
        _, v_diff = optimal_defense_bruteforce(s.system, different, a, b)
        _, v_same = optimal_defense_bruteforce(s.system, s.optimal, a, b)
        if v_diff < v_same - s.value_tol():
            return dict(a=a, b=b, v_same=v_same, v_diff=v_diff), None, count
    return None, None, count


def _check_p2(s: _Surfaces, a_range, b_range):
    n, tol, count = s.system.n, s.value_tol(), 0
    for a, b in _cells(s.system, a_range, b_range, random=False):
        count += 1
        if s.v_opt(a + 1, b) > s.v_opt(a, b) + tol:
            return dict(a=a, b=b, lhs=s.v_opt(a + 1, b), rhs=s.v_opt(a, b),
                        inequality="V(a+1,b) <= V(a,b)"), None, count
        if b + 1 <= n and s.v_opt(a, b) > s.v_opt(a, b + 1) + tol:
            return dict(a=a, b=b, lhs=s.v_opt(a, b), rhs=s.v_opt(a, b + 1),
                        inequality="V(a,b) <= V(a,b+1)"), None, count
    return None, None, count


def _check_p4(s: _Surfaces, a_range, b_range):
    sys_, n, u, count = s.system, s.system.n, s.u, 0
    for a, b in _cells(sys_, a_range, b_range, random=False):
        count += 1
        step_a = s.d_opt(a + 1, b) - s.d_opt(a, b)
        expected = (value_at_rank(sys_, a + 1) - value_at_rank(sys_, a + b + 1)) / u
        if step_a < -ABS_TOL or abs(step_a - expected) > ABS_TOL:
            return dict(a=a, b=b, a_increment=step_a, expected=expected,
                        inequality="D(a+1,b) - D(a,b) = (v[a+1] - v[a+b+1])/U >= 0"), None, count
        if b + 1 <= n and s.d_opt(a, b + 1) < s.d_opt(a, b) - ABS_TOL:
            return dict(a=a, b=b, lhs=s.d_opt(a, b + 1), rhs=s.d_opt(a, b),
                        inequality="D(a,b+1) >= D(a,b)"), None, count
    return None, None, count


def _check_p5(s: _Surfaces, a_range, b_range):
    sys_, n, u, count = s.system, s.system.n, s.u, 0
    for a, b in _cells(sys_, a_range, b_range, random=False):
        if b + 1 > n:
            continue
        count += 1
        gap = s.d_opt(a, b + 1) - s.d_opt(a + 1, b)
        expected = (value_at_rank(sys_, b + 1) - value_at_rank(sys_, a + 1)) / u
        if abs(gap - expected) > ABS_TOL:
            return dict(a=a, b=b, gap=gap, expected=expected,
                        inequality="D(a,b+1) - D(a+1,b) = (v[b+1] - v[a+1])/U"), None, count
        if b <= a and gap < -ABS_TOL:
            return dict(a=a, b=b, gap=gap, inequality="D(a,b+1) >= D(a+1,b) when b <= a"), None, count
    return None, None, count


def _check_p7(s: _Surfaces, a_range, b_range):
    n, tol, count = s.system.n, s.value_tol(), 0
    values = s.system.values
    for a, b in _cells(s.system, a_range, b_range, random=True):
        count += 1
        v = s.v_rand(a, b)
        closed = formulas.random_residual(values, a, b)
        if abs(v - closed) > tol:
            return dict(a=a, b=b, simulated=v, closed_form=closed), None, count
        if a + 1 <= n and s.v_rand(a + 1, b) > v + tol:
            return dict(a=a, b=b, lhs=s.v_rand(a + 1, b), rhs=v, inequality="V_R(a+1,b) <= V_R(a,b)"), None, count
        if b + 1 <= n and v > s.v_rand(a, b + 1) + tol:
            return dict(a=a, b=b, lhs=v, rhs=s.v_rand(a, b + 1), inequality="V_R(a,b) <= V_R(a,b+1)"), None, count
    return None, None, count


def _check_p8(s: _Surfaces, a_range, b_range):
    n, count = s.system.n, 0
    values = s.system.values
    for a, b in _cells(s.system, a_range, b_range, random=True):
        count += 1
        d = s.d_rand(a, b)
        closed = formulas.random_defensibility(values, a, b)
        if abs(d - closed) > ABS_TOL:
            return dict(a=a, b=b, simulated=d, closed_form=closed), None, count
        if a + 1 <= n and s.d_rand(a + 1, b) < d - ABS_TOL:
            return dict(a=a, b=b, lhs=s.d_rand(a + 1, b), rhs=d, inequality="D_R(a+1,b) >= D_R(a,b)"), None, count
        if b + 1 <= n and s.d_rand(a, b + 1) < d - ABS_TOL:
            return dict(a=a, b=b, lhs=s.d_rand(a, b + 1), rhs=d, inequality="D_R(a,b+1) >= D_R(a,b)"), None, count
    return None, None, count


def _check_p9(s: _Surfaces, a_range, b_range):
    failure, disagreement, count = None, None, 0
    values, u = s.system.values, s.u
    for a, b in _cells(s.system, a_range, b_range, random=True):
        count += 1
        d_opt, d_rand = s.d_opt(a, b), s.d_rand(a, b)
        direct = d_opt >= d_rand - ABS_TOL
        lhs, rhs = formulas.optimal_vs_random_margin(values, a, b)
        condition = lhs / u >= rhs / u - ABS_TOL
        cell = dict(a=a, b=b, d_optimal=d_opt, d_random=d_rand, condition_lhs=lhs, condition_rhs=rhs)
        if not direct and failure is None:
            failure = dict(cell, inequality="D*(a,b) >= D_R(a,b)")
        if direct != condition and disagreement is None:
            disagreement = cell
    return failure, disagreement or True, count


def _check_p10(s: _Surfaces, a_range, b_range):
    failure, disagreement, count = None, None, 0
    values, n = s.system.values, s.system.n
    for a, b in _cells(s.system, a_range, b_range, random=True):
        if a + 1 > n:
            continue
        count += 1
        step_opt = s.d_opt(a + 1, b) - s.d_opt(a, b)
        step_rand = s.d_rand(a + 1, b) - s.d_rand(a, b)
        direct = step_opt - step_rand > ABS_TOL
        lhs, rhs = formulas.attack_sensitivity_margin(values, a, b)
        condition = lhs - rhs > ABS_TOL
        cell = dict(a=a, b=b, step_optimal=step_opt, step_random=step_rand,
                    condition_lhs=lhs, condition_rhs=rhs)
        if not direct and failure is None:
            failure = dict(cell, inequality="D*(a+1,b)-D*(a,b) > D_R(a+1,b)-D_R(a,b)")
        if direct != condition and disagreement is None:
            disagreement = cell
    return failure, disagreement or True, count


_CHECKS = {
    PropositionId.P1: _check_p1,
    PropositionId.P2: _check_p2,
    PropositionId.P3: _check_p3,
    PropositionId.P4: _check_p4,
    PropositionId.P5: _check_p5,
    PropositionId.P6: _check_p6,
    PropositionId.P7: _check_p7,
    PropositionId.P8: _check_p8,
    PropositionId.P9: _check_p9,
    PropositionId.P10: _check_p10,
}


def _ceil(x: float) -> int:
    # absorb float noise so that e.g. 8.000000000000002 maps to 8
    return math.ceil(x - 1e-9 * max(1.0, abs(x)))


def geometric_threshold_p9(a: int, gamma: float) -> int:
    """Smallest ``n`` with ``n >= a / (1 - gamma**a)`` for values ``v, v*gamma, v*gamma**2, ...``."""
    if a < 1 or not (0.0 < gamma < 1.0):
        raise ValueError("need a >= 1 and 0 < gamma < 1")
    return _ceil(a / (1.0 - gamma**a))


def geometric_threshold_p10(a: int, gamma: float) -> int:
    """Smallest ``n`` with ``n >= 1 / ((1 - gamma) * gamma**a)``."""
    if a < 1 or not (0.0 < gamma < 1.0):
        raise ValueError("need a >= 1 and 0 < gamma < 1")
    return _ceil(1.0 / ((1.0 - gamma) * gamma**a))


def geometric_system(n: int, gamma: float, top: float = 1.0) -> AssetSystem:
    return build_system([(f"g{i + 1}", top * gamma**i) for i in range(n)], name=f"geometric(n={n},gamma={gamma:g})")


def check_geometric_threshold(prop_id, a: int, gamma: float, extra: int = 10) -> PropositionCheckResult:
    """Cross-check a geometric-series threshold by direct evaluation.

    For every ``n`` from 2 to ``threshold + extra`` the inequality is
    evaluated on geometric values for ``b = 1..n-a``.  At or above the
    threshold it must hold for every ``b`` (weakly; integer thresholds give
    exact equality for the strict P10 form).  Below it, it must fail at
    ``b = 1`` wherever the largest rank involved is still inside the system,
    which shows the threshold is also the smallest such ``n``.
    """
    prop = PropositionId(prop_id) if not isinstance(prop_id, PropositionId) else prop_id
    if prop is PropositionId.GEO9:
        threshold = geometric_threshold_p9(a, gamma)
    elif prop is PropositionId.GEO10:
        threshold = geometric_threshold_p10(a, gamma)
    else:
        raise ValueError(f"{prop.value} is not a geometric threshold")

    count = 0
    for n in range(2, threshold + extra + 1):
        system = geometric_system(n, gamma)
        s = _Surfaces(system)
        for b in range(1, n - a + 1):
            if prop is PropositionId.GEO9:
                lhs, rhs = s.d_opt(a, b), s.d_rand(a, b)
                interior = b == 1 and a + 1 <= n
            else:
                lhs = s.d_opt(a + 1, b) - s.d_opt(a, b)
                rhs = s.d_rand(a + 1, b) - s.d_rand(a, b)
                interior = b == 1 and a + 2 <= n
            count += 1
            ok = lhs >= rhs - ABS_TOL
            cell = dict(n=n, a=a, b=b, gamma=gamma, threshold=threshold, lhs=lhs, rhs=rhs)
            if n >= threshold and not ok:
                return PropositionCheckResult(prop, f"geometric a={a} gamma={gamma:g}", False,
                                              dict(cell, reason="inequality fails at or above threshold"), count)
            if n < threshold and interior and lhs >= rhs:
                return PropositionCheckResult(prop, f"geometric a={a} gamma={gamma:g}", False,
                                              dict(cell, reason="inequality already holds below threshold"), count)
    return PropositionCheckResult(prop, f"geometric a={a} gamma={gamma:g}", True, None, count)


THEOREMS = (
    PropositionId.P1, PropositionId.P2, PropositionId.P4, PropositionId.P5,
    PropositionId.P6, PropositionId.P7, PropositionId.P8,
)


def random_instance(rng: np.random.Generator, n: int, name: str, with_attacker: bool = True) -> AssetSystem:
    """Strictly positive, pairwise distinct values (collisions are nudged apart)."""

    def distinct(k: int) -> list[float]:
        xs = [float(x) for x in rng.uniform(1.0, 100.0, size=k)]
        while len(set(xs)) < k:
            seen = set()
            for i, x in enumerate(xs):
                while x in seen:
                    x = math.nextafter(x, math.inf)
                seen.add(x)
                xs[i] = x
        return xs

    v = distinct(n)
    if with_attacker:
        w = distinct(n)
        raw = [(f"x{i}", v[i], w[i]) for i in range(n)]
    else:
        raw = [(f"x{i}", v[i]) for i in range(n)]
    return build_system(raw, name=name)


def randomized_property_suite(
    seed: int,
    instance_count: int,
    n_max: int,
    oracle_max_n: int = DEFAULT_ORACLE_MAX_N,
) -> list[PropositionCheckResult]:
    """Run every proposition on ``instance_count`` random systems.

    Instances have ``2 <= n <= n_max`` and independent attacker values, and
    each check covers the full ``a, b = 0..n`` grid.  The result list is a
    pure function of the arguments.
    """
    if n_max > oracle_max_n:
        raise OracleCapExceeded(f"n_max={n_max} exceeds the exhaustive-search cap {oracle_max_n}")
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    rng = np.random.default_rng(seed)
    results = []
    for k in range(instance_count):
        n = int(rng.integers(2, n_max + 1))
        system = random_instance(rng, n, f"random(seed={seed},#{k},n={n})")
        grid = range(0, n + 1)
        for prop in PropositionId:
            if prop in (PropositionId.GEO9, PropositionId.GEO10):
                continue
            results.append(check_proposition(prop, system, grid, grid, oracle_max_n))
    return results


def builtin_property_suite() -> list[PropositionCheckResult]:
    """All propositions on the built-in datasets plus the worked numeric examples."""
    from .datasets import load_builtin

    results = []
    for name in ("property_losses", "air_departures", "negative_skew"):
        system = load_builtin(name)
        grid = range(0, system.n + 1)
        for prop in PropositionId:
            if prop in (PropositionId.GEO9, PropositionId.GEO10, PropositionId.P3):
                continue
            results.append(check_proposition(prop, system, grid, grid))
    for name in ("property_losses", "air_departures"):
        system = load_builtin(name, attacker_values="population")
        grid = range(0, system.n + 1)
        results.append(check_proposition(PropositionId.P3, system, grid, grid))
    for values in ((9.0, 8.5, 6.0), (9.0, 3.0, 2.0)):
        system = build_system([(f"v{i + 1}", x) for i, x in enumerate(values)])
        results.append(check_proposition(PropositionId.P9, system, [2], [1]))
    for prop, a, gamma in ((PropositionId.GEO9, 2, 0.5), (PropositionId.GEO9, 2, 0.9),
                           (PropositionId.GEO10, 2, 0.9), (PropositionId.GEO10, 1, 0.5),
                           (PropositionId.GEO10, 2, 0.5)):
        results.append(check_geometric_threshold(prop, a, gamma))
    return results


def count_counterexamples(results: Sequence[PropositionCheckResult]) -> int:
    return sum(r.counterexample for r in results)
