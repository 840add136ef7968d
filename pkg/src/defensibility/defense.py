"""Defense allocations: reflexive, predictive, and exhaustive-search optimal."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Optional

from . import _backend
from .assets import AssetSystem
from .threats import ThreatKind, ThreatModel, attack_order, attack_outcome

DEFAULT_ORACLE_MAX_N = 20


class DefenseError(ValueError):
    pass


class OracleCapExceeded(DefenseError):
    """The exhaustive search was asked for a system larger than its cap."""


@dataclass(frozen=True)
class DefenseAllocation:
    """Assets newly defended plus the baseline ``pre_defended_ids`` (b0)."""

    defended_ids: frozenset[str] = frozenset()
    pre_defended_ids: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "defended_ids", frozenset(self.defended_ids))
        object.__setattr__(self, "pre_defended_ids", frozenset(self.pre_defended_ids))
        overlap = self.defended_ids & self.pre_defended_ids
        if overlap:
            raise DefenseError(f"assets both defended and pre-defended: {sorted(overlap)}")

    @property
    def all_defended(self) -> frozenset[str]:
        return self.defended_ids | self.pre_defended_ids

    @property
    def b(self) -> int:
        return len(self.defended_ids)

    def validate_for(self, system: AssetSystem) -> None:
        unknown = [x for x in self.all_defended if x not in system]
        if unknown:
            raise DefenseError(f"unknown asset ids in defense: {sorted(unknown)}")


def _pre_ids(system: AssetSystem, pre_defended: Optional[Iterable[str]]) -> frozenset[str]:
    pre = frozenset(pre_defended or ())
    unknown = [x for x in pre if x not in system]
    if unknown:
        raise DefenseError(f"unknown pre-defended asset ids: {sorted(unknown)}")
    return pre


def _check_budget(system: AssetSystem, b: int, pre: frozenset[str]) -> None:
    if b < 0:
        raise DefenseError("defense effort must be nonnegative")
    if b + len(pre) > system.n:
        raise DefenseError(
            f"cannot defend {b} more assets: {len(pre)} of {system.n} are already defended"
        )


def reflexive_defense(
    system: AssetSystem, b: int, pre_defended: Optional[Iterable[str]] = None
) -> DefenseAllocation:
    """Defend the ``b`` most valuable assets (to the defender) not already defended."""
    pre = _pre_ids(system, pre_defended)
    _check_budget(system, b, pre)
    chosen = [x.id for x in system.assets if x.id not in pre][:b]
    return DefenseAllocation(frozenset(chosen), pre)


def predictive_defense(
    system: AssetSystem,
    threat: ThreatModel,
    a: int,
    b: int,
    pre_defended: Optional[Iterable[str]] = None,
) -> DefenseAllocation:
    """Defend the ``b`` assets most likely to be struck when nothing is defended.

    Deterministic attackers are ranked by their own strike order, which
    continues past the first ``a`` targets.  Stochastic threats are ranked by
    attack probability, ties going to the higher defender value.
    """
    pre = _pre_ids(system, pre_defended)
    _check_budget(system, b, pre)
    threat.validate_for(system)
    if threat.deterministic:
        targeting = "attacker" if threat.kind is ThreatKind.OPTIMAL_DIFFERENT_VALUE else "defender"
        ranking = attack_order(system, targeting)
    else:
        probs = attack_outcome(system, threat, a).attack_probabilities
        v = system.values
        ranking = sorted(range(system.n), key=lambda i: (-probs[i], -v[i], i))
    chosen = [system.assets[i].id for i in ranking if system.assets[i].id not in pre][:b]
    return DefenseAllocation(frozenset(chosen), pre)


def optimal_defense_bruteforce(
    system: AssetSystem,
    threat: ThreatModel,
    a: int,
    b: int,
    pre_defended: Optional[Iterable[str]] = None,
    max_n: int = DEFAULT_ORACLE_MAX_N,
    kernel=None,
) -> tuple[DefenseAllocation, float]:
    """Try every ``b``-subset of undefended assets and return the best one.

    The attacker best-responds to each candidate (deterministic threats) or
    strikes with its fixed marginals (stochastic threats).  Among equally good
    subsets the lexicographically smallest set of ids is returned.
    """
    pre = _pre_ids(system, pre_defended)
    _check_budget(system, b, pre)
    if system.n > max_n:
        raise OracleCapExceeded(
            f"exhaustive search capped at n <= {max_n}; system has {system.n} assets"
        )
    if a < 0:
        raise DefenseError("attack effort must be nonnegative")
    threat.validate_for(system)
    kernel = kernel or _backend.kernel

    candidates = sorted(
        (i for i, x in enumerate(system.assets) if x.id not in pre),
        key=lambda i: system.assets[i].id,
    )
    pre_mask = [x.id in pre for x in system.assets]
    if threat.deterministic:
        targeting = "attacker" if threat.kind is ThreatKind.OPTIMAL_DIFFERENT_VALUE else "defender"
        order = [i for i in attack_order(system, targeting) if not pre_mask[i]]
        probs = [0.0] * system.n
    else:
        order = []
        probs = list(attack_outcome(system, threat, a).attack_probabilities)

    tol = 1e-9 * max(1.0, system.total_value)
    best, value, count = kernel.best_subset(
        list(system.values), candidates, b, threat.deterministic, order, a, probs, pre_mask, tol
    )
    assert count == comb(len(candidates), b)
    chosen = frozenset(system.assets[i].id for i in best)
    return DefenseAllocation(chosen, pre), value
