"""Threat models and per-asset attack / survival probabilities."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Mapping, Optional, Sequence

from .assets import AssetSystem

if TYPE_CHECKING:
    from .defense import DefenseAllocation


class ThreatError(ValueError):
    pass


class ThreatKind(enum.Enum):
    OPTIMAL_SAME_VALUE = "optimal"
    OPTIMAL_DIFFERENT_VALUE = "optimal-different"
    UNIFORM_RANDOM = "random"
    STATIONARY_STOCHASTIC = "stationary"


@dataclass(frozen=True)
class ThreatModel:
    kind: ThreatKind
    # asset id -> marginal probability of being struck (stationary threats only)
    attack_distribution: Optional[Mapping[str, float]] = field(default=None, compare=True)

    def __post_init__(self):
        if self.kind is ThreatKind.STATIONARY_STOCHASTIC:
            if self.attack_distribution is None:
                raise ThreatError("a stationary threat needs an attack distribution")
            for asset_id, p in self.attack_distribution.items():
                if not (math.isfinite(p) and 0.0 <= p <= 1.0):
                    raise ThreatError(f"attack probability of {asset_id!r} is outside [0, 1]: {p}")
        elif self.attack_distribution is not None:
            raise ThreatError(f"{self.kind.value} threats take no attack distribution")

    @classmethod
    def optimal(cls) -> "ThreatModel":
        return cls(ThreatKind.OPTIMAL_SAME_VALUE)

    @classmethod
    def different_value(cls) -> "ThreatModel":
        return cls(ThreatKind.OPTIMAL_DIFFERENT_VALUE)

    @classmethod
    def uniform_random(cls) -> "ThreatModel":
        return cls(ThreatKind.UNIFORM_RANDOM)

    @classmethod
    def stationary(cls, probabilities: Mapping[str, float]) -> "ThreatModel":
        return cls(ThreatKind.STATIONARY_STOCHASTIC, dict(probabilities))

    @classmethod
    def parse(cls, name: str, probabilities: Optional[Mapping[str, float]] = None) -> "ThreatModel":
        try:
            kind = ThreatKind(name)
        except ValueError:
            choices = ", ".join(k.value for k in ThreatKind)
            raise ThreatError(f"unknown threat {name!r} (choose from {choices})") from None
        return cls(kind, dict(probabilities) if probabilities is not None else None)

    @property
    def deterministic(self) -> bool:
        return self.kind in (ThreatKind.OPTIMAL_SAME_VALUE, ThreatKind.OPTIMAL_DIFFERENT_VALUE)

    @property
    def descriptor(self) -> str:
        return self.kind.value

    def validate_for(self, system: AssetSystem) -> None:
        if self.kind is ThreatKind.OPTIMAL_DIFFERENT_VALUE and not system.has_attacker_values:
            raise ThreatError("a different-value attacker needs attacker values on every asset")
        if self.kind is ThreatKind.STATIONARY_STOCHASTIC:
            unknown = set(self.attack_distribution) - set(system.ids)
            if unknown:
                raise ThreatError(f"attack distribution names unknown assets: {sorted(unknown)}")


@dataclass(frozen=True)
class AttackOutcome:
    attack_probabilities: tuple[float, ...]
    survival_probabilities: tuple[float, ...]
    attacked_set: Optional[frozenset[str]] = None


def _defended_ids(defense: Optional["DefenseAllocation"]) -> frozenset[str]:
    if defense is None:
        return frozenset()
    return defense.defended_ids | defense.pre_defended_ids


def attack_order(system: AssetSystem, targeting: str = "defender") -> list[int]:
    """Asset indices in the order an optimizing attacker strikes them.

    Ties in the targeting value go to the asset worth more to the defender,
    then to the lower index.
    """
    if targeting == "defender":
        target = system.values
    elif targeting == "attacker":
        if not system.has_attacker_values:
            raise ThreatError("system carries no attacker values")
        target = system.attacker_values
    else:
        raise ThreatError(f"targeting must be 'defender' or 'attacker', not {targeting!r}")
    v = system.values
    return sorted(range(system.n), key=lambda i: (-target[i], -v[i], i))


def survival(
    system: AssetSystem,
    attack_probabilities: Sequence[float],
    defense: Optional["DefenseAllocation"],
) -> tuple[float, ...]:
    """``s_i = (1 - A_i) + A_i * B_i`` with perfect binary defense."""
    defended = _defended_ids(defense)
    out = []
    for asset, p in zip(system.assets, attack_probabilities):
        b = 1.0 if asset.id in defended else 0.0
        out.append((1.0 - p) + p * b)
    return tuple(out)


def optimal_attack(
    system: AssetSystem,
    defense: Optional["DefenseAllocation"],
    a: int,
    targeting: str = "defender",
) -> AttackOutcome:
    """Strike the ``a`` undefended assets of highest targeting value."""
    if a < 0:
        raise ThreatError("attack effort must be nonnegative")
    defended = _defended_ids(defense)
    struck: list[int] = []
    for i in attack_order(system, targeting):
        if len(struck) == a:
            break
        if system.assets[i].id not in defended:
            struck.append(i)
    probs = [0.0] * system.n
    for i in struck:
        probs[i] = 1.0
    return AttackOutcome(
        tuple(probs),
        survival(system, probs, defense),
        frozenset(system.assets[i].id for i in struck),
    )


def uniform_random_probabilities(
    system: AssetSystem, a: int, defense: Optional["DefenseAllocation"] = None
) -> AttackOutcome:
    """Every asset, defended or not, is targeted with probability ``a / n``."""
    if a < 0 or a > system.n:
        raise ThreatError(f"uniform random attack effort must lie in [0, {system.n}], got {a}")
    probs = [a / system.n] * system.n
    return AttackOutcome(tuple(probs), survival(system, probs, defense))


def stationary_probabilities(
    system: AssetSystem, threat: ThreatModel, a: int, defense: Optional["DefenseAllocation"] = None
) -> AttackOutcome:
    # The distribution stands for the attack at its given intensity; a = 0 means no attack.
    if a < 0:
        raise ThreatError("attack effort must be nonnegative")
    dist = threat.attack_distribution
    probs = [float(dist.get(x.id, 0.0)) if a > 0 else 0.0 for x in system.assets]
    return AttackOutcome(tuple(probs), survival(system, probs, defense))


def attack_outcome(
    system: AssetSystem,
    threat: ThreatModel,
    a: int,
    defense: Optional["DefenseAllocation"] = None,
) -> AttackOutcome:
    threat.validate_for(system)
    if threat.kind is ThreatKind.OPTIMAL_SAME_VALUE:
        return optimal_attack(system, defense, a, "defender")
    if threat.kind is ThreatKind.OPTIMAL_DIFFERENT_VALUE:
        return optimal_attack(system, defense, a, "attacker")
    if threat.kind is ThreatKind.UNIFORM_RANDOM:
        return uniform_random_probabilities(system, a, defense)
    return stationary_probabilities(system, threat, a, defense)
