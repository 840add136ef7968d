"""Residual value, defensibility, effort grids and cross-system comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .assets import AssetSystem
from .defense import (
    DefenseAllocation,
    DefenseError,
    optimal_defense_bruteforce,
    reflexive_defense,
)
from .threats import ThreatError, ThreatKind, ThreatModel, attack_outcome

STRATEGIES = ("reflexive", "optimal")


class ModelViolation(RuntimeError):
    """A computed quantity left its mathematically guaranteed range."""


def residual_value(
    system: AssetSystem, threat: ThreatModel, a: int, defense: Optional[DefenseAllocation]
) -> float:
    """Expected defender value left after the attack: ``sum(v_i * s_i)``."""
    if defense is not None:
        defense.validate_for(system)
    outcome = attack_outcome(system, threat, a, defense)
    return math.fsum(v * s for v, s in zip(system.values, outcome.survival_probabilities))


def _defend(system, threat, a, b, pre, strategy) -> DefenseAllocation:
    if strategy == "reflexive":
        return reflexive_defense(system, b, pre)
    if strategy == "optimal":
        return optimal_defense_bruteforce(system, threat, a, b, pre)[0]
    raise ValueError(f"strategy must be one of {STRATEGIES}, not {strategy!r}")


def _require_value(system: AssetSystem) -> float:
    u = system.total_value
    if u <= 0.0:
        raise ValueError("defensibility is undefined for a system of total value 0")
    return u


def defensibility(
    system: AssetSystem,
    threat: ThreatModel,
    a: int,
    b: int,
    b0: Iterable[str] = (),
    strategy: str = "reflexive",
) -> float:
    """Fraction of total value recovered by defending ``b`` more assets.

    ``b0`` names assets defended beforehand; they are kept in the total value
    but never count toward ``b``.  ``strategy="optimal"`` uses the exhaustive
    search instead of defending the most valuable assets.
    """
    u = _require_value(system)
    pre = frozenset(b0)
    base = DefenseAllocation(frozenset(), pre)
    defense = _defend(system, threat, a, b, pre, strategy)
    d = (residual_value(system, threat, a, defense) - residual_value(system, threat, a, base)) / u
    if not (-1e-12 <= d <= 1.0 + 1e-12):
        raise ModelViolation(f"defensibility {d!r} outside [0, 1] (a={a}, b={b})")
    return d


def average_defensibility(
    system: AssetSystem,
    threat: ThreatModel,
    a: int,
    b_from: int,
    b_to: int,
    b0: Iterable[str] = (),
    strategy: str = "reflexive",
) -> float:
    """Arithmetic mean of ``defensibility(a, b)`` over ``b = b_from..b_to``."""
    pre = frozenset(b0)
    if not (1 <= b_from <= b_to <= system.n - len(pre)):
        raise ValueError(
            f"invalid defense range {b_from}..{b_to} for {system.n - len(pre)} defendable assets"
        )
    ds = [defensibility(system, threat, a, b, pre, strategy) for b in range(b_from, b_to + 1)]
    return math.fsum(ds) / len(ds)


@dataclass(frozen=True)
class EvaluationGrid:
    """Residual value and defensibility tabulated over attack/defense efforts.

    Rows follow ``a_values``, columns ``b_values``.  Cells that are not
    defined (``a > n`` under a random threat, or ``b`` beyond the defendable
    assets) hold NaN and ``valid`` is False there.
    """

    system_id: str
    threat: str
    a_values: tuple[int, ...]
    b_values: tuple[int, ...]
    residual_value: np.ndarray
    residual_fraction: np.ndarray
    defensibility: np.ndarray
    valid: np.ndarray = field(repr=False)

    def rows(self) -> Iterator[tuple[int, int, float, float, float]]:
        for i, a in enumerate(self.a_values):
            for j, b in enumerate(self.b_values):
                if self.valid[i, j]:
                    yield (
                        a,
                        b,
                        float(self.residual_value[i, j]),
                        float(self.residual_fraction[i, j]),
                        float(self.defensibility[i, j]),
                    )

    def cell(self, a: int, b: int) -> tuple[float, float, float]:
        i, j = self.a_values.index(a), self.b_values.index(b)
        return (
            float(self.residual_value[i, j]),
            float(self.residual_fraction[i, j]),
            float(self.defensibility[i, j]),
        )


def evaluation_grid(
    system: AssetSystem,
    threat: ThreatModel,
    a_values: Sequence[int],
    b_values: Sequence[int],
    b0: Iterable[str] = (),
    strategy: str = "reflexive",
) -> EvaluationGrid:
    u = _require_value(system)
    pre = frozenset(b0)
    a_values, b_values = tuple(a_values), tuple(b_values)
    if any(a < 0 for a in a_values) or any(b < 0 for b in b_values):
        raise ValueError("effort levels must be nonnegative")
    shape = (len(a_values), len(b_values))
    rv = np.full(shape, np.nan)
    valid = np.zeros(shape, dtype=bool)
    dv = np.full(shape, np.nan)
    base_defense = DefenseAllocation(frozenset(), pre)
    for i, a in enumerate(a_values):
        if threat.kind is ThreatKind.UNIFORM_RANDOM and a > system.n:
            continue
        baseline = residual_value(system, threat, a, base_defense)
        for j, b in enumerate(b_values):
            if b + len(pre) > system.n:
                continue
            defense = _defend(system, threat, a, b, pre, strategy)
            v = residual_value(system, threat, a, defense)
            rv[i, j] = v
            dv[i, j] = (v - baseline) / u
            valid[i, j] = True
    return EvaluationGrid(
        system_id=system.name,
        threat=threat.descriptor,
        a_values=a_values,
        b_values=b_values,
        residual_value=rv,
        residual_fraction=rv / u,
        defensibility=dv,
        valid=valid,
    )


@dataclass(frozen=True)
class SystemScenario:
    system: AssetSystem
    threat: ThreatModel
    a: int
    name: Optional[str] = None

    @property
    def label(self) -> str:
        return self.name or self.system.name


@dataclass(frozen=True)
class ComparisonEntry:
    name: str
    system_id: str
    threat: str
    a: int
    budget: int
    defensibility: Optional[float]
    average: Optional[float] = None
    error: Optional[str] = None


@dataclass(frozen=True)
class ComparisonReport:
    entries: tuple[ComparisonEntry, ...]
    budget: int
    average_range: Optional[tuple[int, int]]
    # scenario label of the first best entry
    recommended_system_id: Optional[str]
    maximizers: tuple[str, ...]

    @property
    def ranked_by(self) -> str:
        return "average" if self.average_range else "defensibility"


def _as_scenario(item) -> SystemScenario:
    if isinstance(item, SystemScenario):
        return item
    if len(item) == 3:
        return SystemScenario(*item)
    if len(item) == 4:
        name, system, threat, a = item
        return SystemScenario(system, threat, a, name)
    raise TypeError(f"cannot read scenario from {item!r}")


def compare_systems(
    scenarios: Iterable,
    budget_b: int,
    average_range: Optional[tuple[int, int]] = None,
) -> ComparisonReport:
    """Score each system at a common budget and recommend the most defensible.

    With ``average_range`` the ranking uses the average defensibility over
    that range of budgets.  A budget a system cannot absorb is reported on its
    entry instead of failing the whole comparison.
    """
    items = [_as_scenario(s) for s in scenarios]
    if len(items) < 2:
        raise ValueError("comparison needs at least two scenarios")
    entries = []
    for s in items:
        d = avg = err = None
        try:
            d = defensibility(s.system, s.threat, s.a, budget_b)
            if average_range is not None:
                avg = average_defensibility(s.system, s.threat, s.a, *average_range)
        except (DefenseError, ThreatError, ValueError) as exc:
            err = str(exc)
        entries.append(
            ComparisonEntry(s.label, s.system.name, s.threat.descriptor, s.a, budget_b, d, avg, err)
        )

    def score(e: ComparisonEntry) -> Optional[float]:
        return e.average if average_range is not None else e.defensibility

    scored = [e for e in entries if score(e) is not None]
    maximizers: tuple[str, ...] = ()
    if scored:
        top = max(score(e) for e in scored)
        maximizers = tuple(e.name for e in scored if score(e) >= top - 1e-12)
    return ComparisonReport(
        entries=tuple(entries),
        budget=budget_b,
        average_range=tuple(average_range) if average_range else None,
        recommended_system_id=maximizers[0] if maximizers else None,
        maximizers=maximizers,
    )
