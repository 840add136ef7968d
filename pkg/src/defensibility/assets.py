"""Systems of discrete assets and simple dataset statistics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence, Union


class ValidationError(ValueError):
    """Base class for rejected asset data."""


class EmptySystemError(ValidationError):
    pass


class InvalidValueError(ValidationError):
    pass


class DuplicateIdError(ValidationError):
    pass


class PartialAttackerValuesError(ValidationError):
    """Raised when only some assets carry an attacker value."""


@dataclass(frozen=True)
class Asset:
    id: str
    defender_value: float
    attacker_value: Optional[float] = None


RawAsset = Union[Asset, Sequence]


@dataclass(frozen=True)
class AssetSystem:
    """Assets ordered by defender value, highest first.

    Build instances with :func:`build_system`; the constructor does not sort
    or validate.
    """

    assets: tuple[Asset, ...]
    name: str = ""

    @property
    def n(self) -> int:
        return len(self.assets)

    @cached_property
    def total_value(self) -> float:
        return math.fsum(a.defender_value for a in self.assets)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(a.id for a in self.assets)

    @property
    def values(self) -> tuple[float, ...]:
        return tuple(a.defender_value for a in self.assets)

    @property
    def attacker_values(self) -> Optional[tuple[float, ...]]:
        if not self.has_attacker_values:
            return None
        return tuple(a.attacker_value for a in self.assets)

    @property
    def has_attacker_values(self) -> bool:
        return self.assets[0].attacker_value is not None

    @cached_property
    def _index(self) -> dict[str, int]:
        return {a.id: i for i, a in enumerate(self.assets)}

    def index_of(self, asset_id: str) -> int:
        try:
            return self._index[asset_id]
        except KeyError:
            raise KeyError(f"unknown asset id {asset_id!r}") from None

    def __contains__(self, asset_id: object) -> bool:
        return asset_id in self._index

    def with_attacker_values(self, attacker_values: Optional[Sequence[float]]) -> "AssetSystem":
        """Return a copy whose attacker values are replaced (``None`` drops them)."""
        if attacker_values is None:
            raw = [(a.id, a.defender_value) for a in self.assets]
        else:
            if len(attacker_values) != self.n:
                raise ValidationError("attacker_values length does not match the system")
            raw = [(a.id, a.defender_value, w) for a, w in zip(self.assets, attacker_values)]
        return build_system(raw, name=self.name)


def _check_value(asset_id: str, label: str, value) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise InvalidValueError(f"{label} of {asset_id!r} is not a number: {value!r}") from None
    if not math.isfinite(x):
        raise InvalidValueError(f"{label} of {asset_id!r} is not finite")
    if x < 0:
        raise InvalidValueError(f"{label} of {asset_id!r} is negative ({x})")
    return x


def build_system(raw_assets: Iterable[RawAsset], name: str = "") -> AssetSystem:
    """Validate raw ``(id, defender_value[, attacker_value])`` records and sort them.

    Sorting is stable, so assets with equal defender value keep input order.
    Either every asset carries an attacker value or none does.
    """
    assets: list[Asset] = []
    seen: set[str] = set()
    for item in raw_assets:
        if isinstance(item, Asset):
            asset_id, v, w = item.id, item.defender_value, item.attacker_value
        else:
            if len(item) not in (2, 3):
                raise ValidationError(f"expected (id, defender_value[, attacker_value]), got {item!r}")
            asset_id, v = item[0], item[1]
            w = item[2] if len(item) == 3 else None
        asset_id = str(asset_id)
        if asset_id in seen:
            raise DuplicateIdError(f"duplicate asset id {asset_id!r}")
        seen.add(asset_id)
        v = _check_value(asset_id, "defender_value", v)
        if w is not None:
            w = _check_value(asset_id, "attacker_value", w)
        assets.append(Asset(asset_id, v, w))

    if not assets:
        raise EmptySystemError("an asset system needs at least one asset")
    with_w = sum(a.attacker_value is not None for a in assets)
    if 0 < with_w < len(assets):
        raise PartialAttackerValuesError(
            f"{with_w} of {len(assets)} assets carry an attacker value; give all or none"
        )
    assets.sort(key=lambda a: -a.defender_value)
    return AssetSystem(tuple(assets), name=name)


def value_at_rank(system: AssetSystem, i: int) -> float:
    """Defender value of the ``i``-th most valuable asset (1-based); 0 past the end."""
    if i < 1:
        raise ValueError("rank is 1-based")
    return system.assets[i - 1].defender_value if i <= system.n else 0.0


def skewness(values: Sequence[float]) -> float:
    """Adjusted Fisher-Pearson sample skewness, ``g1 * sqrt(n(n-1)) / (n-2)``."""
    x = [float(v) for v in values]
    n = len(x)
    if n < 3:
        raise ValueError("skewness needs at least 3 values")
    mean = math.fsum(x) / n
    m2 = math.fsum((v - mean) ** 2 for v in x) / n
    m3 = math.fsum((v - mean) ** 3 for v in x) / n
    if m2 <= 0.0 or m2 <= (1e-14 * max(abs(v) for v in x)) ** 2:
        raise ValueError("skewness is undefined for zero variance")
    g1 = m3 / m2**1.5
    return g1 * math.sqrt(n * (n - 1)) / (n - 2)
