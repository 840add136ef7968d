"""Built-in datasets: ten US urban areas and a synthetic negatively skewed set.

The property-loss figures are annualized expected terrorism losses per urban
area.  Each area is modeled here as a single discrete asset that is either
destroyed or not, which ignores the many possible targets and attack types
inside one area; treat results on these data as illustrations of the model.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

from .assets import AssetSystem, build_system


class UrbanArea(NamedTuple):
    key: str
    urban_area: str
    property_losses: float  # $ millions per year
    airport: str
    air_departures: float  # thousands per year
    population: float  # millions


TABLE2 = (
    UrbanArea("New York", "New York", 413, "LGA", 166, 9.3),
    UrbanArea("Chicago", "Chicago", 115, "ORD", 375, 8.3),
    UrbanArea("San Francisco", "San Francisco", 57, "SFO", 172, 1.7),
    UrbanArea("Washington", "Washington, DC-MD-VA-WV", 36, "DCA", 140, 4.9),
    UrbanArea("Los Angeles", "Los Angeles-Long Beach", 34, "LAX", 248, 9.5),
    UrbanArea("Philadelphia", "Philadelphia, PA-NJ", 21, "PHL", 171, 5.1),
    UrbanArea("Boston", "Boston, MA-NH", 18, "BOS", 156, 3.4),
    UrbanArea("Houston", "Houston", 11, "IAH", 183, 4.2),
    UrbanArea("Newark", "Newark", 7.3, "EWR", 158, 2.0),
    UrbanArea("Seattle", "Seattle-Bellevue-Everett", 6.7, "SEA", 174, 2.4),
)

NEGATIVE_SKEW = (719, 712, 705, 694, 676, 655, 621, 585, 528, 413)

BUILTINS = ("property_losses", "air_departures", "negative_skew", "table2_full")
ATTACKER_COLUMNS = ("population",)


class UnknownDatasetError(KeyError):
    pass


def load_builtin(name: str, attacker_values: Optional[str] = None) -> AssetSystem:
    """Build one of :data:`BUILTINS`.

    ``attacker_values="population"`` attaches city population (millions) as
    the attacker's valuation; only the urban-area datasets have it.
    ``table2_full`` is the property-loss system keyed by urban area with
    population always attached.
    """
    if attacker_values is not None and attacker_values not in ATTACKER_COLUMNS:
        raise ValueError(f"unknown attacker value column {attacker_values!r}")
    if name == "property_losses":
        rows = [(r.key, r.property_losses, r.population) for r in TABLE2]
    elif name == "air_departures":
        rows = [(r.airport, r.air_departures, r.population) for r in TABLE2]
    elif name == "table2_full":
        return build_system([(r.urban_area, r.property_losses, r.population) for r in TABLE2], name=name)
    elif name == "negative_skew":
        if attacker_values is not None:
            raise ValueError("negative_skew has no attacker value column")
        return build_system([(f"NS{i + 1:02d}", v) for i, v in enumerate(NEGATIVE_SKEW)], name=name)
    else:
        raise UnknownDatasetError(f"unknown built-in dataset {name!r} (choose from {', '.join(BUILTINS)})")
    if attacker_values is None:
        rows = [r[:2] for r in rows]
    return build_system(rows, name=name)
