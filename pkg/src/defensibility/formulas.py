"""Closed-form residual value and defensibility for reflexive defense.

These work straight from sorted defender values and never simulate an
attack, so they serve as a second route against ``evaluation``.  Ranks past
``n`` count as value 0.
"""

from __future__ import annotations

import math
from typing import Sequence


def _rank_sum(values: Sequence[float], first: int, last: int) -> float:
    """Sum of values at 1-based ranks ``first..last`` inclusive."""
    lo = max(first, 1) - 1
    hi = min(last, len(values))
    if hi <= lo:
        return 0.0
    return math.fsum(values[lo:hi])


def optimal_residual(values: Sequence[float], a: int, b: int) -> float:
    """``U - sum(v[b+1 .. b+a])``."""
    return math.fsum(values) - _rank_sum(values, b + 1, b + a)


def optimal_defensibility(values: Sequence[float], a: int, b: int) -> float:
    """``(sum(v[1..a]) - sum(v[b+1 .. b+a])) / U``."""
    return (_rank_sum(values, 1, a) - _rank_sum(values, b + 1, b + a)) / math.fsum(values)


def random_residual(values: Sequence[float], a: int, b: int) -> float:
    n = len(values)
    return _rank_sum(values, 1, b) + (1.0 - a / n) * _rank_sum(values, b + 1, n)


def random_defensibility(values: Sequence[float], a: int, b: int) -> float:
    return (a / len(values)) * _rank_sum(values, 1, b) / math.fsum(values)


def optimal_vs_random_margin(values: Sequence[float], a: int, b: int) -> tuple[float, float]:
    """Both sides of the test for optimal-attack defensibility beating random.

    Returns ``(lhs, rhs)`` with ``lhs = sum(v[1..a])`` and
    ``rhs = sum(v[b+1..b+a]) + (a/n) sum(v[1..b])``; the optimal side is at
    least as defensible exactly when ``lhs >= rhs``.
    """
    n = len(values)
    lhs = _rank_sum(values, 1, a)
    rhs = _rank_sum(values, b + 1, b + a) + (a / n) * _rank_sum(values, 1, b)
    return lhs, rhs


def attack_sensitivity_margin(values: Sequence[float], a: int, b: int) -> tuple[float, float]:
    """Both sides of the test for defensibility reacting more to one extra
    attack under the optimal attacker than under the random one.

    Returns ``(lhs, rhs) = ((v[a+1] - v[a+b+1]) / U, sum(v[1..b]) / (n U))``;
    the optimal side is more sensitive exactly when ``lhs > rhs``.
    """
    n = len(values)
    u = math.fsum(values)
    lhs = (_rank_sum(values, a + 1, a + 1) - _rank_sum(values, a + b + 1, a + b + 1)) / u
    rhs = _rank_sum(values, 1, b) / n / u
    return lhs, rhs
