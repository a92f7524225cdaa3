"""Small statistics helpers with the empty-population-is-zero convention.

All spreads are population (not sample) statistics so that single-element
groups are well defined.
"""

from __future__ import annotations

import math
from typing import Sequence


def mean0(xs: Sequence[float]) -> float:
    return sum(xs) / len(xs) if xs else 0.0


def var0(xs: Sequence[float]) -> float:
    if not xs:
        return 0.0
    m = mean0(xs)
    return sum((x - m) ** 2 for x in xs) / len(xs)


def std0(xs: Sequence[float]) -> float:
    return math.sqrt(var0(xs))


def max0(xs: Sequence[float]) -> float:
    return max(xs) if xs else 0.0


def min0(xs: Sequence[float]) -> float:
    return min(xs) if xs else 0.0
