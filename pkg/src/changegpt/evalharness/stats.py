"""Paired-classifier comparison via McNemar's test.

Works from the two discordant counts of the paired contingency table:
b = cases only the first system got right, c = cases only the second did.
"""

from __future__ import annotations

import math


class NoDiscordantPairs(ValueError):
    """b + c = 0; the two systems never disagreed, nothing to test."""


def chi2_sf_1df(x: float) -> float:
    """Upper tail of the chi-squared distribution with one degree of freedom."""
    if x < 0:
        return 1.0
    return math.erfc(math.sqrt(x / 2.0))


def exact_binomial_p(b: int, c: int) -> float:
    """Two-sided exact binomial p for min(b, c) successes in b + c fair trials."""
    n = b + c
    k = min(b, c)
    tail = sum(math.comb(n, i) for i in range(k + 1)) / 2.0**n
    return min(1.0, 2.0 * tail)


def mcnemar(b: int, c: int, exact: bool = False) -> tuple[float, float]:
    """(statistic, p_value) of McNemar's test.

    The statistic is the continuity-corrected chi-squared value
    (|b - c| - 1)^2 / (b + c). By default the p-value comes from the
    chi-squared(1) upper tail; pass exact=True for the exact binomial
    p-value, the better-behaved choice when b + c < 25.
    """
    if b < 0 or c < 0:
        raise ValueError("discordant counts must be non-negative")
    if b + c == 0:
        raise NoDiscordantPairs("no discordant pairs (b + c = 0)")
    statistic = (abs(b - c) - 1.0) ** 2 / (b + c)
    p_value = exact_binomial_p(b, c) if exact else chi2_sf_1df(statistic)
    return statistic, p_value
