"""Rank statistics for comparing algorithm result samples.

The Kruskal-Wallis statistic is computed in exact rational arithmetic
(ranks and tie corrections are rationals), so textbook cases come out exact:
groups {1,2,3}, {4,5,6}, {7,8,9} give H == 7.2 as a float, not 7.2000...03.
The chi-square upper tail is evaluated through a local regularized
incomplete gamma (series + continued fraction) rather than pulling in a
statistics dependency for a single function; it is validated against an
independent oracle in the test suite to <= 1e-10 relative error.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, List, Sequence

_EPS = 1e-15
_MAX_ITER = 10_000


def _gamma_p_series(a: float, x: float) -> float:
    """Lower regularized incomplete gamma P(a, x) by series; for x < a + 1."""
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_q_contfrac(a: float, x: float) -> float:
    """Upper regularized incomplete gamma Q(a, x) by Lentz's continued
    fraction; for x >= a + 1."""
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def chi2_sf(x: float, df: int) -> float:
    """Upper-tail probability of the chi-square distribution."""
    if df < 1:
        raise ValueError(f"df must be >= 1, got {df}")
    if x < 0:
        raise ValueError(f"x must be >= 0, got {x}")
    if x == 0.0:
        return 1.0
    a = df / 2.0
    half = x / 2.0
    if half < a + 1.0:
        return 1.0 - _gamma_p_series(a, half)
    return _gamma_q_contfrac(a, half)


def _midranks(values: Sequence[float]) -> tuple[List[Fraction], List[int]]:
    """Fractional midranks of the pooled sample plus tie-group sizes."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks: List[Fraction] = [Fraction(0)] * len(values)
    tie_sizes: List[int] = []
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        # positions i..j (0-based) share the average of ranks i+1..j+1
        mid = Fraction((i + 1) + (j + 1), 2)
        for k in range(i, j + 1):
            ranks[order[k]] = mid
        tie_sizes.append(j - i + 1)
        i = j + 1
    return ranks, tie_sizes


def _kruskal_wallis_exact(groups: Sequence[Sequence[float]]):
    """Exact-rational H with tie correction, plus per-group mean ranks."""
    if len(groups) < 2:
        raise ValueError("need at least 2 groups")
    sizes = [len(g) for g in groups]
    if any(s == 0 for s in sizes):
        raise ValueError("groups must be non-empty")
    pooled: List[float] = [float(v) for g in groups for v in g]
    total = len(pooled)
    ranks, tie_sizes = _midranks(pooled)

    rank_sums: List[Fraction] = []
    offset = 0
    for s in sizes:
        rank_sums.append(sum(ranks[offset:offset + s], Fraction(0)))
        offset += s
    mean_ranks = [rs / s for rs, s in zip(rank_sums, sizes)]

    h = (Fraction(12, total * (total + 1))
         * sum(rs * rs / s for rs, s in zip(rank_sums, sizes))
         - 3 * (total + 1))
    tie_term = sum(t ** 3 - t for t in tie_sizes)
    correction = 1 - Fraction(tie_term, total ** 3 - total)
    if correction == 0:
        # every pooled value identical: no rank separation by convention
        return Fraction(0), mean_ranks, len(groups) - 1
    return h / correction, mean_ranks, len(groups) - 1


def kruskal_wallis(groups: Sequence[Sequence[float]]) -> tuple[float, float]:
    """Kruskal-Wallis rank test.

    Returns (H, p) where H uses the standard tie correction and p is the
    chi-square upper tail with k - 1 degrees of freedom.  The all-ties
    degenerate case is defined as H = 0, p = 1.
    """
    h, _, df = _kruskal_wallis_exact(groups)
    h_float = float(h)
    return h_float, chi2_sf(h_float, df)


def pairwise_markers(groups: Dict[str, Sequence[float]],
                     alpha_sig: float = 0.05) -> Dict[str, Dict[str, str]]:
    """Bonferroni-corrected pairwise rank comparisons.

    For each ordered pair (column C, competitor X) a two-group rank test is
    run at level ``alpha_sig`` divided by the number of unordered pairs.
    The marker for X in C's column is '+' when C is significantly better
    (higher mean rank), '-' when significantly worse, '*' otherwise.  The
    matrix is antisymmetric by construction and has no self-comparisons.
    """
    names = list(groups)
    if len(names) < 2:
        raise ValueError("need at least 2 named groups")
    n_pairs = len(names) * (len(names) - 1) // 2
    threshold = alpha_sig / n_pairs
    markers: Dict[str, Dict[str, str]] = {name: {} for name in names}
    for a_idx in range(len(names)):
        for b_idx in range(a_idx + 1, len(names)):
            a, b = names[a_idx], names[b_idx]
            h, mean_ranks, df = _kruskal_wallis_exact([groups[a], groups[b]])
            p = chi2_sf(float(h), df)
            if p < threshold and mean_ranks[0] != mean_ranks[1]:
                first, second = ("+", "-") if mean_ranks[0] > mean_ranks[1] \
                    else ("-", "+")
            else:
                first = second = "*"
            markers[a][b] = first
            markers[b][a] = second
    return markers
