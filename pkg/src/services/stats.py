"""
Rank-based tests for comparing planners: Mann-Whitney U, Kruskal-Wallis H
and Spearman's rho.

Ranks use midranks for ties. Small tie-free Mann-Whitney comparisons get an
exact p-value from the full null distribution of U; everything else uses the
large-sample approximation.
"""
import math
from collections.abc import Sequence
from functools import lru_cache

import numpy as np
from scipy import stats

from src.core.exceptions import EmptySample, InsufficientGroups, StatisticsError
from src.models.enums import Alternative
from src.models.trial import StatResult

EXACT_MAX_TOTAL = 16


def _sample(values: Sequence[float], name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise EmptySample(f"Sample '{name}' is empty")
    return arr


def _tie_sum(pooled: np.ndarray) -> float:
    _, counts = np.unique(pooled, return_counts=True)
    return float(np.sum(counts.astype(float) ** 3 - counts))


@lru_cache(maxsize=None)
def u_distribution(n1: int, n2: int) -> tuple[int, ...]:
    """
    Number of rank arrangements giving each U from 0 to n1*n2.

    Built from f(n1, n2, u) = f(n1 - 1, n2, u - n2) + f(n1, n2 - 1, u).
    """
    if n1 == 0 or n2 == 0:
        return (1,)
    with_top_x = u_distribution(n1 - 1, n2)
    with_top_y = u_distribution(n1, n2 - 1)
    counts = [0] * (n1 * n2 + 1)
    for u, c in enumerate(with_top_x):
        counts[u + n2] += c
    for u, c in enumerate(with_top_y):
        counts[u] += c
    return tuple(counts)


def _exact_p(u: float, n1: int, n2: int, alternative: Alternative) -> float:
    counts = u_distribution(n1, n2)
    total = math.comb(n1 + n2, n1)
    k = int(round(u))
    p_less = sum(counts[: k + 1]) / total
    p_greater = sum(counts[k:]) / total
    if alternative is Alternative.LESS:
        return p_less
    if alternative is Alternative.GREATER:
        return p_greater
    return min(1.0, 2.0 * min(p_less, p_greater))


def _normal_p(
    u: float, n1: int, n2: int, tie_sum: float, alternative: Alternative
) -> tuple[float, float]:
    """(z, p) with tie and continuity correction."""
    n = n1 + n2
    mu = n1 * n2 / 2.0
    variance = (n1 * n2 / 12.0) * ((n + 1) - tie_sum / (n * (n - 1))) if n > 1 else 0.0
    if variance <= 0.0:
        return 0.0, 1.0
    sigma = math.sqrt(variance)
    if alternative is Alternative.LESS:
        z = (u - mu + 0.5) / sigma
        return z, float(stats.norm.cdf(z))
    if alternative is Alternative.GREATER:
        z = (u - mu - 0.5) / sigma
        return z, float(stats.norm.sf(z))
    z = max(abs(u - mu) - 0.5, 0.0) / sigma
    return z, float(min(1.0, 2.0 * stats.norm.sf(z)))


def mann_whitney_u(
    a: Sequence[float],
    b: Sequence[float],
    alternative: Alternative = Alternative.TWO_SIDED,
    labels: tuple[str, str] = ("a", "b"),
) -> StatResult:
    """
    Mann-Whitney U test of a against b.

    The statistic is U of the first sample, the number of pairs where a
    beats b (ties count half). "less" tests whether a tends to be smaller.

    Raises:
        EmptySample: If either sample is empty
    """
    x = _sample(a, labels[0])
    y = _sample(b, labels[1])
    n1, n2 = len(x), len(y)
    pooled = np.concatenate([x, y])
    ranks = stats.rankdata(pooled, method="average")
    u_a = float(ranks[:n1].sum() - n1 * (n1 + 1) / 2.0)
    u_b = n1 * n2 - u_a
    tie_sum = _tie_sum(pooled)

    details: dict[str, object] = {"U_a": u_a, "U_b": u_b, "alternative": alternative.value}
    if n1 + n2 <= EXACT_MAX_TOTAL and tie_sum == 0.0:
        p = _exact_p(u_a, n1, n2, alternative)
        details["method"] = "exact"
    else:
        z, p = _normal_p(u_a, n1, n2, tie_sum, alternative)
        details["method"] = "normal"
        details["z"] = z

    return StatResult(
        test_name="mann-whitney",
        statistic=u_a,
        p_value=min(max(p, 0.0), 1.0),
        group_labels=tuple(labels),
        n_per_group=(n1, n2),
        details=details,
    )


def kruskal_wallis(
    groups: Sequence[Sequence[float]], labels: Sequence[str] | None = None
) -> StatResult:
    """
    Kruskal-Wallis H test with tie correction; p from chi-squared with
    k - 1 degrees of freedom.

    Raises:
        InsufficientGroups: Fewer than two groups
        EmptySample: A group is empty
    """
    if len(groups) < 2:
        raise InsufficientGroups(f"Need at least 2 groups, got {len(groups)}")
    names = list(labels) if labels is not None else [f"g{i + 1}" for i in range(len(groups))]
    samples = [_sample(g, name) for g, name in zip(groups, names)]
    sizes = [len(s) for s in samples]
    pooled = np.concatenate(samples)
    n = len(pooled)
    k = len(samples)

    ranks = stats.rankdata(pooled, method="average")
    bounds = np.cumsum([0, *sizes])
    rank_sums = [ranks[lo:hi].sum() for lo, hi in zip(bounds[:-1], bounds[1:])]
    h = 12.0 / (n * (n + 1)) * sum(r * r / m for r, m in zip(rank_sums, sizes)) - 3.0 * (n + 1)

    correction = 1.0 - _tie_sum(pooled) / (n**3 - n) if n > 1 else 0.0
    if correction <= 0.0:
        h, p = 0.0, 1.0
    else:
        h = max(h / correction, 0.0)
        p = float(stats.chi2.sf(h, k - 1))

    return StatResult(
        test_name="kruskal-wallis",
        statistic=float(h),
        p_value=min(max(p, 0.0), 1.0),
        group_labels=tuple(names),
        n_per_group=tuple(sizes),
        details={"df": k - 1},
    )


def spearman_rho(
    x: Sequence[float], y: Sequence[float], labels: tuple[str, str] = ("x", "y")
) -> StatResult:
    """
    Spearman rank correlation of paired samples.

    A constant sample has no ranking; rho is reported as 0 with p = 1.

    Raises:
        EmptySample: If a sample is empty
        StatisticsError: If the samples differ in length or have fewer than 2 pairs
    """
    xs = _sample(x, labels[0])
    ys = _sample(y, labels[1])
    if len(xs) != len(ys):
        raise StatisticsError(f"Paired samples differ in length: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise StatisticsError("Correlation needs at least 2 pairs")

    if np.all(xs == xs[0]) or np.all(ys == ys[0]):
        rho, p = 0.0, 1.0
    else:
        statistic, pvalue = stats.spearmanr(xs, ys)
        rho, p = float(statistic), float(pvalue)
        if math.isnan(p):
            p = 0.0 if abs(rho) == 1.0 else 1.0

    return StatResult(
        test_name="spearman",
        statistic=rho,
        p_value=min(max(p, 0.0), 1.0),
        group_labels=tuple(labels),
        n_per_group=(len(xs), len(ys)),
    )
