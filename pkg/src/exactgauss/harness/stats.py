"""Goodness-of-fit checks for the samplers (chi-square and Kolmogorov-Smirnov)."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from ..discrete import SigmaParam, pmf_dplus
from ..randcore import RandomSource, finalize

ALPHA = 0.001
# asymptotic Kolmogorov quantile at 1 - ALPHA
KS_CRITICAL = 1.949
MIN_EXPECTED = 5.0
DGAUSS_BINS = 6  # k = 0..5, plus a tail bin


@dataclass(frozen=True)
class TestResult:
    name: str
    statistic: float
    critical: float
    passed: bool
    n: int
    seed: int | None = None
    dof: int | None = None


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2))


def merge_sparse_bins(expected: list[float], observed: list[int]) -> tuple[list[float], list[int]]:
    """Fold trailing bins into their left neighbour until every expected count is >= 5."""
    expected = list(expected)
    observed = list(observed)
    while len(expected) > 2 and expected[-1] < MIN_EXPECTED:
        e, o = expected.pop(), observed.pop()
        expected[-1] += e
        observed[-1] += o
    return expected, observed


def chi2_gof(observed: Sequence[int], probs: Sequence[float], name: str = "chi2", seed=None) -> TestResult:
    n = int(sum(observed))
    if n <= 0:
        raise ValueError("need at least one observation")
    expected, obs = merge_sparse_bins([p * n for p in probs], list(observed))
    stat = sum((o - e) ** 2 / e for o, e in zip(obs, expected))
    dof = len(expected) - 1
    critical = float(stats.chi2.ppf(1 - ALPHA, dof))
    return TestResult(name, stat, critical, stat < critical, n, seed, dof)


def dgauss_bins(values: Sequence[int], nbins: int = DGAUSS_BINS) -> list[int]:
    counts = Counter(min(v, nbins) for v in values)
    return [counts.get(i, 0) for i in range(nbins + 1)]


def dgauss_probs(sigma: SigmaParam, nbins: int = DGAUSS_BINS) -> list[float]:
    head = [pmf_dplus(sigma, k) for k in range(nbins)]
    return head + [max(0.0, 1.0 - sum(head))]


def stat_chi2_dgauss(sampler: Callable, n: int, seed: int, sigma: SigmaParam, digit_size: int = 16) -> TestResult:
    """Chi-square fit of ``n`` draws of ``sampler(sigma, src)`` to the exact pmf."""
    if n <= 0:
        raise ValueError("n must be positive")
    src = RandomSource(seed, digit_size)
    values = [sampler(sigma, src).value for _ in range(n)]
    return chi2_gof(dgauss_bins(values), dgauss_probs(sigma), f"chi2 {sampler.__name__} sigma={sigma.sigma}", seed)


def chi2_two_sample(a: Sequence[int], b: Sequence[int], name: str = "chi2 two-sample") -> TestResult:
    """Homogeneity test of two binned samples, sparse tail bins merged."""
    a, b = list(a), list(b)
    while len(a) > 2 and (a[-1] + b[-1]) * min(sum(a), sum(b)) / (sum(a) + sum(b)) < MIN_EXPECTED:
        ta, tb = a.pop(), b.pop()
        a[-1] += ta
        b[-1] += tb
    res = stats.chi2_contingency(np.array([a, b]), correction=False)
    dof = len(a) - 1
    critical = float(stats.chi2.ppf(1 - ALPHA, dof))
    return TestResult(name, float(res.statistic), critical, bool(res.statistic < critical), sum(a) + sum(b), None, dof)


def ks_statistic(samples: Sequence[float], cdf: Callable[[float], float] = normal_cdf) -> float:
    xs = np.sort(np.asarray(samples, dtype=float))
    n = len(xs)
    f = np.array([cdf(x) for x in xs])
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def normal_floats(sampler: Callable, n: int, seed: int, precision: int = 53, digit_size: int = 16) -> list[float]:
    src = RandomSource(seed, digit_size)
    return [float(finalize(sampler(src).sample, precision)) for _ in range(n)]


def stat_ks_normal(sampler: Callable, n: int, seed: int, precision: int = 53, digit_size: int = 16) -> TestResult:
    """One-sample KS of finalized samples against the standard normal CDF."""
    if n <= 0:
        raise ValueError("n must be positive")
    xs = normal_floats(sampler, n, seed, precision, digit_size)
    return ks_one_sample(xs, seed=seed)


def ks_one_sample(xs: Sequence[float], name: str = "ks normal", seed=None) -> TestResult:
    n = len(xs)
    d = ks_statistic(xs)
    critical = KS_CRITICAL / math.sqrt(n)
    return TestResult(name, d, critical, d < critical, n, seed)


def ks_two_sample(a: Sequence[float], b: Sequence[float], name: str = "ks two-sample") -> TestResult:
    res = stats.ks_2samp(a, b)
    n, m = len(a), len(b)
    critical = KS_CRITICAL * math.sqrt((n + m) / (n * m))
    return TestResult(name, float(res.statistic), critical, bool(res.statistic < critical), n + m)


def k_marginal_probs(nbins: int = DGAUSS_BINS) -> list[float]:
    """Law of floor(|Z|) for standard normal Z: bins k = 0..nbins-1 plus a tail."""
    head = [2 * (normal_cdf(k + 1) - normal_cdf(k)) for k in range(nbins)]
    return head + [max(0.0, 1.0 - sum(head))]
