"""Exact samplers for the discrete Gaussian over the non-negative integers.

Both samplers target P(k) proportional to exp(-k^2 / (2 sigma^2)) for a
rational sigma > sqrt(2)/2 and use only exp(-q) coins with q = 1/(2 sigma^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction

from .bernoulli import exp_neg_ratio
from .randcore import RandomSource


@dataclass(frozen=True)
class SigmaParam:
    sigma: Fraction

    def __post_init__(self):
        sigma = Fraction(self.sigma)
        object.__setattr__(self, "sigma", sigma)
        num, den = sigma.numerator, sigma.denominator
        # sigma > sqrt(2)/2  <=>  2 num^2 > den^2
        if num <= 0 or 2 * num * num <= den * den:
            raise ValueError(f"sigma must exceed sqrt(2)/2, got {sigma}")

    @cached_property
    def q(self) -> Fraction:
        """1 / (2 sigma^2)."""
        return 1 / (2 * self.sigma**2)

    @cached_property
    def q_ratio(self) -> tuple[int, int]:
        q = self.q
        return q.numerator, q.denominator

    @classmethod
    def parse(cls, text: str) -> SigmaParam:
        return cls(Fraction(text))


SIGMA_ONE = SigmaParam(Fraction(1))


@dataclass(frozen=True, slots=True)
class DiscreteSampleStats:
    value: int
    bern_draws: int
    attempts: int


def sample_dplus_karney(p: SigmaParam, src: RandomSource) -> DiscreteSampleStats:
    """Geometric proposal then acceptance with probability exp(-q k(k-1)).

    k is the number of true coins before the first false; k(k-1) further
    coins must all be true, otherwise the whole attempt restarts.
    """
    a, b = p.q_ratio
    draws = 0
    attempts = 0
    while True:
        attempts += 1
        k = 0
        while True:
            draws += 1
            if not exp_neg_ratio(a, b, src):
                break
            k += 1
        for _ in range(k * (k - 1)):
            draws += 1
            if not exp_neg_ratio(a, b, src):
                break
        else:
            return DiscreteSampleStats(k, draws, attempts)


def sample_dplus_improved(p: SigmaParam, src: RandomSource) -> DiscreteSampleStats:
    """Interleaved proposal and acceptance.

    After the first two coins, growing k from j-1 to j costs 2(j-1) acceptance
    coins followed by one continuation coin; a false acceptance coin restarts,
    a false continuation coin returns the current k.  The rejected proposal
    never pays for the continuation coin that would have fixed its value.
    """
    a, b = p.q_ratio
    draws = 0
    attempts = 0
    while True:
        attempts += 1
        draws += 1
        if not exp_neg_ratio(a, b, src):
            return DiscreteSampleStats(0, draws, attempts)
        draws += 1
        if not exp_neg_ratio(a, b, src):
            return DiscreteSampleStats(1, draws, attempts)
        k = 2
        rejected = False
        while not rejected:
            for _ in range(2 * (k - 1)):
                draws += 1
                if not exp_neg_ratio(a, b, src):
                    rejected = True
                    break
            else:
                draws += 1
                if not exp_neg_ratio(a, b, src):
                    return DiscreteSampleStats(k, draws, attempts)
                k += 1


SAMPLERS = {
    "karney": sample_dplus_karney,
    "improved": sample_dplus_improved,
}


def rho_sum(sigma: float, tol: float = 1e-15) -> float:
    total = 0.0
    j = 0
    while True:
        term = math.exp(-j * j / (2 * sigma * sigma))
        total += term
        if term < tol:
            return total
        j += 1


def pmf_dplus(p: SigmaParam | float, k: int, tol: float = 1e-15) -> float:
    """exp(-k^2/(2 sigma^2)) normalized over the non-negative integers (float)."""
    sigma = float(p.sigma) if isinstance(p, SigmaParam) else float(p)
    if tol <= 0:
        raise ValueError("tol must be positive")
    return math.exp(-k * k / (2 * sigma * sigma)) / rho_sum(sigma, tol)
