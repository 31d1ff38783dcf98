"""Monte Carlo measurements of sampler behaviour and randomness cost."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

from ..bernoulli import selector_restarts
from ..discrete import SAMPLERS as DPLUS_SAMPLERS, SigmaParam
from ..normal import ALGORITHMS
from ..randcore import RandomSource


@dataclass
class BernoulliRun:
    n: int
    trues: int
    deviates: int
    bits: int

    @property
    def p_true(self) -> float:
        return self.trues / self.n

    @property
    def mean_deviates(self) -> float:
        return self.deviates / self.n


def measure_bernoulli(
    factory: Callable,
    make_args: Callable[[RandomSource], tuple],
    n: int,
    seed: int,
    digit_size: int = 16,
) -> BernoulliRun:
    """Run ``factory(*make_args(src), src)`` n times.

    Deviates created by ``make_args`` (e.g. a fresh x) are not charged to the
    factory.
    """
    src = RandomSource(seed, digit_size)
    trues = deviates = bits = 0
    for _ in range(n):
        args = make_args(src)
        d0, b0 = src.deviates_created, src.bits_drawn
        trues += bool(factory(*args, src))
        deviates += src.deviates_created - d0
        bits += src.bits_drawn - b0
    return BernoulliRun(n, trues, deviates, bits)


@dataclass
class DplusRun:
    variant: str
    sigma: SigmaParam
    n: int
    draws: int
    attempts: int
    values: list[int] = field(repr=False, default_factory=list)

    @property
    def draws_per_sample(self) -> float:
        return self.draws / self.n

    @property
    def accept_rate(self) -> float:
        return self.n / self.attempts

    def freq(self, k: int) -> float:
        return sum(1 for v in self.values if v == k) / self.n


def measure_dplus(variant: str, sigma: SigmaParam, n: int, seed: int, digit_size: int = 16) -> DplusRun:
    sample = DPLUS_SAMPLERS[variant]
    src = RandomSource(seed, digit_size)
    draws = attempts = 0
    values = []
    for _ in range(n):
        s = sample(sigma, src)
        draws += s.bern_draws
        attempts += s.attempts
        values.append(s.value)
    return DplusRun(variant, sigma, n, draws, attempts, values)


@dataclass
class NormalRun:
    algorithm: str
    seed: int
    digit_size: int
    n: int = 0
    attempts: int = 0
    step4_runs: int = 0
    deviates_step4: int = 0
    bern_draws: int = 0
    deviates_total: int = 0
    bits_total: int = 0
    selector_calls: int = 0
    samples: list = field(repr=False, default_factory=list)

    @property
    def mean_attempts(self) -> float:
        return self.attempts / self.n

    @property
    def step4_per_run(self) -> float:
        """Deviates per acceptance test of x (per attempt that reaches it)."""
        return self.deviates_step4 / self.step4_runs

    @property
    def step4_per_sample(self) -> float:
        return self.deviates_step4 / self.n

    @property
    def draws_per_k(self) -> float:
        """exp(-1/2) coins per k value produced by the discrete step."""
        return self.bern_draws / self.step4_runs

    @property
    def mean_bits(self) -> float:
        return self.bits_total / self.n

    @property
    def mean_deviates(self) -> float:
        return self.deviates_total / self.n


def measure_normal(
    algorithm: str,
    seed: int,
    digit_size: int = 1,
    n: int | None = None,
    min_step4_runs: int | None = None,
    keep_samples: bool = False,
) -> NormalRun:
    """Draw n samples, or draw until ``min_step4_runs`` x-acceptance tests have run."""
    if (n is None) == (min_step4_runs is None):
        raise ValueError("give exactly one of n and min_step4_runs")
    sample = ALGORITHMS[algorithm]
    src = RandomSource(seed, digit_size)
    run = NormalRun(algorithm, seed, digit_size)
    while (run.n < n) if n is not None else (run.step4_runs < min_step4_runs):
        s = sample(src)
        run.n += 1
        run.attempts += s.attempts
        run.step4_runs += s.step4_runs
        run.deviates_step4 += s.deviates_step4
        run.bern_draws += s.bern_draws
        run.deviates_total += s.deviates_total
        run.bits_total += s.bits_total
        run.selector_calls += s.selector_calls
        if keep_samples:
            run.samples.append(s.sample)
    return run


def merge_normal_runs(runs: Sequence[NormalRun]) -> NormalRun:
    out = NormalRun(runs[0].algorithm, runs[0].seed, runs[0].digit_size)
    for r in runs:
        for name in ("n", "attempts", "step4_runs", "deviates_step4", "bern_draws",
                     "deviates_total", "bits_total", "selector_calls"):
            setattr(out, name, getattr(out, name) + getattr(r, name))
    return out


def restart_histogram(k: int, x, n: int, seed: int, digit_size: int = 16) -> Counter:
    """Histogram of restart counts of the (2k+2)-selector coin at a fixed x."""
    src = RandomSource(seed, digit_size)
    return Counter(selector_restarts(k, x, src) for _ in range(n))
