"""Exact standard normal samplers returning lazy samples sign * (k + x).

``sample_normal_karney`` accepts x with the k+1 fold (2k+2)-selector coin;
``sample_normal_improved`` splits the same probability into exp(-kx) and
exp(-x^2/2).  Both restart from a fresh k on any rejection.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bernoulli import bern_exp_neg_half_x_sq, bern_exp_neg_kx, step4_karney_calls
from .discrete import SIGMA_ONE, sample_dplus_improved, sample_dplus_karney
from .randcore import ExactSample, RandomSource, UniformDeviate, random_sign


@dataclass(slots=True)
class NormalSampleStats:
    """One accepted sample plus what it cost.

    ``attempts`` counts k proposals (including those rejected while sampling
    k); ``step4_runs`` counts proposals that reached the x acceptance test,
    and ``deviates_step4`` sums the deviates spent inside those tests, not
    counting the deviate that is x itself.
    """

    sample: ExactSample
    attempts: int
    step4_runs: int
    deviates_step4: int
    bern_draws: int
    deviates_total: int
    bits_total: int
    selector_calls: int = 0


def sample_normal_karney(src: RandomSource) -> NormalSampleStats:
    dev0 = src.deviates_created
    bits0 = src.bits_drawn
    attempts = runs = step4 = draws = calls = 0
    while True:
        d = sample_dplus_karney(SIGMA_ONE, src)
        attempts += d.attempts
        draws += d.bern_draws
        k = d.value
        x = UniformDeviate(src)
        before = src.deviates_created
        accepted, n = step4_karney_calls(k, x, src)
        step4 += src.deviates_created - before
        calls += n
        runs += 1
        if accepted:
            break
    sample = ExactSample(random_sign(src), k, x)
    return NormalSampleStats(
        sample,
        attempts,
        runs,
        step4,
        draws,
        src.deviates_created - dev0,
        src.bits_drawn - bits0,
        calls,
    )


def sample_normal_improved(src: RandomSource, dgauss_variant: str = "improved") -> NormalSampleStats:
    """``dgauss_variant`` picks how k is drawn: "karney" (a) or "improved" (b)."""
    if dgauss_variant == "improved":
        sample_k = sample_dplus_improved
    elif dgauss_variant == "karney":
        sample_k = sample_dplus_karney
    else:
        raise ValueError(f"unknown dgauss variant {dgauss_variant!r}")
    dev0 = src.deviates_created
    bits0 = src.bits_drawn
    attempts = runs = step4 = draws = 0
    while True:
        d = sample_k(SIGMA_ONE, src)
        attempts += d.attempts
        draws += d.bern_draws
        k = d.value
        x = UniformDeviate(src)
        before = src.deviates_created
        accepted = bern_exp_neg_kx(k, x, src) and bern_exp_neg_half_x_sq(x, src)
        step4 += src.deviates_created - before
        runs += 1
        if accepted:
            break
    sample = ExactSample(random_sign(src), k, x)
    return NormalSampleStats(
        sample,
        attempts,
        runs,
        step4,
        draws,
        src.deviates_created - dev0,
        src.bits_drawn - bits0,
    )


# algorithm ids used by the harness
ALGORITHMS = {
    "karney": sample_normal_karney,
    "improved-a": lambda src: sample_normal_improved(src, "karney"),
    "improved": lambda src: sample_normal_improved(src, "improved"),
}
