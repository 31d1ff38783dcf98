"""Predicted-versus-measured tables pairing oracle values with Monte Carlo runs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .. import oracle
from ..bernoulli import (
    bern_alg3,
    bern_exp_neg_deviate,
    bern_exp_neg_half_x_sq,
    bern_exp_neg_rational,
    bern_exp_neg_xy,
    bern_step4_karney,
    bern_step34_improved,
)
from ..discrete import SIGMA_ONE, pmf_dplus
from ..randcore import derive_seed
from .measure import measure_bernoulli, measure_dplus, measure_normal, merge_normal_runs

SUITES = ("bernoulli", "dgauss", "normal")
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class VerifyRecord:
    quantity: str
    predicted: float
    measured: float
    tolerance: float
    soft: bool = False

    @property
    def passed(self) -> bool:
        return abs(self.predicted - self.measured) <= self.tolerance

    def line(self) -> str:
        flag = "PASS" if self.passed else ("WARN" if self.soft else "FAIL")
        return (
            f"{flag:4}  {self.quantity:<44} predicted={self.predicted:<11.6g} "
            f"measured={self.measured:<11.6g} tol={self.tolerance:.3g}"
        )


def binomial_tol(p: float, n: int, k: float = 4.0) -> float:
    return k * math.sqrt(p * (1 - p) / n)


def _shards(seeds: Sequence[int], n: int) -> list[tuple[int, int]]:
    per = max(1, n // len(seeds))
    return [(s, per) for s in seeds]


def _pooled_bernoulli(factory, make_args, n, seeds):
    runs = [measure_bernoulli(factory, make_args, m, s) for s, m in _shards(seeds, n)]
    total = sum(r.n for r in runs)
    return (
        sum(r.trues for r in runs) / total,
        sum(r.deviates for r in runs) / total,
        total,
    )


def _fixed(*args):
    return lambda src: args


def _fresh(src):
    return (src.fresh(),)


def suite_bernoulli(n: int, seeds: Sequence[int]) -> list[VerifyRecord]:
    out = []

    def add(name, factory, make_args, p, cost, cost_tol, relative=False):
        pt, md, total = _pooled_bernoulli(factory, make_args, n, seeds)
        out.append(VerifyRecord(f"{name} P(true)", p, pt, binomial_tol(p, total)))
        if cost is not None:
            out.append(VerifyRecord(f"{name} mean deviates", cost, md, cost_tol * (cost if relative else 1)))

    add("exp(-1/2)", bern_exp_neg_rational, _fixed(HALF), math.exp(-0.5),
        oracle.expected_deviates_exp(0.5), 0.01)
    add("exp(-x), x uniform", bern_exp_neg_deviate, _fresh, 1 - math.exp(-1), math.e - 1, 0.01)
    add("exp(-xy), x=y=1/2", bern_exp_neg_xy, _fixed(HALF, HALF), math.exp(-0.25),
        oracle.alg6_cost(0.5, 0.5), 0.01, relative=True)
    add("exp(-x^2/2), x uniform", bern_exp_neg_half_x_sq, _fresh,
        math.sqrt(math.pi / 2) * math.erf(1 / math.sqrt(2)),
        oracle.adaptive_simpson(oracle.half_x_sq_cost, 0, 1), 0.01)
    for k, x in ((0, Fraction(1)), (1, HALF), (2, HALF)):
        xf = float(x)
        cost = oracle.alg3_cost_k0(xf) if k == 0 else oracle.alg3_cost(k, xf)
        add(f"selector coin k={k} x={x}", bern_alg3, _fixed(k, x),
            math.exp(-xf * (2 * k + xf) / (2 * k + 2)), cost, 0.01, relative=True)
    target = math.exp(-0.625)
    add("k+1 fold selector coin k=1 x=1/2", bern_step4_karney, _fixed(1, HALF), target, None, 0)
    add("exp(-kx)exp(-x^2/2) k=1 x=1/2", bern_step34_improved, _fixed(1, HALF), target, None, 0)
    return out


def suite_dgauss(n: int, seeds: Sequence[int]) -> list[VerifyRecord]:
    out = []
    for variant, key in (("karney", "dplus_karney_per_sample"), ("improved", "dplus_improved_per_sample")):
        runs = [measure_dplus(variant, SIGMA_ONE, m, s) for s, m in _shards(seeds, n)]
        total = sum(r.n for r in runs)
        draws = sum(r.draws for r in runs) / total
        accept = total / sum(r.attempts for r in runs)
        p0 = sum(r.freq(0) * r.n for r in runs) / total
        out.append(VerifyRecord(f"D+ {variant}: coins per sample", oracle.lookup(key).value, draws, 0.02))
        out.append(VerifyRecord(f"D+ {variant}: acceptance per proposal",
                                oracle.acceptance_prob(1.0), accept, 0.002))
        pk0 = pmf_dplus(SIGMA_ONE, 0)
        out.append(VerifyRecord(f"D+ {variant}: P(k=0)", pk0, p0, binomial_tol(pk0, total)))
    return out


def normal_runs(algorithm: str, n: int, seeds: Sequence[int], digit_size: int = 1):
    return merge_normal_runs([measure_normal(algorithm, s, digit_size, n=m) for s, m in _shards(seeds, n)])


def suite_normal(n: int, seeds: Sequence[int]) -> list[VerifyRecord]:
    karney = normal_runs("karney", n, seeds)
    improved_a = normal_runs("improved-a", n, seeds)
    improved = normal_runs("improved", n, seeds)
    rate = oracle.rejection_rate()
    d4 = oracle.step4_cost_karney()
    d34 = oracle.step34_cost_improved()
    out = [
        VerifyRecord("karney: proposals per sample", rate, karney.mean_attempts, 0.02),
        VerifyRecord("improved: proposals per sample", rate, improved.mean_attempts, 0.02),
        VerifyRecord("karney: x-test deviates per test", d4, karney.step4_per_run, 0.02),
        VerifyRecord("improved-a: x-test deviates per test", d34, improved_a.step4_per_run, 0.02),
        VerifyRecord("improved: x-test deviates per test", d34, improved.step4_per_run, 0.02),
        VerifyRecord("improved-a: coins per k", oracle.dplus_cost_karney()["per_sample"], improved_a.draws_per_k, 0.02),
        VerifyRecord("improved: coins per k", oracle.dplus_cost_improved()["per_sample"], improved.draws_per_k, 0.02),
        VerifyRecord("karney: random bits per sample (bits=1)", 30.0, karney.mean_bits, 2.0, soft=True),
    ]
    # per-sample reading of the same cost; informational
    out.append(VerifyRecord("karney: x-test deviates per sample", d4 * oracle.x_tests_per_sample(),
                            karney.step4_per_sample, 0.03, soft=True))
    out.append(VerifyRecord("improved: x-test deviates per sample", d34 * oracle.x_tests_per_sample(),
                            improved.step4_per_sample, 0.03, soft=True))
    return out


def run_suite(suite: str, n: int, seeds: Sequence[int]) -> list[VerifyRecord]:
    if suite == "all":
        return [r for s in SUITES for r in run_suite(s, n, seeds)]
    return {"bernoulli": suite_bernoulli, "dgauss": suite_dgauss, "normal": suite_normal}[suite](n, seeds)


def default_seeds(seed: int, shards: int) -> list[int]:
    return [derive_seed(seed, i) for i in range(shards)]
