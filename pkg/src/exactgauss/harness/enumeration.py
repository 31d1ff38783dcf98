"""Exhaustive walk over all bit strings up to a depth, with exact dyadic masses.

Each fixture is rerun on every prefix with a scripted generator.  A run that
asks for a bit beyond its prefix is split into the two one-bit extensions;
at the depth limit its mass is counted as undecided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable

from ..bernoulli import bern_exp_neg_rational
from ..randcore import OutOfBits, RandomSource, ScriptedBits, selector_c

MAX_DEPTH = 30


class ResourceError(RuntimeError):
    pass


FIXTURES: dict[str, tuple[Callable[[RandomSource], Hashable], dict[Hashable, float]]] = {
    "bern_exp_half": (
        lambda src: bern_exp_neg_rational(Fraction(1, 2), src),
        {True: math.exp(-0.5), False: 1 - math.exp(-0.5)},
    ),
    "selector_c4": (
        lambda src: selector_c(4, src),
        {-1: 0.25, 0: 0.25, 1: 0.5},
    ),
}


@dataclass
class EnumerationResult:
    fixture: str
    depth: int
    masses: dict = field(default_factory=dict)
    undecided: Fraction = Fraction(0)
    target: dict = field(default_factory=dict)
    paths: int = 0

    def bounds(self, outcome) -> tuple[Fraction, Fraction]:
        low = self.masses.get(outcome, Fraction(0))
        return low, low + self.undecided

    @property
    def p_true_low(self) -> Fraction:
        return self.bounds(True)[0]

    @property
    def p_true_high(self) -> Fraction:
        return self.bounds(True)[1]

    def brackets(self) -> bool:
        return all(lo <= p <= hi for o, p in self.target.items() for lo, hi in [self.bounds(o)])


def enumerate_exact(fixture: str, depth: int) -> EnumerationResult:
    """Exact outcome masses of ``fixture`` over every bit string of length <= depth."""
    if depth > MAX_DEPTH:
        raise ResourceError(f"depth {depth} exceeds the limit of {MAX_DEPTH}")
    if depth < 0:
        raise ValueError("depth must be non-negative")
    try:
        run, target = FIXTURES[fixture]
    except KeyError:
        raise ValueError(f"unknown fixture {fixture!r}; choose from {sorted(FIXTURES)}") from None
    result = EnumerationResult(fixture, depth, target=target)
    stack = [(0, 0)]
    while stack:
        prefix, length = stack.pop()
        src = RandomSource(0, 1, rng=ScriptedBits(prefix, length))
        try:
            out = run(src)
        except OutOfBits:
            if length < depth:
                stack.append((prefix << 1, length + 1))
                stack.append(((prefix << 1) | 1, length + 1))
            else:
                result.undecided += Fraction(1, 1 << length)
            continue
        result.paths += 1
        result.masses[out] = result.masses.get(out, Fraction(0)) + Fraction(1, 1 << length)
    return result
