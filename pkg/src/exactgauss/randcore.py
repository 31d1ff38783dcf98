"""Lazy uniform deviates, exact comparisons and randomness accounting.

A deviate is a uniform number in (0, 1) whose binary expansion is only
materialized as far as some comparison needs it.  Digits are drawn from the
owning :class:`RandomSource` in batches of ``digit_size`` bits, but the
stored expansion is bit-addressable so that scaled views (``halve``) can be
compared exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

DIGIT_SIZES = (1, 4, 8, 16)
MAX_SEED = 1 << 64


class ConfigurationError(ValueError):
    """Raised for an unsupported source configuration."""


class Counters(NamedTuple):
    deviates: int
    digits: int
    bits: int

    def __sub__(self, other: Counters) -> Counters:  # type: ignore[override]
        return Counters(
            self.deviates - other.deviates,
            self.digits - other.digits,
            self.bits - other.bits,
        )

    def __add__(self, other: Counters) -> Counters:  # type: ignore[override]
        return Counters(
            self.deviates + other.deviates,
            self.digits + other.digits,
            self.bits + other.bits,
        )


class RandomSource:
    """Seeded supplier of raw random bits with deviate/digit/bit counters.

    ``rng`` may be any object with a ``getrandbits(k)`` method; by default a
    Mersenne Twister seeded with ``seed`` is used.
    """

    __slots__ = (
        "seed",
        "digit_size",
        "deviates_created",
        "digits_drawn",
        "standalone_bits",
        "_getrandbits",
    )

    def __init__(self, seed: int, digit_size: int = 1, rng=None):
        if digit_size not in DIGIT_SIZES:
            raise ConfigurationError(
                f"digit_size must be one of {DIGIT_SIZES}, got {digit_size!r}"
            )
        if not 0 <= seed < MAX_SEED:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = seed
        self.digit_size = digit_size
        self.deviates_created = 0
        self.digits_drawn = 0
        self.standalone_bits = 0
        if rng is None:
            rng = random.Random(seed)
        self._getrandbits = rng.getrandbits

    @property
    def bits_drawn(self) -> int:
        return self.digits_drawn * self.digit_size + self.standalone_bits

    def counters(self) -> Counters:
        return Counters(self.deviates_created, self.digits_drawn, self.bits_drawn)

    def fresh(self) -> UniformDeviate:
        return UniformDeviate(self)

    def bit(self) -> int:
        self.standalone_bits += 1
        return self._getrandbits(1)

    def __repr__(self) -> str:
        return (
            f"RandomSource(seed={self.seed}, digit_size={self.digit_size}, "
            f"deviates={self.deviates_created}, digits={self.digits_drawn}, "
            f"bits={self.bits_drawn})"
        )


class OutOfBits(Exception):
    """A scripted generator was asked for more bits than it holds."""


class ScriptedBits:
    """Generator replaying a fixed bit string; raises :class:`OutOfBits` past its end."""

    def __init__(self, bits: int | str, length: int | None = None):
        if isinstance(bits, str):
            length = len(bits)
            bits = int(bits, 2) if bits else 0
        self.value = bits
        self.length = length or 0
        self.pos = 0

    def getrandbits(self, k: int) -> int:
        end = self.pos + k
        if end > self.length:
            raise OutOfBits(end)
        out = (self.value >> (self.length - end)) & ((1 << k) - 1)
        self.pos = end
        return out


def new_source(seed: int, digit_size: int = 1) -> RandomSource:
    return RandomSource(seed, digit_size)


def derive_seed(seed: int, shard: int) -> int:
    """Seed for shard ``shard`` of a run seeded with ``seed`` (splitmix64 step)."""
    z = (seed + (shard + 1) * 0x9E3779B97F4A7C15) % MAX_SEED
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) % MAX_SEED
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) % MAX_SEED
    return z ^ (z >> 31)


class UniformDeviate:
    """A uniform deviate in (0, 1) known to ``nbits`` leading binary digits.

    ``bits`` holds those digits as an integer, most significant first, so the
    deviate lies in ``[bits / 2**nbits, (bits + 1) / 2**nbits)``.
    """

    __slots__ = ("src", "bits", "nbits")

    def __init__(self, src: RandomSource):
        self.src = src
        self.bits = 0
        self.nbits = 0
        src.deviates_created += 1

    def extend(self) -> None:
        src = self.src
        d = src.digit_size
        self.bits = (self.bits << d) | src._getrandbits(d)
        self.nbits += d
        src.digits_drawn += 1

    @property
    def ndigits(self) -> int:
        return self.nbits // self.src.digit_size

    def __repr__(self) -> str:
        if not self.nbits:
            return "UniformDeviate(0.…)"
        return f"UniformDeviate(0.{self.bits:0{self.nbits}b}…)"


class ScaledDeviate:
    """The value ``parent / 2**shift``; reads and extends the parent's digits."""

    __slots__ = ("parent", "shift")

    def __init__(self, parent: UniformDeviate, shift: int = 1):
        self.parent = parent
        self.shift = shift

    @property
    def bits(self) -> int:
        return self.parent.bits

    @property
    def nbits(self) -> int:
        return self.parent.nbits + self.shift

    def extend(self) -> None:
        self.parent.extend()

    def __repr__(self) -> str:
        return f"ScaledDeviate({self.parent!r}, shift={self.shift})"


Lazy = Union[UniformDeviate, ScaledDeviate]
Comparable = Union[UniformDeviate, ScaledDeviate, Fraction]


def halve(u: Comparable) -> Comparable:
    """u/2 without drawing randomness: a one-bit right shift of the expansion."""
    if isinstance(u, Fraction):
        return u / 2
    if isinstance(u, ScaledDeviate):
        return ScaledDeviate(u.parent, u.shift + 1)
    return ScaledDeviate(u, 1)


def less_than_ratio(u: Lazy, a: int, b: int) -> bool:
    """Exact test of ``u < a/b`` for ``0 < a/b <= 1``.

    The binary expansion of a/b is produced by long division alongside the
    digits of u; u is extended only while the two expansions agree.
    """
    n = u.nbits
    qn, r = divmod(a << n, b)
    while True:
        ub = u.bits
        if ub != qn:
            return ub < qn
        if not r:
            # a/b is the left end of u's interval, so u > a/b almost surely
            return False
        u.extend()
        m = u.nbits
        d = m - n
        n = m
        t, r = divmod(r << d, b)
        qn = (qn << d) + t


def less_than_rational(u: Lazy, q: Fraction) -> bool:
    """Exact test of ``u < q`` for a rational ``0 < q < 1``."""
    return less_than_ratio(u, q.numerator, q.denominator)


def less_than_deviate(u: Lazy, v: Lazy) -> bool:
    """Exact test of ``u < v`` between two lazy values.

    Only the shorter expansion is extended while the common prefix agrees;
    ties (probability zero) keep drawing.
    """
    while True:
        un = u.nbits
        vn = v.nbits
        if un < vn:
            ub = u.bits
            vb = v.bits >> (vn - un)
            if ub != vb:
                return ub < vb
            u.extend()
        elif un > vn:
            ub = u.bits >> (un - vn)
            vb = v.bits
            if ub != vb:
                return ub < vb
            v.extend()
        else:
            ub = u.bits
            vb = v.bits
            if ub != vb:
                return ub < vb
            u.extend()


def less_than(u: Comparable, v: Comparable) -> bool:
    """Exact ``u < v`` for any mix of lazy deviates, scaled views and rationals."""
    if isinstance(v, Fraction):
        if isinstance(u, Fraction):
            return u < v
        return less_than_ratio(u, v.numerator, v.denominator)
    if isinstance(u, Fraction):
        # u == v has probability zero
        return not less_than_ratio(v, u.numerator, u.denominator)
    return less_than_deviate(u, v)


def selector_c(m: int, src: RandomSource) -> int:
    """Random selector returning -1, 0, +1 with probabilities 1/m, 1/m, 1 - 2/m.

    One comparison ``u < 2/m`` picks {-1, 0} versus +1, then a raw bit splits
    -1 from 0.  For m == 2 the comparison is certain, so only the bit is drawn.
    """
    if m < 2 or m % 2:
        raise ValueError(f"selector needs an even m >= 2, got {m}")
    if m > 2 and not less_than_ratio(UniformDeviate(src), 2, m):
        return 1
    return -src.bit()


def random_sign(src: RandomSource) -> int:
    return 1 - 2 * src.bit()


@dataclass
class ExactSample:
    """The value ``sign * (k + frac)`` with ``frac`` a lazy deviate."""

    sign: int
    k: int
    frac: UniformDeviate

    def finalize(self, precision: int) -> Fraction:
        return finalize(self, precision)


def truncated_bits(u: UniformDeviate, precision: int) -> int:
    """The first ``precision`` bits of u, drawing more digits if needed."""
    if precision < 1:
        raise ValueError(f"precision must be >= 1, got {precision}")
    while u.nbits < precision:
        u.extend()
    return u.bits >> (u.nbits - precision)


def finalize(x: ExactSample | UniformDeviate, precision: int) -> Fraction:
    """Dyadic rational ``sign * (k + frac)`` with frac truncated to ``precision`` bits."""
    if isinstance(x, ExactSample):
        sign, k, frac = x.sign, x.k, x.frac
    else:
        sign, k, frac = 1, 0, x
    m = truncated_bits(frac, precision)
    return Fraction(sign * ((k << precision) + m), 1 << precision)
