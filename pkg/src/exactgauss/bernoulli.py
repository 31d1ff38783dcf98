"""Exact Bernoulli factories for exponential probabilities.

Every factory takes a :class:`RandomSource` last and returns a plain bool on
the hot path.  Arguments named ``x``/``y`` are *comparable* values: a lazy
deviate, a scaled view of one, or an exact :class:`~fractions.Fraction` used
as a test fixture.  :func:`outcome` wraps any factory call with its cost.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .randcore import (
    Comparable,
    Counters,
    RandomSource,
    UniformDeviate,
    halve,
    less_than,
    less_than_deviate,
    less_than_ratio,
    selector_c,
)


@dataclass(frozen=True)
class BernoulliOutcome:
    value: bool
    cost: Counters


def outcome(factory, *args, src: RandomSource) -> BernoulliOutcome:
    """Run ``factory(*args, src)`` and attach the counter delta it caused."""
    before = src.counters()
    value = factory(*args, src)
    return BernoulliOutcome(bool(value), src.counters() - before)


def _descending_run(u: UniformDeviate, src: RandomSource) -> int:
    # u is the first deviate, already known to be below the bound
    n = 1
    while True:
        v = UniformDeviate(src)
        if not less_than_deviate(v, u):
            return n
        u = v
        n += 1


def exp_neg_ratio(a: int, b: int, src: RandomSource) -> bool:
    """True with probability exp(-a/b), 0 < a/b < 1.

    Hot path of both discrete samplers.  Deviates are kept as bare integer
    prefixes instead of objects, but digits are drawn in exactly the order
    ``bern_exp_neg_deviate(Fraction(a, b), src)`` would draw them.
    """
    getbits = src._getrandbits
    d = src.digit_size
    digits = 1
    ub = getbits(d)
    qn, r = divmod(a << d, b)
    while ub == qn and r:
        ub = (ub << d) | getbits(d)
        digits += 1
        t, r = divmod(r << d, b)
        qn = (qn << d) + t
    if ub >= qn:
        src.deviates_created += 1
        src.digits_drawn += digits
        return True
    un = digits * d
    deviates = 1
    while True:
        deviates += 1
        vb = getbits(d)
        vn = d
        digits += 1
        while True:
            if vn < un:
                ut = ub >> (un - vn)
                if vb != ut:
                    less = vb < ut
                    break
                vb = (vb << d) | getbits(d)
                vn += d
            elif vn > un:
                vt = vb >> (vn - un)
                if vt != ub:
                    less = vt < ub
                    break
                ub = (ub << d) | getbits(d)
                un += d
            else:
                if vb != ub:
                    less = vb < ub
                    break
                vb = (vb << d) | getbits(d)
                vn += d
            digits += 1
        if not less:
            src.deviates_created += deviates
            src.digits_drawn += digits
            # run length is deviates - 1
            return bool(deviates & 1)
        ub = vb
        un = vn


def bern_exp_neg_rational(q: Fraction, src: RandomSource) -> bool:
    """True with probability exp(-q) for rational 0 < q < 1.

    Draws u1, u2, ... while q > u1 > u2 > ...; the run length is even with
    probability exp(-q).  Uses exp(q) deviates on average.
    """
    q = Fraction(q)
    if not 0 < q < 1:
        raise ValueError(f"q must lie in (0, 1), got {q}")
    return exp_neg_ratio(q.numerator, q.denominator, src)


def exp_neg_run_length(x: Comparable, src: RandomSource) -> int:
    """Length n of the longest run x > u1 > u2 > ... > un."""
    u = UniformDeviate(src)
    if not less_than(u, x):
        return 0
    return _descending_run(u, src)


def bern_exp_neg_deviate(x: Comparable, src: RandomSource) -> bool:
    """True with probability exp(-x) given x; x may gain digits."""
    return not exp_neg_run_length(x, src) & 1


def bern_exp_neg_kx(k: int, x: Comparable, src: RandomSource) -> bool:
    """True with probability exp(-k x): k independent exp(-x) coins, stopping at the first false."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    for _ in range(k):
        if exp_neg_run_length(x, src) & 1:
            return False
    return True


def bern_exp_neg_xy(x: Comparable, y: Comparable, src: RandomSource) -> bool:
    """True with probability exp(-x y) for x, y in (0, 1).

    Extends the descending run x > u1 > u2 > ... one step at a time, each step
    also requiring a fresh v < y.  Expected deviates: (e^{xy}(1+y) - 1)/y,
    which is smaller with the larger operand in the ``y`` slot.
    """
    w = x
    n = 0
    while True:
        u = UniformDeviate(src)
        if not less_than(u, w):
            break
        if not less_than(UniformDeviate(src), y):
            break
        w = u
        n += 1
    return not n & 1


def bern_exp_neg_half_x_sq(x: Comparable, src: RandomSource) -> bool:
    """True with probability exp(-x^2/2), as exp(-(x/2) * x)."""
    return bern_exp_neg_xy(halve(x), x, src)


def selector_restarts(k: int, x: Comparable, src: RandomSource) -> int:
    """Number of restarts of the exp(-x(2k+x)/(2k+2)) coin; even means true.

    Each round needs a fresh z below the previous one (starting from x) and a
    selector draw C(2k+2): -1 stops, +1 continues, 0 continues only if a fresh
    r < x.  For k == 0 the selector is a single bit and is drawn before z.
    """
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    y = x
    n = 0
    if k == 0:
        while True:
            if selector_c(2, src) < 0:
                return n
            z = UniformDeviate(src)
            if not less_than(z, y):
                return n
            if not less_than(UniformDeviate(src), x):
                return n
            y = z
            n += 1
    m = 2 * k + 2
    while True:
        z = UniformDeviate(src)
        if not less_than(z, y):
            return n
        f = selector_c(m, src)
        if f < 0:
            return n
        if f == 0 and not less_than(UniformDeviate(src), x):
            return n
        y = z
        n += 1


def bern_alg3(k: int, x: Comparable, src: RandomSource) -> bool:
    """True with probability exp(-x(2k+x)/(2k+2))."""
    return not selector_restarts(k, x, src) & 1


def step4_karney_calls(k: int, x: Comparable, src: RandomSource) -> tuple[bool, int]:
    """exp(-x(2k+x)/2) as k+1 copies of :func:`bern_alg3`; returns (value, calls made)."""
    for i in range(1, k + 2):
        if selector_restarts(k, x, src) & 1:
            return False, i
    return True, k + 1


def bern_step4_karney(k: int, x: Comparable, src: RandomSource) -> bool:
    """True with probability exp(-x(2k+x)/2) via repeated :func:`bern_alg3`."""
    return step4_karney_calls(k, x, src)[0]


def bern_step34_improved(k: int, x: Comparable, src: RandomSource) -> bool:
    """True with probability exp(-x(2k+x)/2) as exp(-kx) * exp(-x^2/2)."""
    return bern_exp_neg_kx(k, x, src) and bern_exp_neg_half_x_sq(x, src)
