import math
import time

import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from exactgauss import oracle
from exactgauss.oracle import (
    adaptive_simpson,
    alg3_cost,
    alg3_cost_k0,
    alg6_cost,
    dplus_cost_improved,
    dplus_cost_karney,
    expected_deviates_exp,
    half_x_sq_cost,
    restart_prob_alg3,
    step34_cost_improved,
    step4_cost_karney,
    t_k_improved,
    t_k_karney,
    tau,
)

GRID = [(k, x) for k in range(0, 9) for x in (1e-6, 0.1, 0.25, 0.5, 0.75, 0.999)]


# --- independent routes for the discrete-sampler costs ------------------------


def karney_per_attempt_direct(sigma):
    """Draws per proposal: k+1 geometric coins, then up to k(k-1) coins stopping at a false one."""
    p1 = math.exp(-1 / (2 * sigma * sigma))
    p0 = 1 - p1
    total = 0.0
    for k in range(5000):
        m = k * (k - 1)
        accept_run = (1 - p1**m) / p0 if m else 0.0
        total += p1**k * p0 * (k + 1 + accept_run)
    return total


def improved_per_attempt_direct(sigma):
    """Walk the interleaved sampler's states, summing expected coins."""
    p1 = math.exp(-1 / (2 * sigma * sigma))
    p0 = 1 - p1
    total = 1.0  # first coin
    reach = p1  # P(second coin is drawn)
    total += reach
    reach *= p1  # P(reach k=2 loop)
    for k in range(2, 200):
        m = 2 * (k - 1)
        total += reach * (1 - p1**m) / p0
        reach *= p1**m
        total += reach  # continuation coin
        reach *= p1
    return total


@pytest.mark.parametrize("sigma", [0.75, 1.0, 1.5, 2.0, 4.0])
def test_dplus_costs_two_routes(sigma):
    assert dplus_cost_karney(sigma)["per_attempt"] == pytest.approx(karney_per_attempt_direct(sigma), abs=1e-10)
    assert dplus_cost_improved(sigma)["per_attempt"] == pytest.approx(improved_per_attempt_direct(sigma), abs=1e-10)


def test_dplus_reference_values():
    k = dplus_cost_karney(1.0)
    i = dplus_cost_improved(1.0)
    assert k["per_attempt"] == pytest.approx(3.32967, abs=5e-4)
    assert k["accept_prob"] == pytest.approx(0.689875, abs=5e-5)
    assert k["per_sample"] == pytest.approx(4.82649, abs=1e-3)
    assert i["per_attempt"] == pytest.approx(2.54149, abs=5e-4)
    assert i["per_sample"] == pytest.approx(3.68399, abs=1e-3)


def test_acceptance_is_normaliser_ratio():
    # sum_k p1^{k^2} p0 = (1 - e^{-1/2}) * rho(Z+)
    for sigma in (1.0, 1.5, 3.0):
        p1 = math.exp(-1 / (2 * sigma * sigma))
        rho = sum(math.exp(-k * k / (2 * sigma * sigma)) for k in range(400))
        assert oracle.acceptance_prob(sigma) == pytest.approx((1 - p1) * rho, abs=1e-12)


def test_per_sample_grows_with_sigma():
    for cost in (dplus_cost_karney, dplus_cost_improved):
        values = [cost(s)["per_sample"] for s in (1.0, 2.0, 4.0)]
        assert values == sorted(values) and len(set(values)) == 3


@pytest.mark.parametrize("sigma", [1.0, 1.5, 2.0])
def test_improved_cheaper(sigma):
    assert dplus_cost_improved(sigma)["per_sample"] < dplus_cost_karney(sigma)["per_sample"]


def test_sigma_below_bound():
    with pytest.raises(ValueError):
        dplus_cost_karney(0.5)
    with pytest.raises(ValueError):
        dplus_cost_improved(0.7)


# --- Bernoulli factory costs --------------------------------------------------


def test_exp_cost_values():
    assert expected_deviates_exp(0.5) == pytest.approx(1.648721, abs=1e-6)
    assert expected_deviates_exp(1e-12) == pytest.approx(1.0, abs=1e-9)
    assert expected_deviates_exp(0.125) == pytest.approx(1.133148, abs=1e-6)


def test_alg3_cost_values():
    assert alg3_cost(1, 0.5) == pytest.approx(2.100514, abs=1e-6)
    assert alg3_cost_k0(1.0) == pytest.approx(1.473082, abs=1e-6)
    assert alg3_cost_k0(0.5) == pytest.approx(0.832871, abs=1e-6)
    assert alg3_cost_k0(1e-9) == pytest.approx(0.5, abs=1e-8)
    with pytest.raises(ValueError):
        alg3_cost(0, 0.5)


@pytest.mark.parametrize("x", [0.1, 0.5, 0.9])
def test_alg3_cost_large_k_limit(x):
    values = [alg3_cost(k, x) for k in (1, 2, 4, 8, 16, 1000, 10**6)]
    limit = 2 * math.exp(x) - 1
    assert values[-1] == pytest.approx(limit, abs=1e-5)
    assert all(v < limit + 1e-9 for v in values)
    assert values == sorted(values)


def test_alg3_k0_small_x_branch_continuous():
    x = 1e-4
    closed = ((x + 2) * math.exp(x * x / 2) - 2) / (2 * x)
    assert alg3_cost_k0(x * (1 - 1e-9)) == pytest.approx(closed, rel=1e-7)


def test_alg6_values():
    assert alg6_cost(0.5, 0.5) == pytest.approx(1.852076, abs=1e-6)
    assert alg6_cost(1e-12, 0.5) == pytest.approx(1.0, abs=1e-9)
    # larger operand belongs in the y slot
    assert alg6_cost(0.4, 0.8) < alg6_cost(0.8, 0.4)


@settings(max_examples=200)
@given(x=st.floats(0.01, 1.0), y=st.floats(0.01, 1.0))
def test_slot_inequality(x, y):
    if abs(x - y) < 1e-6:
        return
    assert (alg6_cost(x, y) < alg6_cost(y, x)) == (x < y)


def test_half_x_sq_cost_is_alg6_slot():
    for x in (0.01, 0.3, 0.8, 1.0):
        assert half_x_sq_cost(x) == pytest.approx(alg6_cost(x / 2, x), abs=1e-12)
    assert half_x_sq_cost(1e-9) == pytest.approx(1.0, abs=1e-8)


def test_half_x_sq_integral():
    own = adaptive_simpson(half_x_sq_cost, 0.0, 1.0)
    ref = integrate.quad(lambda x: ((1 + x) * math.exp(x * x / 2) - 1) / x, 0, 1)[0]
    assert own == pytest.approx(ref, abs=1e-9)
    assert own == pytest.approx(1.480033, abs=1e-6)


def test_restart_probabilities():
    assert restart_prob_alg3(1, 0.5, 1) == pytest.approx(0.3125, abs=1e-12)
    for k in range(4):
        assert restart_prob_alg3(k, 0.7, 0) == 1


@pytest.mark.parametrize("k, x", [(0, 1.0), (1, 0.5), (2, 0.5), (5, 0.9)])
def test_restart_masses_decompose(k, x):
    tail = [restart_prob_alg3(k, x, n) for n in range(40)]
    masses = [tail[n] - tail[n + 1] for n in range(39)]
    assert sum(masses) == pytest.approx(1.0, abs=1e-9)
    even = sum(masses[0::2])
    assert even == pytest.approx(math.exp(-x * (2 * k + x) / (2 * k + 2)), abs=1e-9)


def test_t_k_values():
    for x in (0.1, 0.5, 0.9):
        assert t_k_karney(0, x) == 1
        assert t_k_improved(0, x) == 0
        assert t_k_improved(1, x) == 1
    assert t_k_karney(1, 0.5) == pytest.approx(1.731616, abs=1e-6)


@pytest.mark.parametrize("k, x", GRID[::5])
def test_t_k_as_expected_stopping_time(k, x):
    # expected number of coins drawn, stopping at the first false, at most n coins
    def stopping(q, n):
        return sum(q**i for i in range(n))

    assert t_k_karney(k, x) == pytest.approx(stopping(1 / tau(k, x), k + 1), abs=1e-12)
    if k:
        assert t_k_improved(k, x) == pytest.approx(stopping(math.exp(-x), k), abs=1e-12)


# --- identities ---------------------------------------------------------------


@pytest.mark.parametrize("k, x", GRID)
def test_split_identities(k, x):
    target = math.exp(-((k + x) ** 2) / 2)
    rho = math.exp(-k * k / 2)
    assert rho * math.exp(-0.5 * x * (2 * k + x)) == pytest.approx(target, rel=1e-12)
    assert (1 / tau(k, x)) ** (k + 1) == pytest.approx(math.exp(-0.5 * x * (2 * k + x)), rel=1e-12)
    assert math.exp(-k * x) * math.exp(-x * x / 2) == pytest.approx(math.exp(-0.5 * x * (2 * k + x)), rel=1e-12)


# --- step-isolated costs ------------------------------------------------------


def step4_quad(term_k, kmax=12):
    z = sum(math.exp(-k * k / 2) for k in range(40))
    return sum(math.exp(-k * k / 2) / z * term_k(k) for k in range(kmax + 1))


def test_step4_cost_against_scipy():
    def term(k):
        if k == 0:
            return integrate.quad(alg3_cost_k0, 0, 1, epsabs=1e-12)[0]
        return integrate.quad(lambda x: alg3_cost(k, x) * t_k_karney(k, x), 0, 1, epsabs=1e-12)[0]

    assert step4_cost_karney() == pytest.approx(step4_quad(term), abs=1e-8)
    assert abs(step4_quad(term, kmax=8) - step4_quad(term)) < 1e-6
    assert step4_cost_karney() == pytest.approx(2.19414, abs=1e-3)


def test_step34_cost_against_scipy():
    def term(k):
        kx = integrate.quad(lambda x: t_k_improved(k, x) * math.exp(x), 0, 1, epsabs=1e-12)[0]
        sq = integrate.quad(lambda x: half_x_sq_cost(x) * math.exp(-k * x), 0, 1, epsabs=1e-12)[0]
        return kx + sq

    assert step34_cost_improved() == pytest.approx(step4_quad(term), abs=1e-8)
    assert step34_cost_improved() == pytest.approx(2.01799, abs=1e-3)
    assert step34_cost_improved() < step4_cost_karney()


def test_k0_term_of_improved_cost():
    z = sum(math.exp(-k * k / 2) for k in range(40))
    k0 = adaptive_simpson(half_x_sq_cost, 0, 1) / z
    assert k0 == pytest.approx(1.480033 / 1.7533141, abs=1e-6)
    assert k0 < step34_cost_improved()


def test_truncation_stable():
    assert abs(step4_cost_karney(series_tol=1e-12) - step4_cost_karney(series_tol=math.exp(-32))) < 1e-6
    assert abs(step34_cost_improved(series_tol=1e-12) - step34_cost_improved(series_tol=math.exp(-32))) < 1e-6


def test_quadrature_tolerance_stable():
    assert step4_cost_karney(quad_tol=1e-6) == pytest.approx(step4_cost_karney(quad_tol=1e-11), abs=1e-6)


def test_adaptive_simpson_known_integrals():
    assert adaptive_simpson(math.sin, 0, math.pi) == pytest.approx(2.0, abs=1e-9)
    assert adaptive_simpson(lambda x: math.exp(-x * x), 0, 1) == pytest.approx(
        math.sqrt(math.pi) / 2 * math.erf(1), abs=1e-10
    )


def test_series_sums():
    assert oracle.series(lambda k: 0.5**k) == pytest.approx(2.0, abs=1e-11)
    assert oracle.series(lambda k: 1 / math.factorial(k)) == pytest.approx(math.e, abs=1e-12)


# --- reference table ----------------------------------------------------------


def test_reference_constants():
    t0 = time.perf_counter()
    values = oracle.reference_constants()
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    assert all(v.agrees for v in values)
    named = {v.name: v.value for v in values}
    assert named["rejection_rate"] == pytest.approx(2.027819, abs=1e-6)
    assert named["von_neumann_exp"] == pytest.approx(4.300259, abs=1e-6)
    assert named["von_neumann_early_reject"] == pytest.approx(4.190215, abs=1e-6)


def test_rejection_rate_two_routes():
    # proposals per sample = 1 / P(accept); P(accept) = sum_k D(k) * int_0^1 exp(-x(2k+x)/2) dx * acceptance of k
    p_accept_x = sum(
        oracle.dplus_prob(k) * integrate.quad(lambda x: math.exp(-x * (2 * k + x) / 2), 0, 1)[0] for k in range(30)
    )
    per_k = 1 / oracle.acceptance_prob(1.0)
    assert per_k / p_accept_x == pytest.approx(oracle.rejection_rate(), abs=1e-9)


def test_lookup():
    assert oracle.lookup("step4_karney").reference_value == 2.19414
    with pytest.raises(KeyError):
        oracle.lookup("nope")
