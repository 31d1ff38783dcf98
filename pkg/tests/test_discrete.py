import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from exactgauss import discrete, oracle
from exactgauss.discrete import (
    SIGMA_ONE,
    SigmaParam,
    pmf_dplus,
    sample_dplus_improved,
    sample_dplus_karney,
)
from exactgauss.harness.measure import measure_dplus
from exactgauss.harness.stats import chi2_two_sample, dgauss_bins, stat_chi2_dgauss
from exactgauss.randcore import new_source


def four_sigma(p, n):
    return 4 * math.sqrt(p * (1 - p) / n)


@pytest.mark.parametrize("text", ["1/2", "7/10", "0", "-3", "3/5"])
def test_sigma_lower_bound(text):
    with pytest.raises(ValueError):
        SigmaParam.parse(text)


def test_sigma_bound_is_exact():
    # 70711/100000 > sqrt(2)/2 > 70710/100000
    assert SigmaParam(Fraction(70711, 100000)).q < 1
    with pytest.raises(ValueError):
        SigmaParam(Fraction(70710, 100000))


def test_q_is_exact():
    assert SigmaParam.parse("3/2").q == Fraction(2, 9)
    assert SIGMA_ONE.q == Fraction(1, 2)


def test_pmf_reference_values():
    assert pmf_dplus(SIGMA_ONE, 0) == pytest.approx(1 / 1.7533141, abs=1e-7)
    assert pmf_dplus(SIGMA_ONE, 0) == pytest.approx(0.5703484, abs=1e-7)
    assert pmf_dplus(SIGMA_ONE, 1) == pytest.approx(0.6065307 / 1.7533141, abs=1e-7)
    assert discrete.rho_sum(1.0) == pytest.approx(1.7533141, abs=1e-7)


@pytest.mark.parametrize("sigma", [0.75, 1.0, 1.5, 4.0, 20.0])
def test_pmf_normalises(sigma):
    assert sum(pmf_dplus(sigma, k) for k in range(int(40 * sigma))) == pytest.approx(1.0, abs=1e-12)


def test_pmf_bad_tol():
    with pytest.raises(ValueError):
        pmf_dplus(SIGMA_ONE, 0, tol=0)


class ScriptedCoins:
    """Stand-in for the exp(-q) coin returning a fixed sequence."""

    def __init__(self, values):
        self.values = list(values)
        self.used = 0

    def __call__(self, a, b, src):
        v = self.values[self.used]
        self.used += 1
        return v


def test_improved_accepts_two_with_five_coins(monkeypatch):
    coins = ScriptedCoins([True, True, True, True, False])
    monkeypatch.setattr(discrete, "exp_neg_ratio", coins)
    s = sample_dplus_improved(SIGMA_ONE, new_source(0))
    assert (s.value, s.bern_draws, s.attempts) == (2, 5, 1)


def test_improved_restart_counts_attempts(monkeypatch):
    # k grows to 2, one acceptance coin fails, then the second attempt returns 0
    coins = ScriptedCoins([True, True, False, False])
    monkeypatch.setattr(discrete, "exp_neg_ratio", coins)
    s = sample_dplus_improved(SIGMA_ONE, new_source(0))
    assert (s.value, s.bern_draws, s.attempts) == (0, 4, 2)


def test_karney_geometric_then_accept(monkeypatch):
    # proposal k=2 (T, T, F) then k(k-1)=2 acceptance coins
    coins = ScriptedCoins([True, True, False, True, True])
    monkeypatch.setattr(discrete, "exp_neg_ratio", coins)
    s = sample_dplus_karney(SIGMA_ONE, new_source(0))
    assert (s.value, s.bern_draws, s.attempts) == (2, 5, 1)


def test_karney_stops_acceptance_at_first_false(monkeypatch):
    coins = ScriptedCoins([True, True, True, False, False, True, False])
    monkeypatch.setattr(discrete, "exp_neg_ratio", coins)
    s = sample_dplus_karney(SIGMA_ONE, new_source(0))
    # k=3 proposal, first of 6 acceptance coins false; then k=1 accepted with 0 coins
    assert (s.value, s.bern_draws, s.attempts) == (1, 7, 2)


@pytest.mark.parametrize("variant", ["karney", "improved"])
def test_stats_invariants(variant):
    src = new_source(3, 8)
    for _ in range(2000):
        s = discrete.SAMPLERS[variant](SIGMA_ONE, src)
        assert s.value >= 0
        assert s.bern_draws >= 1
        assert s.attempts >= 1


@pytest.mark.parametrize("variant, seed", [("karney", 51), ("improved", 52)])
def test_p_zero(variant, seed):
    n = 200_000
    run = measure_dplus(variant, SIGMA_ONE, n, seed)
    p = pmf_dplus(SIGMA_ONE, 0)
    assert abs(run.freq(0) - p) < four_sigma(p, n)


@pytest.mark.parametrize("variant, key", [("karney", "karney"), ("improved", "improved")])
def test_draw_means_near_prediction(variant, key):
    n = 200_000
    run = measure_dplus(variant, SIGMA_ONE, n, 53)
    pred = {"karney": oracle.dplus_cost_karney, "improved": oracle.dplus_cost_improved}[key]()
    assert run.draws_per_sample == pytest.approx(pred["per_sample"], rel=0.01)
    assert run.accept_rate == pytest.approx(pred["accept_prob"], abs=0.004)


@pytest.mark.parametrize("sigma", ["1", "3/2", "2"])
def test_improved_cheaper(sigma):
    p = SigmaParam.parse(sigma)
    n = 100_000
    k = measure_dplus("karney", p, n, 54).draws_per_sample
    i = measure_dplus("improved", p, n, 55).draws_per_sample
    assert i <= k
    s = float(p.sigma)
    assert oracle.dplus_cost_improved(s)["per_sample"] < oracle.dplus_cost_karney(s)["per_sample"]


@pytest.mark.parametrize("variant", ["karney", "improved"])
@pytest.mark.parametrize("sigma", ["1", "3/2", "5/7"])
def test_goodness_of_fit(variant, sigma):
    res = stat_chi2_dgauss(discrete.SAMPLERS[variant], 100_000, 56, SigmaParam.parse(sigma))
    assert res.passed, res


def test_samplers_agree():
    n = 200_000
    a = measure_dplus("karney", SIGMA_ONE, n, 57).values
    b = measure_dplus("improved", SIGMA_ONE, n, 58).values
    assert chi2_two_sample(dgauss_bins(a), dgauss_bins(b)).passed


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**64 - 1), digit_size=st.sampled_from([1, 4, 8, 16]))
def test_deterministic_given_seed(seed, digit_size):
    for sample in (sample_dplus_karney, sample_dplus_improved):
        a, b = new_source(seed, digit_size), new_source(seed, digit_size)
        assert [sample(SIGMA_ONE, a) for _ in range(20)] == [sample(SIGMA_ONE, b) for _ in range(20)]


def test_law_independent_of_digit_size():
    n = 50_000
    for d in (1, 16):
        run = measure_dplus("improved", SIGMA_ONE, n, 59, digit_size=d)
        p = pmf_dplus(SIGMA_ONE, 1)
        assert abs(run.freq(1) - p) < four_sigma(p, n)
