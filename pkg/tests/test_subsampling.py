import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lrdcp.errors import DomainError
from lrdcp.lrd_sim import simulate_fgn
from lrdcp.scores import ScoreSpec
from lrdcp.self_norm import SNCusumStatistic, SNRankStatistic, sn_cusum_stat
from lrdcp.subsampling import (
    BlockRule,
    NullDistribution,
    TestReport,
    make_statistic,
    quantile_and_pvalue,
    run_test,
    subsample_distribution,
)

sorted_samples = arrays(np.float64, st.integers(1, 60), elements=st.floats(0, 50)).map(np.sort)


def test_window_mean():
    dist = subsample_distribution([1, 2, 3, 4], 2, lambda w: float(np.mean(w)))
    np.testing.assert_array_equal(dist.sorted_values, [1.5, 2.5, 3.5])
    assert dist.m == 3 and dist.block_length == 2


def test_constant_series():
    dist = subsample_distribution(np.full(30, 2.0), 7, lambda w: float(np.std(w)))
    assert np.all(dist.sorted_values == dist.sorted_values[0])


def test_block_length_checks():
    with pytest.raises(DomainError):
        subsample_distribution(np.arange(5.0), 5, np.mean)
    with pytest.raises(DomainError):
        subsample_distribution(np.arange(5.0), 1, np.mean)


def test_sn_cusum_windows_match_naive_loop():
    x = simulate_fgn(200, 0.7, 123).values
    a = subsample_distribution(x, 14, SNCusumStatistic())
    b = subsample_distribution(x, 14, SNCusumStatistic())
    naive = np.sort([sn_cusum_stat(x[k:k + 14]).max_abs for k in range(200 - 14 + 1)])
    assert np.array_equal(a.sorted_values, b.sorted_values)
    np.testing.assert_array_equal(a.sorted_values, naive)


@pytest.mark.parametrize("stat", [SNCusumStatistic(), SNRankStatistic(ScoreSpec.vdw()),
                                  lambda w: float(np.max(w) - np.min(w))])
@pytest.mark.parametrize("workers", [2, 3, 8])
def test_thread_count_invariance(stat, workers):
    x = simulate_fgn(500, 0.8, 9).values
    a = subsample_distribution(x, 22, stat, workers=1)
    b = subsample_distribution(x, 22, stat, workers=workers)
    assert np.array_equal(a.sorted_values, b.sorted_values)


def test_quantile_examples():
    dist = NullDistribution(np.array([1.0, 2, 3, 4, 5]), 2)
    assert quantile_and_pvalue(dist, 0.4, 0.0) == (3.0, 1.0)
    assert quantile_and_pvalue(dist, 0.4, 6.0)[1] == 0.0
    with pytest.raises(DomainError):
        quantile_and_pvalue(dist, 1.0, 0.0)
    with pytest.raises(DomainError):
        NullDistribution(np.array([]), 3)


@given(sorted_samples, st.floats(0.001, 0.999))
def test_critical_value_is_generalized_inverse(vals, level):
    dist = NullDistribution(vals, 3)
    c, _ = quantile_and_pvalue(dist, level, 0.0)
    assert c in vals
    m = vals.size
    # F(c) >= 1 - level, and no smaller attained value satisfies it
    assert dist.cdf(c) >= 1 - level - 1e-12
    smaller = vals[vals < c]
    if smaller.size:
        assert dist.cdf(smaller[-1]) < 1 - level + 1e-9


@given(sorted_samples, st.data())
def test_pvalue_at_sample_points(vals, data):
    dist = NullDistribution(vals, 3)
    v = data.draw(st.sampled_from(list(vals)))
    _, p = quantile_and_pvalue(dist, 0.05, v)
    assert p == np.sum(vals >= v) / vals.size


@given(sorted_samples, st.floats(0, 60), st.floats(0, 60))
def test_pvalue_monotone(vals, a, b):
    dist = NullDistribution(vals, 3)
    lo, hi = min(a, b), max(a, b)
    assert quantile_and_pvalue(dist, 0.1, lo)[1] >= quantile_and_pvalue(dist, 0.1, hi)[1]


@given(sorted_samples, st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_critical_value_monotone(vals, a, b):
    dist = NullDistribution(vals, 3)
    big, small = max(a, b), min(a, b)
    assert quantile_and_pvalue(dist, big, 0)[0] <= quantile_and_pvalue(dist, small, 0)[0]


def test_block_rules():
    assert BlockRule.parse("gamma:0.5").resolve(500) == 22
    assert BlockRule.parse("gamma:0.4").resolve(300) == 9
    assert BlockRule.parse("gamma:0.6").resolve(500) == 41
    assert BlockRule.parse("gamma:0.5").resolve(300) == 17
    assert BlockRule.parse("40").resolve(4000) == 40
    assert BlockRule.parse(12).resolve(100) == 12
    with pytest.raises(DomainError):
        BlockRule.parse("2").resolve(100)
    with pytest.raises(DomainError):
        BlockRule.parse("gamma:0.1").resolve(20)
    with pytest.raises(DomainError):
        BlockRule.parse("abc")


def test_run_test_report(rng):
    x = rng.standard_normal(300)
    x[150:] += 2.0
    rep = run_test(x, "wilcoxon", "gamma:0.5", 0.05)
    assert rep.block_length == 17 and rep.statistic_name == "wilcoxon"
    assert rep.reject == (rep.observed > rep.critical_value)
    assert rep.reject and rep.p_value == 0.0
    assert abs(rep.argmax_k - 150) <= 5
    text = rep.to_text()
    assert "reject=true" in text and text.count("\n") == len(TestReport.FIELDS)
    row = rep.to_csv_row().split(",")
    assert len(row) == len(TestReport.csv_header().split(","))


def test_run_test_checks():
    with pytest.raises(DomainError):
        run_test(np.arange(9.0), "cusum", 3)
    with pytest.raises(DomainError):
        run_test(np.arange(50.0), "spearman", 5)


def test_report_invariant_under_monotone_maps(rng):
    x = simulate_fgn(300, 0.7, 4).values
    for test in ("wilcoxon", "vdw", "median"):
        a = run_test(x, test, "gamma:0.5")
        b = run_test(np.exp(x) * 3 + 1, test, "gamma:0.5")
        assert a == b


def test_make_statistic_names():
    assert make_statistic("C").name == "cusum"
    assert make_statistic("V").name == "vdw"
    assert make_statistic(ScoreSpec.median()).name == "median"


def test_iid_size():
    # 5000 iid replications; the sampling-window test should hold its level roughly
    rng = np.random.default_rng(77)
    stat = SNRankStatistic(ScoreSpec.wilcoxon())
    rejections = 0
    reps = 5000
    for _ in range(reps):
        x = rng.standard_normal(500)
        obs = stat(x)
        crit, _ = quantile_and_pvalue(subsample_distribution(x, 22, stat), 0.05, obs)
        rejections += obs > crit
    assert 0.03 <= rejections / reps <= 0.09
