import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from linrs.exceptions import InvalidArgumentError
from linrs.tabular import (
    RsTable,
    aleph_opt,
    initialize_table,
    rs_policy_step,
    rs_value,
    rs_values,
    simulate_bernoulli_rs,
)


def test_rs_value_arithmetic():
    table = RsTable([5, 5], [0.7, 0.0], 0.5)
    assert rs_value(table, 0) == pytest.approx(0.1)


def test_rs_value_zero_at_aspiration():
    table = RsTable([3, 9], [0.5, 0.5], 0.5)
    np.testing.assert_array_equal(rs_values(table), [0.0, 0.0])


def test_rs_value_undefined_before_trials():
    with pytest.raises(InvalidArgumentError):
        rs_values(RsTable.empty(3, 0.5))


def test_rs_argmax_matches_exhaustive_evaluation():
    rng = np.random.default_rng(0)
    for _ in range(200):
        k = rng.integers(2, 8)
        counts = rng.integers(1, 50, size=k)
        values = rng.random(k)
        table = RsTable(counts, values, 0.5)
        N = counts.sum()
        best, best_v = 0, -np.inf
        for a in range(k):
            v = counts[a] / N * (values[a] - 0.5)
            if v > best_v:
                best, best_v = a, v
        assert int(np.argmax(rs_values(table))) == best


def test_aleph_opt_examples():
    assert aleph_opt([0.9, 0.5]) == pytest.approx(0.7)
    assert aleph_opt([0.6, 0.6]) == pytest.approx(0.6)
    with pytest.raises(InvalidArgumentError):
        aleph_opt([0.3])


def test_aleph_opt_sort_oracle():
    rng = np.random.default_rng(1)
    for _ in range(100):
        means = 1 / (1 + np.exp(-rng.normal(size=8)))
        s = sorted(means)
        assert aleph_opt(means) == pytest.approx((s[-1] + s[-2]) / 2)


def test_step_positive_delta_dominates():
    table = RsTable([5, 5], [0.4, 0.6], 0.5)
    arm, _ = rs_policy_step(table, lambda a: 0.0)
    assert arm == 1


def test_step_all_negative_prefers_rarely_tried():
    table = RsTable([9, 1], [0.3, 0.3], 0.5)
    arm, _ = rs_policy_step(table, lambda a: 0.0)
    assert arm == 1


def test_step_updates_running_mean():
    table = RsTable([1, 1], [1.0, 0.0], 0.5)
    arm, table = rs_policy_step(table, lambda a: 0.0)
    assert arm == 0
    assert table.counts.tolist() == [2, 1] and table.total == 3
    assert table.values[0] == pytest.approx(0.5)


def test_initialize_pulls_each_arm_once():
    table = initialize_table(4, 0.5, lambda a: float(a))
    assert table.counts.tolist() == [1, 1, 1, 1]
    np.testing.assert_array_equal(table.values, [0, 1, 2, 3])


@given(st.lists(st.integers(1, 1000), min_size=2, max_size=6),
       st.integers(1, 50), st.integers(0, 2**31))
def test_rs_value_scale_invariant(counts, c, seed):
    values = np.random.default_rng(seed).random(len(counts))
    base = rs_values(RsTable(counts, values, 0.5))
    scaled = rs_values(RsTable(np.array(counts) * c, values, 0.5))
    np.testing.assert_allclose(base, scaled, atol=1e-15)


@given(st.lists(st.floats(0, 1), min_size=2, max_size=6), st.integers(0, 5))
def test_single_satisfied_arm_is_chosen(values, which):
    values = np.minimum(np.array(values), 0.49)
    which %= len(values)
    values[which] = 0.8
    table = RsTable(np.ones(len(values), dtype=int), values, 0.5)
    assert rs_policy_step(table, lambda a: 0.0)[0] == which


def test_bernoulli_rs_converges_single_seed():
    chosen = simulate_bernoulli_rs([0.7, 0.3], 0.5, 10_000, 0)
    assert np.mean(chosen[-1000:] == 0) >= 0.95
