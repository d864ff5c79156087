import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from fuzzcorr import (
    Bipartition,
    FuzzyDataset,
    correlation_of_sequences,
    fuzzy_confidence,
    fuzzy_support,
    item_support,
    itemset_membership,
    partition_stats,
)
from fuzzcorr.exceptions import (
    DisjointnessViolated,
    IndexOutOfRange,
    LengthMismatch,
    TooFewRecords,
    ZeroAntecedentSupport,
)
from fuzzcorr.fuzzstats import as_itemset, membership_sequence

from conftest import random_dataset

S1, S2, S3, S4, S5 = range(5)


def literal_r(x, y):
    """Direct two-pass transcription: covariance over the product of deviations."""
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y)) / (n - 1)
    sx = math.sqrt(sum((a - mx) ** 2 for a in x) / (n - 1))
    sy = math.sqrt(sum((b - my) ** 2 for b in y) / (n - 1))
    return sxy / (sx * sy)


def test_itemset_membership(table2):
    assert itemset_membership(table2, 7, (S1, S2, S3)) == 1.0
    assert itemset_membership(table2, 3, (S1, S4)) == 0.0
    for i in range(table2.n_records):
        assert itemset_membership(table2, i, (S4,)) == table2.memberships[i, S4]


def test_itemset_membership_out_of_range(table2):
    with pytest.raises(IndexOutOfRange):
        itemset_membership(table2, 16, (S1,))
    with pytest.raises(IndexOutOfRange):
        itemset_membership(table2, 0, (5,))


@pytest.mark.parametrize("itemset, expected", [
    ((S1, S2), 0.325),
    ((S2, S3), 0.35),
    ((S1, S2, S3), 0.26875),
    ((S2,), 0.5375),
])
def test_fuzzy_support(table2, itemset, expected):
    assert fuzzy_support(table2, itemset) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize("j, expected", [
    (S1, 0.43125), (S2, 0.5375), (S3, 0.46875), (S4, 0.2625), (S5, 0.29375)])
def test_item_support(table2, j, expected):
    assert item_support(table2, j) == pytest.approx(expected, abs=1e-12)


def test_item_support_zero_column():
    ds = FuzzyDataset.from_array([[0.0, 0.3], [0.0, 0.1]])
    assert item_support(ds, 0) == 0.0
    with pytest.raises(IndexOutOfRange):
        item_support(ds, 2)


def test_singleton_support_equals_item_support(table2):
    for j in range(table2.n_items):
        assert fuzzy_support(table2, (j,)) == item_support(table2, j)


@pytest.mark.parametrize("ante, cons, expected, printed", [
    ((S1, S3), (S2,), 0.86, 0.87),
    ((S2, S3), (S1,), 0.26875 / 0.35, 0.77),
    ((S2,), (S1,), 0.325 / 0.5375, 0.61),
])
def test_fuzzy_confidence(table2, ante, cons, expected, printed):
    conf = fuzzy_confidence(table2, ante, cons)
    assert conf == pytest.approx(expected, abs=1e-12)
    assert conf == pytest.approx(printed, abs=0.02)


def test_confidence_errors():
    ds = FuzzyDataset.from_array([[0.0, 0.5], [0.0, 0.1]])
    with pytest.raises(ZeroAntecedentSupport):
        fuzzy_confidence(ds, (0,), (1,))
    with pytest.raises(DisjointnessViolated):
        fuzzy_confidence(ds, (0, 1), (1,))


def test_correlation_simple_cases():
    x = [0.1, 0.5, 0.3, 0.9]
    assert correlation_of_sequences(x, x) == pytest.approx(1.0, abs=1e-12)
    assert correlation_of_sequences([0, 1], [1, 0]) == pytest.approx(-1.0, abs=1e-12)


def test_correlation_s4_s2(table2):
    r = correlation_of_sequences(membership_sequence(table2, (S4,)),
                                 membership_sequence(table2, (S2,)))
    assert r == pytest.approx(-0.10, abs=0.01)


def test_correlation_errors():
    with pytest.raises(LengthMismatch):
        correlation_of_sequences([1, 2], [1, 2, 3])
    with pytest.raises(TooFewRecords):
        correlation_of_sequences([1], [1])


def test_correlation_constant_is_undefined():
    assert correlation_of_sequences([0.1, 0.1, 0.1], [0.2, 0.5, 0.3]) is None
    assert correlation_of_sequences([0.2, 0.5, 0.3], [0.7] * 3) is None


@pytest.mark.parametrize("a, b, support, r", [
    ((S1,), (S2,), 0.325, 0.33),
    ((S1,), (S2, S3), 0.26875, 0.52),
    ((S1, S3), (S2,), 0.26875, 0.36),
    ((S1, S2), (S3,), 0.26875, 0.46),
])
def test_partition_stats_reference(table2, a, b, support, r):
    st_ = partition_stats(table2, Bipartition.of(a, b))
    assert st_.support == pytest.approx(support, abs=1e-12)
    assert st_.correlation == pytest.approx(r, abs=0.01)


def test_partition_stats_means_are_side_supports(table2):
    p = Bipartition.of((S1, S3), (S2,))
    st_ = partition_stats(table2, p)
    assert st_.mean_a == fuzzy_support(table2, p.side_a)
    assert st_.mean_b == fuzzy_support(table2, p.side_b)
    assert st_.stddev_a == pytest.approx(
        np.std(membership_sequence(table2, p.side_a), ddof=1), abs=1e-12)


def test_partition_stats_needs_two_records():
    ds = FuzzyDataset.from_array([[0.2, 0.3]])
    with pytest.raises(TooFewRecords):
        partition_stats(ds, Bipartition.of((0,), (1,)))
    assert fuzzy_support(ds, (0, 1)) == 0.2


def test_bipartition_canonical_order():
    p = Bipartition.of((3, 1), (0, 4))
    assert p == Bipartition.of((4, 0), (1, 3))
    assert p.side_a == (0, 4) and p.side_b == (1, 3)
    with pytest.raises(DisjointnessViolated):
        Bipartition.of((0, 1), (1,))
    with pytest.raises(ValueError):
        Bipartition.of((), (1,))


def test_immediate_subpartitions():
    p = Bipartition.of((0, 2), (1,))
    assert set(p.immediate_subpartitions()) == {Bipartition.of((0,), (1,)),
                                                Bipartition.of((2,), (1,))}
    assert Bipartition.of((0,), (1,)).immediate_subpartitions() == []


def test_as_itemset():
    assert as_itemset([3, 1]) == (1, 3)
    with pytest.raises(ValueError):
        as_itemset([1, 1])
    with pytest.raises(IndexOutOfRange):
        as_itemset([5], n_items=5)


# -- properties ---------------------------------------------------------------

datasets = st.builds(
    lambda seed, n, m: random_dataset(np.random.default_rng(seed), n, m),
    st.integers(0, 2 ** 32 - 1), st.integers(2, 12), st.integers(2, 6))


def _random_bipartition(rng, m):
    k = int(rng.integers(2, m + 1))
    items = rng.permutation(m)[:k]
    cut = int(rng.integers(1, k))
    return Bipartition.of(items[:cut], items[cut:])


@settings(max_examples=200)
@given(datasets, st.integers(0, 2 ** 32 - 1))
def test_symmetry_under_side_swap(ds, seed):
    p = _random_bipartition(np.random.default_rng(seed), ds.n_items)
    swapped = Bipartition(p.side_b, p.side_a)
    assert swapped == p
    a = partition_stats(ds, p)
    # compute the swapped direction through the sequences directly
    mu_a = membership_sequence(ds, p.side_a)
    mu_b = membership_sequence(ds, p.side_b)
    r_ba = correlation_of_sequences(mu_b, mu_a)
    if a.correlation is None:
        assert r_ba is None
    else:
        assert r_ba == pytest.approx(a.correlation, abs=1e-12)
    assert fuzzy_support(ds, p.side_b + p.side_a) == a.support


@settings(max_examples=200)
@given(datasets, st.integers(0, 2 ** 32 - 1))
def test_bounds(ds, seed):
    p = _random_bipartition(np.random.default_rng(seed), ds.n_items)
    s = partition_stats(ds, p)
    assert 0.0 <= s.support <= 1.0
    if s.correlation is not None:
        assert -1 - 1e-9 <= s.correlation <= 1 + 1e-9
        assert not math.isnan(s.correlation)
    if s.stddev_a == 0.0 or s.stddev_b == 0.0:
        assert s.correlation is None
    if fuzzy_support(ds, p.side_a) > 0:
        assert 0.0 <= fuzzy_confidence(ds, p.side_a, p.side_b) <= 1.0


def test_support_anti_monotone_1000_pairs(rng):
    for _ in range(1000):
        ds = random_dataset(rng, int(rng.integers(1, 13)), int(rng.integers(2, 7)))
        m = ds.n_items
        big = rng.permutation(m)[:int(rng.integers(1, m + 1))]
        small = big[:int(rng.integers(1, len(big) + 1))]
        assert fuzzy_support(ds, big) <= fuzzy_support(ds, small)


@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=30),
       st.floats(0.01, 100), st.floats(-100, 100), st.integers(0, 2 ** 32 - 1))
def test_affine_invariance(x, a, b, seed):
    y = np.random.default_rng(seed).normal(size=len(x)).tolist()
    assume(max(x) - min(x) > 1e-3)
    r = correlation_of_sequences(x, y)
    r2 = correlation_of_sequences([a * v + b for v in x], y)
    assert r2 == pytest.approx(r, abs=1e-9)


@given(st.integers(0, 2 ** 32 - 1), st.integers(2, 40))
def test_matches_literal_transcription(seed, n):
    rng = np.random.default_rng(seed)
    x = rng.random(n).tolist()
    y = rng.random(n).tolist()
    r = correlation_of_sequences(x, y)
    assert r == pytest.approx(literal_r(x, y), abs=1e-12)
    assert r == pytest.approx(np.corrcoef(x, y)[0, 1], abs=1e-12)


@given(st.integers(2, 12), st.floats(0, 1), st.integers(0, 2 ** 32 - 1))
def test_constant_side_never_nan(n, c, seed):
    x = [c] * n
    y = np.random.default_rng(seed).random(n).tolist()
    assert correlation_of_sequences(x, y) is None
    assert correlation_of_sequences(y, x) is None
