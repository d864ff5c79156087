"""Fuzzy support, confidence and the fuzzy simple correlation coefficient.

Itemsets are plain tuples of strictly increasing column indices into a
:class:`~fuzzcorr.dataset.FuzzyDataset`. An itemset's membership in a record
is the minimum over its items; its fuzzy support is the mean of that
membership over all records.

The correlation between two itemsets is the sample Pearson coefficient of
their per-record membership sequences (covariance and variances use the
``n - 1`` denominator). It is ``None`` when either sequence is constant.

Sums run left to right in record order so results are reproducible bit for
bit.
"""

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .exceptions import (
    DisjointnessViolated,
    IndexOutOfRange,
    LengthMismatch,
    TooFewRecords,
    ZeroAntecedentSupport,
)

Itemset = Tuple[int, ...]


def as_itemset(indices, n_items=None) -> Itemset:
    """Validate and return *indices* as a canonical itemset tuple.

    Accepts any iterable of ints; the result is sorted. Duplicates, an empty
    selection and (when *n_items* is given) out-of-range positions raise.
    """
    if isinstance(indices, (int, np.integer)):
        indices = (indices,)
    items = tuple(sorted(int(i) for i in indices))
    if not items:
        raise ValueError("an itemset must contain at least one item")
    if len(set(items)) != len(items):
        raise ValueError(f"duplicate items in itemset {items}")
    if items[0] < 0 or (n_items is not None and items[-1] >= n_items):
        raise IndexOutOfRange(f"itemset {items} out of range for {n_items} items")
    return items


@dataclass(frozen=True, order=True)
class Bipartition:
    """Unordered split ``{A, B}`` of an itemset into two disjoint sides.

    Stored canonically: ``side_a`` holds the smallest index of the union, so
    ``Bipartition.of(a, b) == Bipartition.of(b, a)``.
    """

    side_a: Itemset
    side_b: Itemset

    def __post_init__(self):
        a, b = as_itemset(self.side_a), as_itemset(self.side_b)
        if set(a) & set(b):
            raise DisjointnessViolated(f"sides {a} and {b} overlap")
        if b[0] < a[0]:
            a, b = b, a
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)

    @classmethod
    def of(cls, a, b):
        return cls(as_itemset(a), as_itemset(b))

    @property
    def union(self) -> Itemset:
        return tuple(sorted(self.side_a + self.side_b))

    @property
    def size(self):
        return len(self.side_a) + len(self.side_b)

    def __contains__(self, item):
        return item in self.side_a or item in self.side_b

    def immediate_subpartitions(self):
        """Bipartitions obtained by dropping one item from a side of size >= 2."""
        subs = []
        for side, other in ((self.side_a, self.side_b), (self.side_b, self.side_a)):
            if len(side) < 2:
                continue
            for item in side:
                subs.append(Bipartition(tuple(x for x in side if x != item), other))
        return subs

    def names(self, item_names):
        return ([item_names[j] for j in self.side_a],
                [item_names[j] for j in self.side_b])


@dataclass(frozen=True)
class PartitionStats:
    support: float
    correlation: Optional[float]
    mean_a: float
    mean_b: float
    stddev_a: float
    stddev_b: float

    @property
    def defined(self):
        return self.correlation is not None

    def swapped(self):
        return PartitionStats(self.support, self.correlation, self.mean_b,
                              self.mean_a, self.stddev_b, self.stddev_a)


def _check_itemset(ds, s):
    s = as_itemset(s)
    if s[-1] >= ds.n_items:
        raise IndexOutOfRange(f"itemset {s} out of range for {ds.n_items} items")
    return s


def _left_sum(values):
    total = 0.0
    for v in values:
        total += v
    return total


def membership_sequence(ds, s):
    """Per-record membership of itemset *s* (min over its items), as a list."""
    s = _check_itemset(ds, s)
    grid = ds.memberships
    if len(s) == 1:
        return grid[:, s[0]].tolist()
    return grid[:, list(s)].min(axis=1).tolist()


def itemset_membership(ds, record, s):
    s = _check_itemset(ds, s)
    if not 0 <= record < ds.n_records:
        raise IndexOutOfRange(f"record {record} out of range for {ds.n_records} records")
    return float(min(ds.memberships[record, j] for j in s))


def fuzzy_support(ds, union):
    """Mean over records of the min-membership of *union*."""
    return _left_sum(membership_sequence(ds, union)) / ds.n_records


def item_support(ds, j):
    if not 0 <= j < ds.n_items:
        raise IndexOutOfRange(f"item {j} out of range for {ds.n_items} items")
    return _left_sum(ds.memberships[:, j].tolist()) / ds.n_records


def fuzzy_confidence(ds, antecedent, consequent):
    a = _check_itemset(ds, antecedent)
    c = _check_itemset(ds, consequent)
    if set(a) & set(c):
        raise DisjointnessViolated(f"antecedent {a} and consequent {c} overlap")
    denom = fuzzy_support(ds, a)
    if denom == 0.0:
        raise ZeroAntecedentSupport(f"antecedent {a} has zero fuzzy support")
    return fuzzy_support(ds, a + c) / denom


def _moments(x, y, mean_x, mean_y):
    n = len(x)
    dx = [v - mean_x for v in x]
    dy = [v - mean_y for v in y]
    cov = math.fsum(p * q for p, q in zip(dx, dy)) / (n - 1)
    var_x = math.fsum(p * p for p in dx) / (n - 1)
    var_y = math.fsum(q * q for q in dy) / (n - 1)
    return cov, math.sqrt(var_x), math.sqrt(var_y)


def _is_constant(x):
    first = x[0]
    return all(v == first for v in x)


def _pearson(x, y, mean_x, mean_y):
    cov, sx, sy = _moments(x, y, mean_x, mean_y)
    # exact constancy test; a float mean of a constant sequence can be off
    # by an ulp, which would otherwise leave a spurious tiny variance
    if _is_constant(x) or _is_constant(y):
        return None, (0.0 if _is_constant(x) else sx), (0.0 if _is_constant(y) else sy)
    r = cov / (sx * sy)
    return min(1.0, max(-1.0, r)), sx, sy


def _check_pair(x, y):
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    if len(x) != len(y):
        raise LengthMismatch(f"sequences differ in length ({len(x)} vs {len(y)})")
    if len(x) < 2:
        raise TooFewRecords("correlation needs at least 2 records")
    return x, y


def correlation_of_sequences(x, y):
    """Sample correlation of two equal-length sequences, or ``None`` if undefined."""
    x, y = _check_pair(x, y)
    r, _, _ = _pearson(x, y, _left_sum(x) / len(x), _left_sum(y) / len(y))
    return r


def partition_stats(ds, p):
    """Support, correlation, means and standard deviations of bipartition *p*."""
    if ds.n_records < 2:
        raise TooFewRecords(
            f"correlation needs at least 2 records, dataset has {ds.n_records}")
    mu_a = membership_sequence(ds, p.side_a)
    mu_b = membership_sequence(ds, p.side_b)
    n = ds.n_records
    mean_a = _left_sum(mu_a) / n
    mean_b = _left_sum(mu_b) / n
    r, sa, sb = _pearson(mu_a, mu_b, mean_a, mean_b)
    support = _left_sum(min(u, v) for u, v in zip(mu_a, mu_b)) / n
    return PartitionStats(support, r, mean_a, mean_b, sa, sb)
