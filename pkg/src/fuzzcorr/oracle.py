"""
Exhaustive reference miner for small instances.

Nothing here calls into :mod:`fuzzcorr.fuzzstats` or the mining loop of
:mod:`fuzzcorr.miner`; only their data types are shared. Statistics are
computed with explicit loops over records, and levels are found by
enumerating every bipartition of every k-subset of the frequent items and
checking the candidate rule recursively. The point is to be obviously
right, not fast.
"""

import itertools
import math

from .exceptions import (
    InstanceTooLarge,
    NoFrequentItems,
    TargetNotFrequent,
    TooFewRecords,
    UnknownTarget,
)
from .fuzzstats import Bipartition, PartitionStats
from .miner import FuzzyCorrelationRule, Level, LevelSets

MAX_ITEMS = 12


def _column(ds, j):
    return [float(ds.memberships[i, j]) for i in range(ds.n_records)]


def _mu(ds, itemset):
    # per-record min over the itemset
    out = []
    for i in range(ds.n_records):
        m = 1.0
        for j in itemset:
            v = float(ds.memberships[i, j])
            if v < m:
                m = v
        out.append(m)
    return out


def _fsupp(ds, itemset):
    total = 0.0
    for v in _mu(ds, itemset):
        total = total + v
    return total / ds.n_records


def naive_stats(ds, p):
    """Two-pass evaluation of support, means, deviations and correlation."""
    n = ds.n_records
    if n < 2:
        raise TooFewRecords(f"correlation needs at least 2 records, got {n}")
    a, b = p.side_a, p.side_b
    mu_a = _mu(ds, a)
    mu_b = _mu(ds, b)
    # first pass: means are the fuzzy supports of each side
    mean_a = _fsupp(ds, a)
    mean_b = _fsupp(ds, b)
    # second pass
    s_ab = 0.0
    ss_a = 0.0
    ss_b = 0.0
    for i in range(n):
        da = mu_a[i] - mean_a
        db = mu_b[i] - mean_b
        s_ab += da * db
        ss_a += da * da
        ss_b += db * db
    s_ab /= n - 1
    var_a = ss_a / (n - 1)
    var_b = ss_b / (n - 1)
    const_a = max(mu_a) == min(mu_a)
    const_b = max(mu_b) == min(mu_b)
    sd_a = 0.0 if const_a else math.sqrt(var_a)
    sd_b = 0.0 if const_b else math.sqrt(var_b)
    r = None if (const_a or const_b) else s_ab / (sd_a * sd_b)
    return PartitionStats(_fsupp(ds, a + b), r, mean_a, mean_b, sd_a, sd_b)


def _bipartitions(itemset):
    """Every unordered split of *itemset* into two non-empty sides."""
    first, rest = itemset[0], itemset[1:]
    out = []
    # pin the first item on side A so each split appears once
    for mask in range(2 ** len(rest) - 1):
        side_a = [first] + [x for bit, x in enumerate(rest) if mask >> bit & 1]
        side_b = [x for bit, x in enumerate(rest) if not mask >> bit & 1]
        out.append((tuple(side_a), tuple(side_b)))
    return out


def _check(ds):
    if ds.n_items > MAX_ITEMS:
        raise InstanceTooLarge(
            f"oracle enumerates at most {MAX_ITEMS} items, dataset has {ds.n_items}")
    if ds.n_records < 2:
        raise TooFewRecords(f"mining needs at least 2 records, got {ds.n_records}")


def oracle_levels(ds, cfg):
    _check(ds)
    n, m = ds.n_records, ds.n_items
    supports = []
    for j in range(m):
        total = 0.0
        for v in _column(ds, j):
            total = total + v
        supports.append(total / n)
    l1 = [j for j in range(m) if supports[j] >= cfg.min_support]
    if cfg.target == "auto":
        if not l1:
            raise NoFrequentItems("no frequent items")
        best = l1[0]
        for j in l1:
            if supports[j] > supports[best]:
                best = j
        target = best
    else:
        if cfg.target not in ds.item_names:
            raise UnknownTarget(f"unknown target {cfg.target!r}")
        target = list(ds.item_names).index(cfg.target)
        if target not in l1:
            raise TargetNotFrequent(f"target {cfg.target!r} is not frequent")

    levels = LevelSets(target, supports, l1, [j for j in l1 if j != target])
    top = m if cfg.max_level is None else min(m, cfg.max_level)

    stats_cache = {}
    candidate_cache = {}

    def stats(a, b):
        key = (a, b)
        if key not in stats_cache:
            stats_cache[key] = naive_stats(ds, Bipartition(a, b))
        return stats_cache[key]

    def passes(a, b):
        st = stats(a, b)
        return (st.correlation is not None and st.support >= cfg.min_support
                and st.correlation >= cfg.min_correlation)

    def is_candidate(a, b):
        key = (a, b) if a[0] < b[0] else (b, a)
        if key in candidate_cache:
            return candidate_cache[key]
        ok = True
        for side, other, swap in ((a, b, False), (b, a, True)):
            if len(side) < 2:
                continue
            for x in side:
                smaller = tuple(y for y in side if y != x)
                sub = (other, smaller) if swap else (smaller, other)
                if not (is_candidate(*sub) and passes(*sub)):
                    ok = False
        candidate_cache[key] = ok
        return ok

    for k in range(2, m + 1):
        with_t, without_t = [], []
        for subset in itertools.combinations(l1, k):
            for a, b in _bipartitions(subset):
                if is_candidate(a, b):
                    (with_t if target in subset else without_t).append((a, b))
        if not with_t and not without_t:
            continue
        if k > top:
            levels.capped = True
            break
        level = Level(k)
        for bucket, cands, kept in ((with_t, level.candidates_with, level.with_target),
                                    (without_t, level.candidates_without,
                                     level.without_target)):
            for a, b in bucket:
                p = Bipartition(a, b)
                cands.append(p)
                level.stats[p] = stats(a, b)
                if passes(a, b):
                    kept.append((p, stats(a, b)))
            cands.sort()
            kept.sort(key=lambda e: e[0])
        levels.levels[k] = level
    return levels


def oracle_mine(ds, cfg):
    """Interesting rules by exhaustive enumeration, canonically sorted."""
    levels = oracle_levels(ds, cfg)
    rules = []
    for k in sorted(levels.levels):
        for p, st in levels.levels[k].with_target:
            for ante, cons in ((p.side_a, p.side_b), (p.side_b, p.side_a)):
                conf = _fsupp(ds, ante + cons) / _fsupp(ds, ante)
                if conf >= cfg.min_confidence:
                    rules.append(FuzzyCorrelationRule(ante, cons, st.support, conf,
                                                      st.correlation))
    names = ds.item_names

    def key(r):
        return (len(r.antecedent) + len(r.consequent), -round(r.confidence, 12),
                tuple(names[j] for j in r.antecedent),
                tuple(names[j] for j in r.consequent))

    return sorted(rules, key=key)


def _close(x, y, tol):
    if x is None or y is None:
        return x is None and y is None
    return abs(x - y) <= tol


def diff_results(ds, levels, rules, ref_levels, ref_rules, tol=1e-12):
    """List every disagreement between two mining runs; empty means equivalent.

    Level sets and rule lists must match exactly (membership and order);
    statistics must agree within *tol*.
    """
    names = ds.item_names
    diffs = []

    def label(p):
        a, b = p.names(names)
        return f"{{{', '.join(a)}}} | {{{', '.join(b)}}}"

    if levels.target_item != ref_levels.target_item:
        diffs.append({"what": "target", "got": names[levels.target_item],
                      "expected": names[ref_levels.target_item]})
    if list(levels.l1) != list(ref_levels.l1):
        diffs.append({"what": "l1", "got": [names[j] for j in levels.l1],
                      "expected": [names[j] for j in ref_levels.l1]})
    if levels.capped != ref_levels.capped:
        diffs.append({"what": "capped", "got": levels.capped,
                      "expected": ref_levels.capped})

    ks = sorted(set(levels.levels) | set(ref_levels.levels))
    for k in ks:
        got, exp = levels.level(k), ref_levels.level(k)
        for field in ("candidates_with", "candidates_without"):
            g, e = set(getattr(got, field)), set(getattr(exp, field))
            if g != e:
                diffs.append({"what": field, "k": k,
                              "extra": sorted(label(p) for p in g - e),
                              "missing": sorted(label(p) for p in e - g)})
        for field in ("with_target", "without_target"):
            g = dict(getattr(got, field))
            e = dict(getattr(exp, field))
            if set(g) != set(e):
                diffs.append({"what": field, "k": k,
                              "extra": sorted(label(p) for p in set(g) - set(e)),
                              "missing": sorted(label(p) for p in set(e) - set(g))})
            for p in set(g) & set(e):
                for attr in ("support", "correlation", "mean_a", "mean_b",
                             "stddev_a", "stddev_b"):
                    x, y = getattr(g[p], attr), getattr(e[p], attr)
                    if not _close(x, y, tol):
                        diffs.append({"what": f"{field}.{attr}", "k": k,
                                      "bipartition": label(p), "got": x,
                                      "expected": y})

    def rule_label(r):
        a, c = r.names(names)
        return f"{{{', '.join(a)}}} -> {{{', '.join(c)}}}"

    got_order = [rule_label(r) for r in rules]
    exp_order = [rule_label(r) for r in ref_rules]
    if got_order != exp_order:
        diffs.append({"what": "rules", "got": got_order, "expected": exp_order})
    else:
        for r, e in zip(rules, ref_rules):
            for attr in ("support", "confidence", "correlation"):
                x, y = getattr(r, attr), getattr(e, attr)
                if not _close(x, y, tol):
                    diffs.append({"what": f"rule.{attr}", "rule": rule_label(r),
                                  "got": x, "expected": y})
    return diffs
