"""
Target-oriented level-wise mining of fuzzy correlation rules.

The algorithm picks a target item (by default the most supported frequent
item) and grows bipartitions level by level:

* level 1: ``L_1`` is every item with support >= ``min_support``; the target
  is removed to give ``L'_1``.
* level 2: ``C_2`` pairs each item of ``L'_1`` with the target, ``C'_2`` pairs
  items of ``L'_1`` with each other.
* level k >= 3: a bipartition of a k-itemset is a candidate when every
  bipartition obtained by dropping one item from a side of size >= 2 survived
  level k - 1. Target-containing candidates form ``C_k``, the rest ``C'_k``.

Survivors (``L_k`` / ``L'_k``) need support >= ``min_support`` and a defined
correlation >= ``min_correlation``. Growth stops once both candidate lists are
empty. Rules come from target-containing survivors only: each ``{A, B}``
yields ``A -> B`` and ``B -> A``, kept when confidence >= ``min_confidence``.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .dataset import FuzzyDataset
from .exceptions import (
    InvalidConfig,
    NoFrequentItems,
    TargetNotFrequent,
    TooFewRecords,
    UnknownTarget,
)
from .fuzzstats import Bipartition, fuzzy_confidence, item_support, partition_stats
from .report import LevelRow, LevelTable, MiningReport, RuleRow

logger = logging.getLogger(__name__)

__all__ = [
    "MinerConfig",
    "Level",
    "LevelSets",
    "FuzzyCorrelationRule",
    "select_target",
    "generate_level2",
    "filter_level",
    "generate_candidates_k",
    "extract_rules",
    "mine_levels",
    "mine",
    "rule_sort_key",
    "TargetFuzzyCorrelationMiner",
]


@dataclass(frozen=True)
class MinerConfig:
    """Thresholds and target policy.

    ``target`` is ``"auto"`` or an item name. ``max_level`` caps the largest
    itemset size explored; ``None`` means the number of items.
    """

    min_support: float = 0.25
    min_confidence: float = 0.8
    min_correlation: float = 0.3
    target: str = "auto"
    max_level: Optional[int] = None

    def __post_init__(self):
        def bounded(name, value, lo, hi, open_lo):
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise InvalidConfig(f"{name} must be a number, got {value!r}") from None
            ok = (lo < value if open_lo else lo <= value) and value <= hi
            if not ok or math.isnan(value):
                interval = f"({lo}, {hi}]" if open_lo else f"[{lo}, {hi}]"
                raise InvalidConfig(f"{name} must lie in {interval}, got {value}")
            object.__setattr__(self, name, value)

        bounded("min_support", self.min_support, 0.0, 1.0, True)
        bounded("min_confidence", self.min_confidence, 0.0, 1.0, True)
        bounded("min_correlation", self.min_correlation, -1.0, 1.0, False)
        if not isinstance(self.target, str) or not self.target:
            raise InvalidConfig("target must be 'auto' or an item name")
        if self.max_level is not None:
            if isinstance(self.max_level, bool) or int(self.max_level) != self.max_level \
                    or self.max_level < 2:
                raise InvalidConfig("max_level must be an integer >= 2")
            object.__setattr__(self, "max_level", int(self.max_level))


@dataclass
class Level:
    """Candidates and survivors of one level k >= 2."""

    k: int
    candidates_with: List[Bipartition] = field(default_factory=list)
    candidates_without: List[Bipartition] = field(default_factory=list)
    stats: Dict[Bipartition, object] = field(default_factory=dict)
    with_target: List[Tuple[Bipartition, object]] = field(default_factory=list)
    without_target: List[Tuple[Bipartition, object]] = field(default_factory=list)

    @property
    def survivors(self):
        return {p for p, _ in self.with_target} | {p for p, _ in self.without_target}


@dataclass
class LevelSets:
    target_item: int
    item_supports: List[float]
    l1: List[int]
    l1_prime: List[int]
    levels: Dict[int, Level] = field(default_factory=dict)
    capped: bool = False
    diagnostics: List[str] = field(default_factory=list)

    def level(self, k):
        return self.levels.get(k) or Level(k)

    @property
    def last_level(self):
        return max(self.levels, default=1)


@dataclass(frozen=True)
class FuzzyCorrelationRule:
    antecedent: Tuple[int, ...]
    consequent: Tuple[int, ...]
    support: float
    confidence: float
    correlation: float

    def names(self, item_names):
        return (tuple(item_names[j] for j in self.antecedent),
                tuple(item_names[j] for j in self.consequent))


def rule_sort_key(rule, item_names):
    """Canonical order: union size, then confidence descending, then names.

    Confidence is compared at 12 decimals so that ulp-level noise between two
    mathematically equal confidences cannot reorder rules.
    """
    ante, cons = rule.names(item_names)
    return (len(rule.antecedent) + len(rule.consequent),
            -round(rule.confidence, 12), ante, cons)


def _sorted_bipartitions(parts):
    return sorted(set(parts))


def select_target(ds, min_support, target="auto"):
    """Return ``(L_1, target_index, item_supports)``.

    Ties on maximal support go to the lowest item index.
    """
    supports = [item_support(ds, j) for j in range(ds.n_items)]
    l1 = [j for j, s in enumerate(supports) if s >= min_support]
    if target != "auto":
        if target not in ds.item_names:
            raise UnknownTarget(f"target {target!r} is not an item of the dataset")
        t = ds.item_names.index(target)
        if t not in l1:
            raise TargetNotFrequent(
                f"target {target!r} has support {supports[t]:.6g} "
                f"below min_support {min_support:.6g}")
        return l1, t, supports
    if not l1:
        raise NoFrequentItems(
            f"no item reaches min_support {min_support:.6g} "
            f"(max item support {max(supports):.6g})")
    t = max(l1, key=lambda j: (supports[j], -j))
    return l1, t, supports


def generate_level2(l1, l1_prime, target):
    c2 = [Bipartition((a,), (target,)) for a in sorted(l1_prime)]
    others = sorted(l1_prime)
    c2_prime = [Bipartition((a,), (b,))
                for i, a in enumerate(others) for b in others[i + 1:]]
    return _sorted_bipartitions(c2), _sorted_bipartitions(c2_prime)


def _compute_stats(ds, candidates, n_jobs):
    if n_jobs is not None and n_jobs != 1 and len(candidates) > 1:
        workers = None if n_jobs == -1 else n_jobs
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda p: partition_stats(ds, p), candidates))
    else:
        results = [partition_stats(ds, p) for p in candidates]
    return dict(zip(candidates, results))


def filter_level(ds, candidates, min_support, min_correlation, n_jobs=1,
                 diagnostics=None, stats=None):
    """Keep candidates with support >= min_support and correlation >= min_correlation.

    An undefined correlation never passes. Returns ``[(bipartition, stats), ...]``
    in candidate order. *stats* may carry precomputed statistics.
    """
    if not candidates:
        return []
    if ds.n_records < 2:
        raise TooFewRecords(
            f"correlation needs at least 2 records, dataset has {ds.n_records}")
    if stats is None:
        stats = _compute_stats(ds, list(candidates), n_jobs)
    kept = []
    for p in candidates:
        st = stats[p]
        if st.correlation is None:
            if diagnostics is not None:
                a, b = p.names(ds.item_names)
                msg = (f"undefined correlation for {{{', '.join(a)}}} | "
                       f"{{{', '.join(b)}}}: a side has constant membership")
                diagnostics.append(msg)
                logger.info(msg)
            continue
        if st.support >= min_support and st.correlation >= min_correlation:
            kept.append((p, st))
    return kept


def generate_candidates_k(levels, k):
    """Candidates ``(C_k, C'_k)`` for k >= 3 from the survivors of level k - 1.

    Survivors are extended by one item of ``L_1`` on either side, then kept
    only if every immediate sub-bipartition survived level k - 1.
    """
    if k < 3:
        raise ValueError("generate_candidates_k needs k >= 3")
    prev = levels.level(k - 1).survivors
    if not prev:
        return [], []
    pool = sorted(levels.l1)
    seen = set()
    with_t, without_t = [], []
    for p in sorted(prev):
        used = set(p.union)
        for d in pool:
            if d in used:
                continue
            for cand in (Bipartition(p.side_a + (d,), p.side_b),
                         Bipartition(p.side_a, p.side_b + (d,))):
                if cand in seen:
                    continue
                seen.add(cand)
                if all(sub in prev for sub in cand.immediate_subpartitions()):
                    (with_t if levels.target_item in cand else without_t).append(cand)
    return _sorted_bipartitions(with_t), _sorted_bipartitions(without_t)


def candidate_rules(ds, levels):
    """Both directions of every target-containing survivor, unfiltered."""
    out = []
    for k in sorted(levels.levels):
        for p, st in levels.levels[k].with_target:
            for ante, cons in ((p.side_a, p.side_b), (p.side_b, p.side_a)):
                conf = fuzzy_confidence(ds, ante, cons)
                out.append(FuzzyCorrelationRule(ante, cons, st.support, conf,
                                                st.correlation))
    return out


def extract_rules(ds, levels, min_confidence):
    rules = [r for r in candidate_rules(ds, levels) if r.confidence >= min_confidence]
    return sorted(rules, key=lambda r: rule_sort_key(r, ds.item_names))


def mine_levels(ds, cfg, n_jobs=1):
    """Run target selection and the level loop; returns a :class:`LevelSets`."""
    if ds.n_records < 2:
        raise TooFewRecords(
            f"mining needs at least 2 records, dataset has {ds.n_records}")
    l1, target, supports = select_target(ds, cfg.min_support, cfg.target)
    l1_prime = [j for j in l1 if j != target]
    levels = LevelSets(target, supports, l1, l1_prime)
    max_level = cfg.max_level if cfg.max_level is not None else ds.n_items

    k = 2
    c_with, c_without = generate_level2(l1, l1_prime, target)
    while c_with or c_without:
        if k > max_level:
            levels.capped = True
            msg = f"stopped at max_level={max_level} with level {k} candidates pending"
            levels.diagnostics.append(msg)
            logger.warning(msg)
            break
        # failed candidates keep their stats for the audit tables
        stats = _compute_stats(ds, c_with + c_without, n_jobs)
        level = Level(k, c_with, c_without, stats)
        level.with_target = filter_level(ds, c_with, cfg.min_support,
                                         cfg.min_correlation,
                                         diagnostics=levels.diagnostics, stats=stats)
        level.without_target = filter_level(ds, c_without, cfg.min_support,
                                            cfg.min_correlation,
                                            diagnostics=levels.diagnostics, stats=stats)
        levels.levels[k] = level
        k += 1
        c_with, c_without = generate_candidates_k(levels, k)
    return levels


def _row(p, st, passed, names, target):
    a, b = p.side_a, p.side_b
    # target goes on the right-hand side of audit rows
    if target in a:
        a, b = b, a
    return LevelRow(tuple(names[j] for j in a), tuple(names[j] for j in b),
                    st.support, st.correlation, passed)


def build_report(ds, cfg, levels, rules, candidates):
    names = ds.item_names
    tables = []
    for k in sorted(levels.levels):
        lv = levels.levels[k]
        ok = lv.survivors
        tables.append(LevelTable(
            k,
            tuple(_row(p, lv.stats[p], p in ok, names, levels.target_item)
                  for p in lv.candidates_with),
            tuple(_row(p, lv.stats[p], p in ok, names, levels.target_item)
                  for p in lv.candidates_without),
        ))

    def rule_row(r, passed=None):
        a, c = r.names(names)
        return RuleRow(a, c, r.support, r.confidence, r.correlation, passed)

    return MiningReport(
        target=names[levels.target_item],
        thresholds={"min_support": cfg.min_support,
                    "min_confidence": cfg.min_confidence,
                    "min_correlation": cfg.min_correlation},
        items=tuple(names),
        item_supports=tuple(levels.item_supports),
        l1=tuple(names[j] for j in levels.l1),
        levels=tuple(tables),
        candidate_rules=tuple(rule_row(r, r.confidence >= cfg.min_confidence)
                              for r in candidates),
        rules=tuple(rule_row(r) for r in rules),
        capped=levels.capped,
        diagnostics=tuple(levels.diagnostics),
    )


def mine(ds, cfg, n_jobs=1):
    """Mine target-oriented fuzzy correlation rules and return a report."""
    levels = mine_levels(ds, cfg, n_jobs)
    candidates = candidate_rules(ds, levels)
    rules = sorted((r for r in candidates if r.confidence >= cfg.min_confidence),
                   key=lambda r: rule_sort_key(r, ds.item_names))
    return build_report(ds, cfg, levels, rules, candidates)


class TargetFuzzyCorrelationMiner(BaseEstimator):
    """Target-oriented fuzzy correlation rule miner, scikit-learn style.

    Parameters
    ----------
    min_support : float, default=0.25
        Minimum fuzzy support of a bipartition's union, in (0, 1].
    min_confidence : float, default=0.8
        Minimum fuzzy confidence of an extracted rule, in (0, 1].
    min_correlation : float, default=0.3
        Minimum fuzzy simple correlation coefficient, in [-1, 1].
    target : str, default="auto"
        Item name to force as target, or ``"auto"`` for the most supported.
    max_level : int or None, default=None
        Largest itemset size explored. ``None`` uses the number of items.
    n_jobs : int, default=1
        Threads used to score the candidates of one level; ``-1`` for all.

    Attributes
    ----------
    item_names_ : tuple of str
    target_ : str
        Name of the chosen target item.
    levels_ : LevelSets
    rules_ : list of FuzzyCorrelationRule
        Interesting rules in canonical order.
    report_ : MiningReport

    Examples
    --------
    >>> import numpy as np
    >>> X = np.array([[1.0, 0.9], [0.2, 0.1], [0.6, 0.7]])
    >>> m = TargetFuzzyCorrelationMiner(min_support=0.2, min_confidence=0.5).fit(X)
    >>> m.target_
    'f_1'
    >>> [m.rule_names(r) for r in m.rules_]
    [(('f_2',), ('f_1',)), (('f_1',), ('f_2',))]
    """

    def __init__(self, min_support=0.25, min_confidence=0.8, min_correlation=0.3,
                 target="auto", max_level=None, n_jobs=1):
        self.min_support = min_support
        self.min_confidence = min_confidence
        self.min_correlation = min_correlation
        self.target = target
        self.max_level = max_level
        self.n_jobs = n_jobs

    def _config(self):
        return MinerConfig(self.min_support, self.min_confidence,
                           self.min_correlation, self.target, self.max_level)

    def fit(self, X, y=None, item_names=None):
        """Mine rules from a membership matrix.

        Parameters
        ----------
        X : FuzzyDataset, DataFrame or array-like of shape (n_records, n_items)
            Membership degrees in [0, 1].
        y : None
            Ignored.
        item_names : sequence of str, optional
            Column names when ``X`` is a bare array.

        Returns
        -------
        self : object
        """
        cfg = self._config()
        ds = _as_dataset(X, item_names)
        self.n_features_in_ = ds.n_items
        self.item_names_ = ds.item_names
        self.levels_ = mine_levels(ds, cfg, self.n_jobs)
        candidates = candidate_rules(ds, self.levels_)
        self.rules_ = sorted(
            (r for r in candidates if r.confidence >= cfg.min_confidence),
            key=lambda r: rule_sort_key(r, ds.item_names))
        self.report_ = build_report(ds, cfg, self.levels_, self.rules_, candidates)
        self.target_ = ds.item_names[self.levels_.target_item]
        return self

    def rule_names(self, rule):
        check_is_fitted(self, "rules_")
        return rule.names(self.item_names_)


def _as_dataset(X, item_names=None):
    if isinstance(X, FuzzyDataset):
        return X
    record_ids = None
    if hasattr(X, "columns"):
        if item_names is None:
            item_names = [str(c) for c in X.columns]
        record_ids = [str(i) for i in X.index]
    grid = np.asarray(X, dtype=float)
    try:
        return FuzzyDataset.from_array(grid, item_names, record_ids)
    except ValueError as exc:
        raise InvalidConfig(str(exc)) from None
