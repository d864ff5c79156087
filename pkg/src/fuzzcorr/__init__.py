"""Target-oriented fuzzy correlation rule mining."""

from .dataset import (
    FuzzyDataset,
    FuzzyMembershipTransformer,
    MembershipSpec,
    UsageMatrix,
    emit_csv,
    fuzzify_matrix,
    fuzzify_value,
    parse_fuzzy_csv,
    parse_usage_csv,
)
from .exceptions import FuzzCorrError
from .fuzzstats import (
    Bipartition,
    PartitionStats,
    correlation_of_sequences,
    fuzzy_confidence,
    fuzzy_support,
    item_support,
    itemset_membership,
    partition_stats,
)
from .miner import (
    FuzzyCorrelationRule,
    LevelSets,
    MinerConfig,
    TargetFuzzyCorrelationMiner,
    mine,
    mine_levels,
)
from .oracle import naive_stats, oracle_levels, oracle_mine
from .report import MiningReport

__version__ = "0.1.0"

__all__ = [
    "Bipartition",
    "FuzzCorrError",
    "FuzzyCorrelationRule",
    "FuzzyDataset",
    "FuzzyMembershipTransformer",
    "LevelSets",
    "MembershipSpec",
    "MinerConfig",
    "MiningReport",
    "PartitionStats",
    "TargetFuzzyCorrelationMiner",
    "UsageMatrix",
    "correlation_of_sequences",
    "emit_csv",
    "fuzzify_matrix",
    "fuzzify_value",
    "fuzzy_confidence",
    "fuzzy_support",
    "item_support",
    "itemset_membership",
    "mine",
    "mine_levels",
    "naive_stats",
    "oracle_levels",
    "oracle_mine",
    "parse_fuzzy_csv",
    "parse_usage_csv",
    "partition_stats",
]
