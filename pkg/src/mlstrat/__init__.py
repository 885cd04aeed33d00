"""Multi-label stratification: k-fold assignment strategies that preserve
label and label-pair evidence across folds, fold-quality audits, and label
co-occurrence network analysis."""

from .dataset import (
    DesirabilityLedger,
    FoldAssignment,
    LabelSetKey,
    MultiLabelDataset,
    build_ledger,
    enumerate_label_sets,
    support_of,
)
from .errors import FoldValidationError, ParseError
from .graph import (
    CoOccurrenceGraph,
    NetworkReport,
    Partition,
    build_graph,
    fastgreedy_communities,
    modularity,
    network_characteristics,
)
from .metrics import (
    FoldStats,
    examples_distribution,
    fold_stats,
    label_distribution,
    label_pair_distribution,
    pair_miss_percentage,
    zero_counts,
)
from .stratifiers import (
    StratifierConfig,
    distribute_over_folds,
    split,
    split_is,
    split_kfold,
    split_labelset,
    split_sois,
)

__version__ = "0.1.0"

__all__ = [
    "CoOccurrenceGraph",
    "DesirabilityLedger",
    "FoldAssignment",
    "FoldStats",
    "FoldValidationError",
    "LabelSetKey",
    "MultiLabelDataset",
    "NetworkReport",
    "ParseError",
    "Partition",
    "StratifierConfig",
    "build_graph",
    "build_ledger",
    "distribute_over_folds",
    "enumerate_label_sets",
    "examples_distribution",
    "fastgreedy_communities",
    "fold_stats",
    "label_distribution",
    "label_pair_distribution",
    "modularity",
    "network_characteristics",
    "pair_miss_percentage",
    "split",
    "split_is",
    "split_kfold",
    "split_labelset",
    "split_sois",
    "support_of",
    "zero_counts",
]
