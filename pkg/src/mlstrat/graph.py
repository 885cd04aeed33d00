"""Label co-occurrence graphs, weighted modularity and fast-greedy communities.

The graph has one vertex per label and an edge for every label pair that
co-occurs in some sample; in the weighted variant the edge weight counts the
co-occurring samples. Modularity follows the standard weighted Newman form

    Q = sum_c [ w_in(c)/W - (s(c)/(2W))^2 ]

with W the total edge weight, w_in the intra-community weight and s the
community strength (degree sum when unweighted). Community detection merges
greedily by the largest positive modularity gain, deterministically.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from statistics import fmean, pstdev
from typing import Iterable, Sequence

from .dataset import MultiLabelDataset


@dataclass(frozen=True)
class CoOccurrenceGraph:
    """Undirected label graph with canonical (lo < hi) edges."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    weights: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        seen = set()
        for lo, hi in self.edges:
            if lo == hi:
                raise ValueError(f"self-loop on vertex {lo}")
            if not (0 <= lo < hi < self.n_vertices):
                raise ValueError(f"edge ({lo}, {hi}) not canonical in-range")
            if (lo, hi) in seen:
                raise ValueError(f"duplicate edge ({lo}, {hi})")
            seen.add((lo, hi))
        if self.weights is not None:
            if len(self.weights) != len(self.edges):
                raise ValueError("one weight per edge required")
            if any(w < 1 for w in self.weights):
                raise ValueError("weights must be >= 1")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_weights(self) -> tuple[float, ...]:
        return self.weights if self.weights is not None else (1,) * len(self.edges)

    def total_weight(self) -> float:
        return float(sum(self.edge_weights()))

    def strengths(self) -> list[float]:
        s = [0.0] * self.n_vertices
        for (lo, hi), w in zip(self.edges, self.edge_weights()):
            s[lo] += w
            s[hi] += w
        return s


@dataclass(frozen=True)
class Partition:
    """Community id per vertex; ids are dense in [0, n_communities)."""

    community_of: tuple[int, ...]

    def __post_init__(self) -> None:
        ids = set(self.community_of)
        if ids != set(range(len(ids))):
            raise ValueError(f"community ids not dense: {sorted(ids)}")

    @property
    def n_communities(self) -> int:
        return len(set(self.community_of))

    def communities(self) -> list[set[int]]:
        out: list[set[int]] = [set() for _ in range(self.n_communities)]
        for v, c in enumerate(self.community_of):
            out[c].add(v)
        return out

    def as_sets(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(c) for c in self.communities())

    @classmethod
    def from_communities(
        cls, groups: Iterable[Iterable[int]], n_vertices: int
    ) -> "Partition":
        """Build from explicit vertex groups, ids ordered by smallest member."""
        sets = [sorted(g) for g in groups]
        sets.sort(key=lambda g: g[0])
        community_of = [-1] * n_vertices
        for cid, members in enumerate(sets):
            for v in members:
                if not 0 <= v < n_vertices:
                    raise ValueError(f"vertex {v} out of range")
                if community_of[v] != -1:
                    raise ValueError(f"vertex {v} in two communities")
                community_of[v] = cid
        if any(c == -1 for c in community_of):
            raise ValueError("groups do not cover every vertex")
        return cls(tuple(community_of))


def build_graph(d: MultiLabelDataset, weighted: bool = True) -> CoOccurrenceGraph:
    """Co-occurrence graph of `d`; weights count co-occurring samples."""
    counts: Counter[tuple[int, int]] = Counter()
    for labels in d.labels_of:
        for a in range(len(labels)):
            for b in range(a + 1, len(labels)):
                counts[(labels[a], labels[b])] += 1
    edges = tuple(sorted(counts))
    weights = tuple(counts[e] for e in edges) if weighted else None
    return CoOccurrenceGraph(d.n_labels, edges, weights)


def modularity(g: CoOccurrenceGraph, p: Partition | Sequence[int]) -> float:
    """Weighted Newman modularity of a partition; errors on zero total weight."""
    if not isinstance(p, Partition):
        p = Partition(tuple(p))
    if len(p.community_of) != g.n_vertices:
        raise ValueError(
            f"partition covers {len(p.community_of)} vertices, graph has {g.n_vertices}"
        )
    W = g.total_weight()
    if W <= 0:
        raise ValueError("modularity undefined on a graph with no edge weight")
    n_comm = p.n_communities
    w_in = [0.0] * n_comm
    strength = [0.0] * n_comm
    for (lo, hi), w in zip(g.edges, g.edge_weights()):
        strength[p.community_of[lo]] += w
        strength[p.community_of[hi]] += w
        if p.community_of[lo] == p.community_of[hi]:
            w_in[p.community_of[lo]] += w
    return sum(
        wi / W - (s / (2.0 * W)) ** 2 for wi, s in zip(w_in, strength)
    )


def fastgreedy_communities(g: CoOccurrenceGraph) -> tuple[Partition, float]:
    """Agglomerative modularity maximisation.

    Starts from singleton communities and repeatedly merges the pair of
    communities with the largest positive modularity gain, ties resolved by
    the smallest (min id, max id) community-id pair; stops when no merge
    increases modularity, so the returned partition sits at the greedy
    modularity peak. Isolated vertices stay singletons.
    """
    W = g.total_weight()
    if W <= 0:
        raise ValueError("community detection needs at least one edge")

    members: dict[int, set[int]] = {v: {v} for v in range(g.n_vertices)}
    strength: dict[int, float] = {v: 0.0 for v in range(g.n_vertices)}
    between: dict[tuple[int, int], float] = {}
    for (lo, hi), w in zip(g.edges, g.edge_weights()):
        strength[lo] += w
        strength[hi] += w
        between[(lo, hi)] = between.get((lo, hi), 0.0) + w

    while True:
        best_gain = 0.0
        best_pair: tuple[int, int] | None = None
        for (a, b) in sorted(between):
            w_ab = between[(a, b)]
            gain = w_ab / W - strength[a] * strength[b] / (2.0 * W * W)
            if gain > best_gain:
                best_gain = gain
                best_pair = (a, b)
        if best_pair is None:
            break
        a, b = best_pair  # a < b; the merged community keeps id a
        members[a] |= members.pop(b)
        strength[a] += strength.pop(b)
        del between[(a, b)]
        for (u, v) in list(between):
            if b not in (u, v):
                continue
            w = between.pop((u, v))
            other = v if u == b else u
            key = (min(a, other), max(a, other))
            between[key] = between.get(key, 0.0) + w

    partition = Partition.from_communities(members.values(), g.n_vertices)
    return partition, modularity(g, partition)


@dataclass(frozen=True)
class NetworkReport:
    """Cross-fold stability of the label graph's community structure.

    Community-size spread is summarised by the per-fold community count and
    mean community size; `unique_communities` and `unique_partitions` count
    distinct vertex sets and distinct partitions pooled over every train and
    test partition; `matched_partitions` counts folds whose train and test
    partitions agree as set-of-sets (with equal isolated-vertex sets).
    """

    k: int
    train_q_mean: float
    train_q_std: float
    train_count_std: float
    train_mean_size_std: float
    test_count_std: float
    test_mean_size_std: float
    unique_communities: int
    unique_partitions: int
    matched_partitions: int
    q_diff_mean: float
    q_diff_std: float

    def measures(self) -> dict[str, float]:
        return {
            "train_q_mean": self.train_q_mean,
            "train_q_std": self.train_q_std,
            "train_count_std": self.train_count_std,
            "train_mean_size_std": self.train_mean_size_std,
            "test_count_std": self.test_count_std,
            "test_mean_size_std": self.test_mean_size_std,
            "unique_communities": self.unique_communities,
            "unique_partitions": self.unique_partitions,
            "matched_partitions": self.matched_partitions,
            "q_diff_mean": self.q_diff_mean,
            "q_diff_std": self.q_diff_std,
        }


def _isolated(g: CoOccurrenceGraph) -> frozenset[int]:
    touched = set()
    for lo, hi in g.edges:
        touched.add(lo)
        touched.add(hi)
    return frozenset(set(range(g.n_vertices)) - touched)


def network_characteristics(
    train_graphs: Sequence[CoOccurrenceGraph],
    test_graphs: Sequence[CoOccurrenceGraph],
) -> NetworkReport:
    """Detect communities on every train/test fold graph and compare them."""
    if len(train_graphs) != len(test_graphs):
        raise ValueError(
            f"{len(train_graphs)} train graphs vs {len(test_graphs)} test graphs"
        )
    if not train_graphs:
        raise ValueError("need at least one fold")
    k = len(train_graphs)

    train_parts, train_qs = zip(*(fastgreedy_communities(g) for g in train_graphs))
    test_parts, test_qs = zip(*(fastgreedy_communities(g) for g in test_graphs))

    def count_and_size(parts: Sequence[Partition]) -> tuple[list[int], list[float]]:
        counts = [p.n_communities for p in parts]
        mean_sizes = [fmean(len(c) for c in p.communities()) for p in parts]
        return counts, mean_sizes

    train_counts, train_sizes = count_and_size(train_parts)
    test_counts, test_sizes = count_and_size(test_parts)

    pooled: set[frozenset[int]] = set()
    pooled_partitions: set[frozenset[frozenset[int]]] = set()
    for p in (*train_parts, *test_parts):
        pooled.update(p.as_sets())
        pooled_partitions.add(p.as_sets())

    matched = 0
    for j in range(k):
        same_partition = train_parts[j].as_sets() == test_parts[j].as_sets()
        same_isolated = _isolated(train_graphs[j]) == _isolated(test_graphs[j])
        if same_partition and same_isolated:
            matched += 1

    diffs = [abs(qt - qs) for qt, qs in zip(train_qs, test_qs)]
    return NetworkReport(
        k=k,
        train_q_mean=fmean(train_qs),
        train_q_std=pstdev(train_qs) if k > 1 else 0.0,
        train_count_std=pstdev(train_counts) if k > 1 else 0.0,
        train_mean_size_std=pstdev(train_sizes) if k > 1 else 0.0,
        test_count_std=pstdev(test_counts) if k > 1 else 0.0,
        test_mean_size_std=pstdev(test_sizes) if k > 1 else 0.0,
        unique_communities=len(pooled),
        unique_partitions=len(pooled_partitions),
        matched_partitions=matched,
        q_diff_mean=fmean(diffs),
        q_diff_std=pstdev(diffs) if k > 1 else 0.0,
    )


def partition_to_lists(p: Partition) -> list[list[int]]:
    """JSON-friendly list-of-lists form, communities ordered by smallest member."""
    return [sorted(c) for c in p.communities()]
