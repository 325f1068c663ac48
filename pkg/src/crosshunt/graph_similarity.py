"""Pairwise graph similarity by weighted dual breadth-first traversal.

Matched node pairs (same kind, same bucket, one node per graph) seed parallel
BFS walks over both graphs. Expanding a frontier pair compares every neighbor
of one side with every neighbor of the other: a neighbor pair that is itself
matched is consumed and enqueued, earning W1 when the connecting edges are
similar and W2 when they are not; an unmatched neighbor pair with similar
connecting edges earns W3. The final score is the accumulated weight divided
by the number of matched pairs before traversal, reported raw and clamped
to 1.0. Traversal order is canonicalized on unordered doc-id pairs, which
makes scores deterministic and role-symmetric.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .bucketizer import CorpusBuckets
from .edge_rules import EdgeContext, RuleSet, edge_context, edges_similar
from .graph_model import DocId, NodeKind, TaggedProvenanceGraph

DEFAULT_WEIGHTS = (1.0, 0.2, 0.8)


@dataclass(frozen=True)
class WeightConfig:
    """W1: matched pair + similar edges; W2: matched pair, dissimilar edges;
    W3: unmatched pair, similar edges."""

    w1: float = DEFAULT_WEIGHTS[0]
    w2: float = DEFAULT_WEIGHTS[1]
    w3: float = DEFAULT_WEIGHTS[2]

    def __post_init__(self) -> None:
        for name, value in (("w1", self.w1), ("w2", self.w2), ("w3", self.w3)):
            if value < 0:
                raise ValueError(f"{name} must be non-negative, got {value}")


PairDoc = tuple[DocId, DocId]  # (doc in first graph, doc in second graph)


@dataclass
class MatchedPairSet:
    """Cross-graph node pairs sharing kind and bucket; original size frozen."""

    pairs: set[PairDoc]
    original_size: int


def build_mps(
    g_a: TaggedProvenanceGraph,
    g_b: TaggedProvenanceGraph,
    buckets: CorpusBuckets,
) -> MatchedPairSet:
    """All (node in g_a, node in g_b) pairs of equal kind and equal bucket."""
    pairs: set[PairDoc] = set()
    for kind in (NodeKind.SUBJECT, NodeKind.OBJECT):
        by_bucket_a: dict[str, list[DocId]] = {}
        for node in g_a.nodes_of_kind(kind):
            doc = g_a.doc_id(node.node_id)
            by_bucket_a.setdefault(buckets.bucket_of(kind, doc), []).append(doc)
        for node in g_b.nodes_of_kind(kind):
            doc_b = g_b.doc_id(node.node_id)
            for doc_a in by_bucket_a.get(buckets.bucket_of(kind, doc_b), ()):
                pairs.add((doc_a, doc_b))
    return MatchedPairSet(pairs, len(pairs))


@dataclass(frozen=True)
class SimilarityScore:
    """Raw and clamped score plus per-pair contributions for explanations."""

    value: float
    mps_size: int
    matched_pairs: tuple[tuple[DocId, DocId, float], ...]

    @property
    def clamped(self) -> float:
        return min(1.0, self.value)

    def to_lines(self) -> list[str]:
        """FINAL header plus one `<doc_a> <doc_b> <contribution>` per pair."""
        lines = [f"FINAL {self.value!r} {self.clamped!r}"]
        for (gid_a, nid_a), (gid_b, nid_b), contribution in self.matched_pairs:
            lines.append(f"{gid_a}:{nid_a} {gid_b}:{nid_b} {contribution!r}")
        return lines


def _pair_key(pair: PairDoc) -> tuple[DocId, DocId, DocId, DocId]:
    a, b = pair
    lo, hi = (a, b) if a <= b else (b, a)
    return (lo, hi, a, b)


class _Traversal:
    """Shared state for one graph pair: adjacency, rules, edge-match cache."""

    def __init__(
        self,
        g_a: TaggedProvenanceGraph,
        g_b: TaggedProvenanceGraph,
        rules: RuleSet,
        weights: WeightConfig,
    ):
        self.g_a = g_a
        self.g_b = g_b
        self.rules = rules
        self.weights = weights
        self._ctx_cache: dict[tuple[int, int], EdgeContext] = {}
        self._match_cache: dict[tuple[str, str, str, str], bool] = {}

    def _contexts(self, graph: TaggedProvenanceGraph, a: str, b: str, side: int):
        out = []
        for i, edge in enumerate(graph.edges_between(a, b)):
            key = (side, id(edge))
            ctx = self._ctx_cache.get(key)
            if ctx is None:
                ctx = edge_context(graph, edge)
                self._ctx_cache[key] = ctx
            out.append(ctx)
        return out

    def edges_match(self, n_a: str, v_a: str, n_b: str, v_b: str) -> bool:
        """Any pairing of parallel edges (n_a,v_a) x (n_b,v_b) is similar."""
        cache_key = (n_a, v_a, n_b, v_b)
        hit = self._match_cache.get(cache_key)
        if hit is not None:
            return hit
        result = any(
            edges_similar(ca, cb, self.rules)
            for ca in self._contexts(self.g_a, n_a, v_a, 0)
            for cb in self._contexts(self.g_b, n_b, v_b, 1)
        )
        self._match_cache[cache_key] = result
        return result

    def bfs(
        self,
        root: PairDoc,
        pairs: set[PairDoc],
        contributions: dict[PairDoc, float],
    ) -> float:
        """One dual BFS from a root pair already removed from `pairs`."""
        w = self.weights
        queue: deque[PairDoc] = deque([root])
        total = 0.0
        while queue:
            doc_a, doc_b = queue.popleft()
            pairs.discard((doc_a, doc_b))  # no-op: consumed at enqueue time
            n_a, n_b = doc_a[1], doc_b[1]
            acc = 0.0
            cells = [
                ((self.g_a.graph_id, v_a), (self.g_b.graph_id, v_b))
                for v_a in self.g_a.neighbors(n_a)
                for v_b in self.g_b.neighbors(n_b)
            ]
            cells.sort(key=_pair_key)
            for cell in cells:
                cell_a, cell_b = cell
                similar = self.edges_match(n_a, cell_a[1], n_b, cell_b[1])
                if cell in pairs:
                    pairs.remove(cell)
                    queue.append(cell)
                    acc += w.w1 if similar else w.w2
                elif similar:
                    acc += w.w3
            contributions[(doc_a, doc_b)] = acc
            total += acc
        return total


def parallel_bfs(
    n_a: DocId,
    n_b: DocId,
    g_a: TaggedProvenanceGraph,
    g_b: TaggedProvenanceGraph,
    mps: MatchedPairSet,
    rules: RuleSet,
    weights: WeightConfig = WeightConfig(),
) -> float:
    """Run one dual BFS from (n_a, n_b), consuming matched pairs from mps."""
    root = (n_a, n_b)
    mps.pairs.discard(root)
    contributions: dict[PairDoc, float] = {}
    return _Traversal(g_a, g_b, rules, weights).bfs(root, mps.pairs, contributions)


def similarity(
    g_a: TaggedProvenanceGraph,
    g_b: TaggedProvenanceGraph,
    buckets: CorpusBuckets,
    rules: RuleSet | None = None,
    weights: WeightConfig = WeightConfig(),
) -> SimilarityScore:
    """Score one graph pair: accumulated traversal weight over matched pairs.

    Every matched pair eventually roots or joins a traversal; the raw score is
    the sum of per-pair contributions, each normalized by the original matched
    pair count. Empty matched set scores 0.
    """
    if rules is None:
        rules = RuleSet.default()
    mps = build_mps(g_a, g_b, buckets)
    len_mps = mps.original_size
    if len_mps == 0:
        return SimilarityScore(0.0, 0, ())
    traversal = _Traversal(g_a, g_b, rules, weights)
    pairs = set(mps.pairs)
    contributions: dict[PairDoc, float] = {}
    while pairs:
        root = min(pairs, key=_pair_key)
        pairs.remove(root)
        traversal.bfs(root, pairs, contributions)
    ordered = sorted(contributions.items(), key=lambda item: _pair_key(item[0]))
    matched: list[tuple[DocId, DocId, float]] = []
    value = 0.0
    for (doc_a, doc_b), acc in ordered:
        contribution = acc / len_mps
        matched.append((doc_a, doc_b, contribution))
        value += contribution
    return SimilarityScore(value, len_mps, tuple(matched))
