"""Dual-BFS scoring: hand-traced goldens, invariants, and oracle agreement."""

import itertools

import pytest

from crosshunt import synth
from crosshunt.bucketizer import BucketMap, CorpusBuckets
from crosshunt.correlator import bucketize_corpus, featurize_corpus
from crosshunt.edge_rules import RuleSet
from crosshunt.graph_model import Edge, Node, NodeKind, TaggedProvenanceGraph
from crosshunt.graph_similarity import (
    MatchedPairSet,
    SimilarityScore,
    WeightConfig,
    build_mps,
    parallel_bfs,
    similarity,
)

from conftest import hand_buckets
from reference_similarity import ref_similarity

S, O = NodeKind.SUBJECT, NodeKind.OBJECT

RULES = RuleSet.default()


def star(gid, host, hub, leaves, syscall="read", susp="Untrusted_Read"):
    """Hub subject with `leaves` object children, uniform edge labels."""
    nodes = [Node(hub, S, "powershell.exe -nop")]
    edges = []
    for i, leaf in enumerate(leaves):
        nodes.append(Node(leaf, O, f"file_{gid}_{i}.txt"))
        edges.append(Edge(hub, leaf, syscall, susp, i))
    return TaggedProvenanceGraph.build(gid, host, nodes, edges)


@pytest.fixture()
def stars():
    g1 = star("g1", "h1", "s1", ["f1", "f2", "f3"])
    g2 = star("g2", "h2", "s2", ["h1", "h2", "h3"])
    return g1, g2


def corpus_buckets(corpus):
    return bucketize_corpus(featurize_corpus(corpus))


def bucket_lookup(buckets):
    def bucket_of(kind_value, doc):
        kind = S if kind_value == "subject" else O
        return buckets.bucket_of(kind, doc)

    return bucket_of


class TestHandTracedGoldens:
    def test_full_star_alignment(self, stars):
        # hubs and all three leaf pairs matched; every cell edge-similar.
        # trace: root leaf pair earns W1; hub expansion earns 2*W1 (fresh leaf
        # pairs) + 7*W3 (spent root pair + 6 unmatched cross pairs); the two
        # remaining leaf pairs earn W3 each -> 3*W1 + 9*W3 = 10.2 over 4 pairs
        g1, g2 = stars
        buckets = hand_buckets(
            {("g1", "s1"): "hub", ("g2", "s2"): "hub"},
            {
                ("g1", "f1"): "b1", ("g2", "h1"): "b1",
                ("g1", "f2"): "b2", ("g2", "h2"): "b2",
                ("g1", "f3"): "b3", ("g2", "h3"): "b3",
            },
        )
        score = similarity(g1, g2, buckets)
        assert score.mps_size == 4
        assert abs(score.value - 10.2 / 4) <= 1e-12
        assert score.clamped == 1.0

    def test_hub_only_alignment(self, stars):
        # single matched pair; all 9 hub-expansion cells unmatched but
        # edge-similar -> 9 * W3 = 7.2 over 1 pair
        g1, g2 = stars
        buckets = hand_buckets(
            {("g1", "s1"): "hub", ("g2", "s2"): "hub"},
            {
                ("g1", "f1"): "a1", ("g2", "h1"): "a2",
                ("g1", "f2"): "a3", ("g2", "h2"): "a4",
                ("g1", "f3"): "a5", ("g2", "h3"): "a6",
            },
        )
        score = similarity(g1, g2, buckets)
        assert score.mps_size == 1
        assert abs(score.value - 7.2) <= 1e-12
        assert score.clamped == 1.0

    def test_dissimilar_edges_earn_w2_not_w1(self):
        # matched chain with clashing suspiciousness tags: consumption pays W2
        g1 = star("g1", "h1", "s1", ["f1"], susp="Tag_A")
        g2 = star("g2", "h2", "s2", ["h1"], susp="Tag_B")
        buckets = hand_buckets(
            {("g1", "s1"): "hub", ("g2", "s2"): "hub"},
            {("g1", "f1"): "leaf", ("g2", "h1"): "leaf"},
        )
        score = similarity(g1, g2, buckets)
        # root (f1,h1): consumes (s1,s2) for W2; (s1,s2) sees spent (f1,h1),
        # not similar, 0; total 0.2 over 2 pairs
        assert score.mps_size == 2
        assert abs(score.value - 0.2 / 2) <= 1e-12

    def test_demo_pair_contributions(self, demo_corpus):
        buckets = corpus_buckets(demo_corpus)
        a = demo_corpus.graphs["demo-a"]
        b = demo_corpus.graphs["demo-b"]
        score = similarity(a, b, buckets)
        assert score.mps_size == 3
        assert abs(score.value - 1.2) <= 1e-12
        assert score.clamped == 1.0
        assert {(p[0][1], p[1][1]) for p in score.matched_pairs} == {
            ("p0", "p0"), ("o0", "o0"), ("o1", "o1"),
        }


class TestScoreShape:
    def test_empty_mps_scores_zero(self, stars):
        g1, g2 = stars
        buckets = hand_buckets(
            {("g1", "s1"): "x", ("g2", "s2"): "y"},
            {
                ("g1", "f1"): "a1", ("g2", "h1"): "a2",
                ("g1", "f2"): "a3", ("g2", "h2"): "a4",
                ("g1", "f3"): "a5", ("g2", "h3"): "a6",
            },
        )
        assert similarity(g1, g2, buckets) == SimilarityScore(0.0, 0, ())

    def test_contributions_sum_exactly_to_value(self, day2):
        corpus, _ = day2
        buckets = corpus_buckets(corpus)
        seed = corpus.graphs["seed-01"]
        for gid in ("atk-04", "ben-001", "seed-02"):
            score = similarity(seed, corpus.graphs[gid], buckets)
            total = 0.0
            for _, _, contribution in score.matched_pairs:
                total += contribution
            assert total == score.value  # bitwise, not approximate

    def test_every_matched_pair_is_reported_once(self, stars):
        g1, g2 = stars
        buckets = hand_buckets(
            {("g1", "s1"): "hub", ("g2", "s2"): "hub"},
            {
                ("g1", "f1"): "b1", ("g2", "h1"): "b1",
                ("g1", "f2"): "b2", ("g2", "h2"): "b2",
                ("g1", "f3"): "b3", ("g2", "h3"): "b3",
            },
        )
        mps = build_mps(g1, g2, buckets)
        score = similarity(g1, g2, buckets)
        reported = [(p[0], p[1]) for p in score.matched_pairs]
        assert sorted(reported) == sorted(mps.pairs)
        assert len(set(reported)) == len(reported)

    def test_to_lines_round_trips_floats(self, demo_corpus):
        buckets = corpus_buckets(demo_corpus)
        score = similarity(
            demo_corpus.graphs["demo-a"], demo_corpus.graphs["demo-b"], buckets
        )
        lines = score.to_lines()
        assert lines[0].startswith("FINAL ")
        raw = float(lines[0].split()[1])
        assert raw == score.value
        contributions = [float(line.split()[2]) for line in lines[1:]]
        assert sum(contributions) <= score.value + 1e-15
        total = 0.0
        for c in contributions:
            total += c
        assert total == score.value

    def test_clamp_only_affects_reported_value(self, stars):
        g1, g2 = stars
        buckets = hand_buckets(
            {("g1", "s1"): "hub", ("g2", "s2"): "hub"},
            {
                ("g1", "f1"): "a1", ("g2", "h1"): "a2",
                ("g1", "f2"): "a3", ("g2", "h2"): "a4",
                ("g1", "f3"): "a5", ("g2", "h3"): "a6",
            },
        )
        score = similarity(g1, g2, buckets)
        assert score.value > 1.0
        assert score.clamped == 1.0


class TestInvariants:
    def test_role_symmetry_is_bitwise(self, tiny_family):
        buckets = corpus_buckets(tiny_family)
        gids = tiny_family.graph_ids()
        for a, b in itertools.combinations(gids[:8], 2):
            fwd = similarity(tiny_family.graphs[a], tiny_family.graphs[b], buckets)
            rev = similarity(tiny_family.graphs[b], tiny_family.graphs[a], buckets)
            assert fwd.value == rev.value, (a, b)
            assert fwd.mps_size == rev.mps_size
            swapped = {(q, p): c for p, q, c in rev.matched_pairs}
            assert {(p, q): c for p, q, c in fwd.matched_pairs} == swapped

    def test_self_similarity_is_high(self, day2):
        corpus, _ = day2
        buckets = corpus_buckets(corpus)
        g = corpus.graphs["seed-01"]
        assert similarity(g, g, buckets).clamped == 1.0

    def test_weights_scale_monotonically(self, stars):
        g1, g2 = stars
        buckets = hand_buckets(
            {("g1", "s1"): "hub", ("g2", "s2"): "hub"},
            {
                ("g1", "f1"): "b1", ("g2", "h1"): "b1",
                ("g1", "f2"): "b2", ("g2", "h2"): "b2",
                ("g1", "f3"): "b3", ("g2", "h3"): "b3",
            },
        )
        base = similarity(g1, g2, buckets, weights=WeightConfig(1.0, 0.2, 0.8))
        boosted = similarity(g1, g2, buckets, weights=WeightConfig(1.0, 0.2, 0.9))
        zero = similarity(g1, g2, buckets, weights=WeightConfig(0.0, 0.0, 0.0))
        assert boosted.value > base.value
        assert zero.value == 0.0

    def test_negative_weights_rejected(self):
        with pytest.raises(ValueError):
            WeightConfig(w1=-0.5)

    def test_parallel_edges_count_once_per_cell(self):
        # two parallel edges between the same endpoints; only one combination
        # is similar, and the cell still earns a single W1
        def pair_graph(gid):
            return TaggedProvenanceGraph.build(
                gid, "h",
                [Node("p", S, "proc"), Node("o", O, "obj")],
                [
                    Edge("p", "o", "read", "Tag_One", 0),
                    Edge("p", "o", "write", "Tag_Two", 1),
                ],
            )

        g1, g2 = pair_graph("g1"), pair_graph("g2")
        buckets = hand_buckets(
            {("g1", "p"): "p", ("g2", "p"): "p"},
            {("g1", "o"): "o", ("g2", "o"): "o"},
        )
        score = similarity(g1, g2, buckets)
        # root (o,o) consumes (p,p) with W1; (p,p) then sees the spent (o,o)
        # cell as similar for W3 -> (1.0 + 0.8) / 2
        assert abs(score.value - 1.8 / 2) <= 1e-12


class TestOracleAgreement:
    def test_engine_matches_reference_on_tiny_family(self, tiny_family):
        buckets = corpus_buckets(tiny_family)
        lookup = bucket_lookup(buckets)
        gids = tiny_family.graph_ids()
        checked = 0
        for a, b in itertools.combinations(gids, 2):
            g_a, g_b = tiny_family.graphs[a], tiny_family.graphs[b]
            score = similarity(g_a, g_b, buckets)
            value, size, contributions = ref_similarity(g_a, g_b, lookup)
            assert abs(score.value - value) <= 1e-12, (a, b)
            assert score.mps_size == size
            assert {(p, q): c for p, q, c in score.matched_pairs} == pytest.approx(
                contributions, abs=1e-12
            )
            checked += 1
        assert checked >= 50

    def test_parallel_bfs_consumes_from_the_shared_set(self, stars):
        g1, g2 = stars
        buckets = hand_buckets(
            {("g1", "s1"): "hub", ("g2", "s2"): "hub"},
            {
                ("g1", "f1"): "b1", ("g2", "h1"): "b1",
                ("g1", "f2"): "b2", ("g2", "h2"): "b2",
                ("g1", "f3"): "b3", ("g2", "h3"): "b3",
            },
        )
        mps = build_mps(g1, g2, buckets)
        assert mps.original_size == 4
        total = parallel_bfs(
            (("g1", "f1")), (("g2", "h1")), g1, g2, mps, RULES
        )
        # the walk reaches every matched pair, so the set drains completely
        assert mps.pairs == set()
        assert abs(total - 10.2) <= 1e-12
