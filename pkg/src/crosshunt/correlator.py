"""Corpus-level hunting: score seeds against candidates, alert, evaluate.

A hunt featurizes and bucketizes the whole corpus once, scores every
(seed, other-graph) pair with the traversal engine, and raises an alert for
each candidate whose best clamped score clears the alert threshold.
Evaluation derives pair labels from per-graph ground truth (a pair is
positive when both graphs are attacks); seed-seed pairs are reported but
excluded from the confusion counts.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable

from sklearn.metrics import adjusted_rand_score, normalized_mutual_info_score

from .bucketizer import (
    BucketMap,
    CorpusBuckets,
    DEFAULT_BUCKET_THRESHOLD,
    DEFAULT_SEED,
    DEFAULT_SIGNATURE_LENGTH,
    bucketize,
)
from .edge_rules import RuleSet
from .errors import CoverageGapError, MissingSeedError
from .featurizer import DocumentSet, FeatureMatrix, TfIdfTable, featurize
from .graph_model import Corpus, DocId, NodeKind
from .graph_similarity import SimilarityScore, WeightConfig, similarity


@dataclass(frozen=True)
class HuntConfig:
    seed_ids: tuple[str, ...]
    alert_threshold: float = 0.5
    weights: WeightConfig = field(default_factory=WeightConfig)
    j_t: float = DEFAULT_BUCKET_THRESHOLD
    signature_length: int = DEFAULT_SIGNATURE_LENGTH
    seed: int = DEFAULT_SEED
    exact_jaccard: bool = False
    banding: bool = False
    workers: int = 0

    def __post_init__(self) -> None:
        if not self.seed_ids:
            raise ValueError("a hunt needs at least one seed graph id")
        if not (0.0 <= self.alert_threshold <= 1.0):
            raise ValueError(
                f"alert threshold must be in [0, 1], got {self.alert_threshold}"
            )


@dataclass
class CorpusFeatures:
    """Per-kind documents, score tables and binary matrices for a corpus."""

    documents: dict[NodeKind, DocumentSet]
    tables: dict[NodeKind, TfIdfTable]
    matrices: dict[NodeKind, FeatureMatrix]


def featurize_corpus(corpus: Corpus) -> CorpusFeatures:
    documents: dict[NodeKind, DocumentSet] = {}
    tables: dict[NodeKind, TfIdfTable] = {}
    matrices: dict[NodeKind, FeatureMatrix] = {}
    graphs = list(corpus.iter_graphs())
    for kind in (NodeKind.SUBJECT, NodeKind.OBJECT):
        if not any(g.nodes_of_kind(kind) for g in graphs):
            continue
        docs, table, matrix = featurize(graphs, kind)
        documents[kind] = docs
        tables[kind] = table
        matrices[kind] = matrix
    return CorpusFeatures(documents, tables, matrices)


def bucketize_corpus(
    features: CorpusFeatures,
    j_t: float = DEFAULT_BUCKET_THRESHOLD,
    signature_length: int = DEFAULT_SIGNATURE_LENGTH,
    seed: int = DEFAULT_SEED,
    exact: bool = False,
    banding: bool = False,
) -> CorpusBuckets:
    return CorpusBuckets(
        {
            kind: bucketize(
                matrix,
                j_t=j_t,
                signature_length=signature_length,
                seed=seed,
                exact=exact,
                banding=banding,
            )
            for kind, matrix in features.matrices.items()
        }
    )


@dataclass(frozen=True)
class PairScore:
    a: str
    b: str
    raw: float
    clamped: float


@dataclass(frozen=True)
class Alert:
    graph_id: str
    host_id: str
    score: float


@dataclass
class HuntReport:
    seed_ids: tuple[str, ...]
    alert_threshold: float
    weights: WeightConfig
    j_t: float
    signature_length: int
    seed: int
    pairs: tuple[PairScore, ...]
    alerts: tuple[Alert, ...]
    correlated_hosts: tuple[str, ...]

    def score_of(self, a: str, b: str) -> PairScore | None:
        key = (a, b) if a <= b else (b, a)
        for pair in self.pairs:
            if (pair.a, pair.b) == key:
                return pair
        return None

    def to_dict(self) -> dict:
        return {
            "params": {
                "seeds": list(self.seed_ids),
                "threshold": self.alert_threshold,
                "weights": [self.weights.w1, self.weights.w2, self.weights.w3],
                "j_t": self.j_t,
                "signature_length": self.signature_length,
                "seed": self.seed,
            },
            "pairs": [
                {"a": p.a, "b": p.b, "raw": p.raw, "clamped": p.clamped}
                for p in self.pairs
            ],
            "alerts": [
                {"graph_id": a.graph_id, "host_id": a.host_id, "score": a.score}
                for a in self.alerts
            ],
            "correlated_hosts": list(self.correlated_hosts),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_machine_text(self) -> str:
        w = self.weights
        lines = [
            "HUNT v1",
            f"PARAM seeds {','.join(self.seed_ids)}",
            f"PARAM threshold {self.alert_threshold!r}",
            f"PARAM jt {self.j_t!r}",
            f"PARAM signature_length {self.signature_length}",
            f"PARAM seed {self.seed}",
            f"PARAM weights {w.w1!r} {w.w2!r} {w.w3!r}",
        ]
        lines += [f"PAIR {p.a} {p.b} {p.raw!r} {p.clamped!r}" for p in self.pairs]
        lines += [f"ALERT {a.graph_id} {a.host_id} {a.score!r}" for a in self.alerts]
        lines.append(f"HOSTS {' '.join(self.correlated_hosts)}")
        lines.append("END")
        return "\n".join(lines) + "\n"

    def to_table_text(self) -> str:
        lines = [
            f"seeds: {', '.join(self.seed_ids)}  "
            f"(threshold {self.alert_threshold:.2f})",
            f"{'alert':5}  {'graph':12} {'host':10} {'best':>7}",
        ]
        by_alert = {a.graph_id: a for a in self.alerts}
        best: dict[str, float] = {}
        seeds = set(self.seed_ids)
        for p in self.pairs:
            for gid, other in ((p.a, p.b), (p.b, p.a)):
                if gid not in seeds and other in seeds:
                    best[gid] = max(best.get(gid, 0.0), p.clamped)
        for gid in sorted(best, key=lambda g: (-best[g], g)):
            mark = "  *  " if gid in by_alert else "     "
            host = by_alert[gid].host_id if gid in by_alert else "-"
            lines.append(f"{mark}  {gid:12} {host:10} {best[gid]:7.3f}")
        lines.append(
            f"candidates scored: {len(best)}, alerts: {len(self.alerts)}, "
            f"hosts: {len(self.correlated_hosts)}"
        )
        return "\n".join(lines) + "\n"


def hunt(
    corpus: Corpus,
    config: HuntConfig,
    rules: RuleSet | None = None,
    buckets: CorpusBuckets | None = None,
) -> HuntReport:
    """Score every (seed, other) pair and alert above the clamped threshold."""
    for seed_id in config.seed_ids:
        if seed_id not in corpus.graphs:
            raise MissingSeedError(f"seed graph {seed_id!r} is not in the corpus")
    if rules is None:
        rules = RuleSet.default()
    if buckets is None:
        features = featurize_corpus(corpus)
        buckets = bucketize_corpus(
            features,
            j_t=config.j_t,
            signature_length=config.signature_length,
            seed=config.seed,
            exact=config.exact_jaccard,
            banding=config.banding,
        )

    seeds = sorted(set(config.seed_ids))
    pair_keys = sorted(
        {
            (min(s, other), max(s, other))
            for s in seeds
            for other in corpus.graph_ids()
            if other != s
        }
    )

    def score(key: tuple[str, str]) -> SimilarityScore:
        return similarity(
            corpus.graphs[key[0]],
            corpus.graphs[key[1]],
            buckets,
            rules,
            config.weights,
        )

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(score, pair_keys))
    else:
        results = [score(key) for key in pair_keys]
    pairs = tuple(
        PairScore(a, b, s.value, s.clamped)
        for (a, b), s in zip(pair_keys, results)
    )

    seed_set = set(seeds)
    best: dict[str, float] = {}
    for p in pairs:
        for gid, other in ((p.a, p.b), (p.b, p.a)):
            if gid not in seed_set and other in seed_set:
                best[gid] = max(best.get(gid, 0.0), p.clamped)
    alerts = tuple(
        Alert(gid, corpus.graphs[gid].host_id, best[gid])
        for gid in sorted(best)
        if best[gid] >= config.alert_threshold
    )
    hosts = tuple(sorted({a.host_id for a in alerts}))
    return HuntReport(
        seed_ids=tuple(seeds),
        alert_threshold=config.alert_threshold,
        weights=config.weights,
        j_t=config.j_t,
        signature_length=config.signature_length,
        seed=config.seed,
        pairs=pairs,
        alerts=alerts,
        correlated_hosts=hosts,
    )


# -- evaluation ----------------------------------------------------------------


@dataclass(frozen=True)
class EvalReport:
    threshold: float
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def precision(self) -> float:
        d = self.tp + self.fp
        return self.tp / d if d else 0.0

    @property
    def recall(self) -> float:
        d = self.tp + self.fn
        return self.tp / d if d else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if (p + r) else 0.0

    @property
    def accuracy(self) -> float:
        total = self.tp + self.fp + self.tn + self.fn
        return (self.tp + self.tn) / total if total else 0.0

    def to_line(self) -> str:
        return (
            f"{self.threshold:.2f} {self.precision:.6f} {self.recall:.6f} "
            f"{self.f1:.6f} {self.accuracy:.6f}"
        )


def parse_truth(text: str) -> dict[str, bool]:
    """Lines of `<graph_id> attack|benign` -> per-graph attack flag."""
    truth: dict[str, bool] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or parts[1] not in ("attack", "benign"):
            raise ValueError(
                f"truth line {lineno}: expected '<graph_id> attack|benign'"
            )
        truth[parts[0]] = parts[1] == "attack"
    return truth


def evaluate(
    report: HuntReport, truth: dict[str, bool], threshold: float | None = None
) -> EvalReport:
    """Confusion counts over scored non-seed-seed pairs at a threshold."""
    t = report.alert_threshold if threshold is None else threshold
    if not (0.0 <= t <= 1.0):
        raise ValueError(f"threshold must be in [0, 1], got {t}")
    seeds = set(report.seed_ids)
    tp = fp = tn = fn = 0
    for pair in report.pairs:
        if pair.a in seeds and pair.b in seeds:
            continue  # reported, never counted
        for gid in (pair.a, pair.b):
            if gid not in truth:
                raise CoverageGapError(f"graph {gid!r} missing from ground truth")
        positive = truth[pair.a] and truth[pair.b]
        predicted = pair.clamped >= t
        if positive and predicted:
            tp += 1
        elif positive:
            fn += 1
        elif predicted:
            fp += 1
        else:
            tn += 1
    return EvalReport(t, tp, fp, tn, fn)


def threshold_sweep(
    report: HuntReport,
    truth: dict[str, bool],
    lo: float,
    hi: float,
    step: float,
) -> list[EvalReport]:
    """Evaluate at lo, lo+step, ... up to hi (inclusive, float-safe)."""
    if step <= 0:
        raise ValueError("sweep step must be positive")
    if hi < lo:
        raise ValueError("sweep upper bound below lower bound")
    out = []
    i = 0
    while True:
        t = round(lo + i * step, 10)
        if t > hi + 1e-9:
            break
        out.append(evaluate(report, truth, min(t, 1.0)))
        i += 1
    return out


def bucket_quality(
    predicted: BucketMap, truth: dict[DocId, str]
) -> tuple[float, float]:
    """(NMI with arithmetic normalization, adjusted Rand score) vs truth."""
    doc_ids = sorted(predicted.assignment)
    missing = [d for d in doc_ids if d not in truth]
    if missing:
        raise CoverageGapError(
            f"{len(missing)} bucketed nodes missing from cluster truth, "
            f"first: {missing[0]}"
        )
    if not doc_ids:
        raise ValueError("empty bucket map")
    labels_true = [truth[d] for d in doc_ids]
    labels_pred = [predicted.assignment[d] for d in doc_ids]
    nmi = float(normalized_mutual_info_score(labels_true, labels_pred))
    ars = float(adjusted_rand_score(labels_true, labels_pred))
    return nmi, ars


# -- benchmark -----------------------------------------------------------------


@dataclass(frozen=True)
class BenchRow:
    n_nodes: int
    n_documents: int
    featurize_s: float
    bucketize_s: float
    similarity_s: float

    def to_line(self) -> str:
        return (
            f"{self.n_nodes} {self.featurize_s:.4f} "
            f"{self.bucketize_s:.4f} {self.similarity_s:.4f}"
        )


def benchmark(
    sizes: Iterable[int],
    j_t: float = DEFAULT_BUCKET_THRESHOLD,
    signature_length: int = DEFAULT_SIGNATURE_LENGTH,
    seed: int = DEFAULT_SEED,
    rng_seed: int = 3,
) -> list[BenchRow]:
    """Wall-clock per stage on synthetic corpora of the requested sizes."""
    from . import synth

    rows = []
    for size in sizes:
        corpus, _ = synth.benchmark_corpus(size, rng_seed=rng_seed)
        n_nodes = sum(len(g.nodes) for g in corpus.iter_graphs())

        t0 = time.perf_counter()
        features = featurize_corpus(corpus)
        t1 = time.perf_counter()
        buckets = bucketize_corpus(
            features, j_t=j_t, signature_length=signature_length, seed=seed
        )
        t2 = time.perf_counter()
        config = HuntConfig(
            seed_ids=tuple(corpus.seed_ids),
            j_t=j_t,
            signature_length=signature_length,
            seed=seed,
        )
        hunt(corpus, config, buckets=buckets)
        t3 = time.perf_counter()

        n_docs = sum(len(d) for d in features.documents.values())
        rows.append(BenchRow(n_nodes, n_docs, t1 - t0, t2 - t1, t3 - t2))
    return rows
