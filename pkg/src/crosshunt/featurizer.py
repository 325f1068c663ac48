"""Node labels -> binary feature rows.

Labels are tokenized (lowercase, whitespace split, then path-component split),
scored with plain TF-IDF (term frequency normalized by document length, inverse
document frequency with a natural log and no smoothing), and binarized per
document against the median score of its distinct terms. Subject and object
node populations are featurized separately so process command lines never share
a vocabulary with file paths.
"""

from __future__ import annotations

import math
import re
import statistics
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .graph_model import DocId, NodeKind, TaggedProvenanceGraph

_PATH_SEP_RE = re.compile(r"[\\/]+")


def tokenize(label: str) -> list[str]:
    """Lowercase, split on whitespace, then split chunks on / and \\ .

    Every non-empty path component is emitted, intermediate and final alike.
    """
    tokens: list[str] = []
    for chunk in label.lower().split():
        for part in _PATH_SEP_RE.split(chunk):
            if part:
                tokens.append(part)
    return tokens


def document_terms(label: str) -> list[str]:
    """Tokens for one node label; never empty for a non-blank label."""
    tokens = tokenize(label)
    if tokens:
        return tokens
    # pathological labels like "///" still need one term so rows are non-empty
    fallback = label.strip().lower()
    if not fallback:
        raise ValueError("cannot featurize a blank label")
    return [fallback]


@dataclass(frozen=True)
class Document:
    doc_id: DocId
    terms: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError(f"document {self.doc_id} has no terms")


@dataclass
class DocumentSet:
    """Documents of one node kind, sorted by doc id."""

    kind: NodeKind
    documents: tuple[Document, ...]

    def __len__(self) -> int:
        return len(self.documents)

    def doc_ids(self) -> list[DocId]:
        return [d.doc_id for d in self.documents]


def tf(term: str, terms: Sequence[str]) -> float:
    """Raw count of term over total token count of the document."""
    if not terms:
        raise ValueError("empty document")
    return terms.count(term) / len(terms)


def idf(term: str, documents: Iterable[Sequence[str]]) -> float:
    """Natural log of corpus size over the term's document frequency."""
    docs = list(documents)
    if not docs:
        raise ValueError("empty corpus")
    df = sum(1 for d in docs if term in d)
    if df == 0:
        raise KeyError(f"term {term!r} appears in no document")
    return math.log(len(docs) / df)


@dataclass
class TfIdfTable:
    """Scores per (doc, distinct term) plus each document's median score."""

    scores: dict[DocId, dict[str, float]]
    per_doc_median: dict[DocId, float]

    def score(self, doc_id: DocId, term: str) -> float:
        return self.scores[doc_id].get(term, 0.0)


@dataclass
class FeatureMatrix:
    """Sparse binary matrix: per doc, the sorted column indices that are set."""

    kind: NodeKind
    vocabulary: tuple[str, ...]
    doc_ids: tuple[DocId, ...]
    row_columns: dict[DocId, np.ndarray]

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.doc_ids), len(self.vocabulary))

    def column_of(self, term: str) -> int:
        try:
            return self.vocabulary.index(term)
        except ValueError:
            raise KeyError(f"term {term!r} not in vocabulary") from None

    def row_dense(self, doc_id: DocId) -> np.ndarray:
        row = np.zeros(len(self.vocabulary), dtype=np.int8)
        row[self.row_columns[doc_id]] = 1
        return row

    def row_terms(self, doc_id: DocId) -> set[str]:
        return {self.vocabulary[c] for c in self.row_columns[doc_id]}

    def to_triplets(self) -> list[str]:
        """`<doc_id> <term> 1` lines for every set cell, stable order."""
        lines: list[str] = []
        for doc_id in self.doc_ids:
            gid, nid = doc_id
            for col in self.row_columns[doc_id]:
                lines.append(f"{gid}:{nid} {self.vocabulary[col]} 1")
        return lines


def corpus_documents(
    graphs: Iterable[TaggedProvenanceGraph], kind: NodeKind
) -> DocumentSet:
    """Collect every node of the given kind across graphs as documents."""
    docs = [
        Document(g.doc_id(node.node_id), tuple(document_terms(node.label)))
        for g in graphs
        for node in g.nodes_of_kind(kind)
    ]
    docs.sort(key=lambda d: d.doc_id)
    return DocumentSet(kind, tuple(docs))


def _marked_terms(scores: dict[str, float]) -> list[str]:
    """Terms whose score clears the document median (degenerate-zero aware)."""
    values = list(scores.values())
    median = statistics.median(values)
    if median > 0.0:
        return [t for t, s in scores.items() if s >= median]
    positive = [t for t, s in scores.items() if s > 0.0]
    return positive if positive else list(scores)


def build_feature_matrix(docs: DocumentSet) -> tuple[TfIdfTable, FeatureMatrix]:
    """Score every document and binarize rows against per-document medians."""
    if len(docs) == 0:
        raise ValueError("empty document set")
    n_docs = len(docs)
    term_sets = [set(d.terms) for d in docs.documents]
    df: Counter[str] = Counter()
    for terms in term_sets:
        df.update(terms)
    vocabulary = tuple(sorted(df))
    col_index = {t: i for i, t in enumerate(vocabulary)}
    idf_by_term = {t: math.log(n_docs / df[t]) for t in vocabulary}

    scores: dict[DocId, dict[str, float]] = {}
    medians: dict[DocId, float] = {}
    row_columns: dict[DocId, np.ndarray] = {}
    for doc in docs.documents:
        counts = Counter(doc.terms)
        total = len(doc.terms)
        doc_scores = {t: (c / total) * idf_by_term[t] for t, c in counts.items()}
        scores[doc.doc_id] = doc_scores
        medians[doc.doc_id] = statistics.median(doc_scores.values())
        cols = sorted(col_index[t] for t in _marked_terms(doc_scores))
        row_columns[doc.doc_id] = np.asarray(cols, dtype=np.int64)

    table = TfIdfTable(scores, medians)
    matrix = FeatureMatrix(docs.kind, vocabulary, tuple(docs.doc_ids()), row_columns)
    return table, matrix


def featurize(
    graphs: Iterable[TaggedProvenanceGraph], kind: NodeKind
) -> tuple[DocumentSet, TfIdfTable, FeatureMatrix]:
    """One-shot helper: documents, score table and binary matrix for a kind."""
    docs = corpus_documents(list(graphs), kind)
    table, matrix = build_feature_matrix(docs)
    return docs, table, matrix
