"""Group near-duplicate feature rows into buckets with MinHash signatures.

Each binary row is summarized by D hash slots; slot k holds the minimum of a
seeded universal hash ((a_k * x + b_k) mod p, p = 2^31 - 1) over the row's set
column indices. The fraction of agreeing slots estimates Jaccard similarity,
and rows whose signatures agree on at least a threshold fraction are unioned
into connected components. An exact-Jaccard mode computes the same partition
from true set overlaps and serves as the oracle for the estimator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import UnbucketizedNodeError
from .featurizer import FeatureMatrix
from .graph_model import DocId, NodeKind

MERSENNE_PRIME = np.uint64((1 << 31) - 1)
_MASK64 = np.uint64(0xFFFFFFFFFFFFFFFF)
_MASK31 = np.uint64(0x7FFFFFFF)

DEFAULT_SIGNATURE_LENGTH = 128
DEFAULT_BUCKET_THRESHOLD = 0.6
DEFAULT_SEED = 42


def _mix_columns(cols: np.ndarray) -> np.ndarray:
    """Fixed 64-bit scramble of column indices (seed-independent relabeling)."""
    z = cols.astype(np.uint64) + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z = z ^ (z >> np.uint64(31))
    return z & _MASK31


def _hash_params(length: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed)
    p = int(MERSENNE_PRIME)
    a = rng.integers(1, p, size=length, dtype=np.int64).astype(np.uint64)
    b = rng.integers(0, p, size=length, dtype=np.int64).astype(np.uint64)
    return a, b


@dataclass(frozen=True)
class MinHashSignature:
    values: tuple[int, ...]
    length: int
    seed: int

    def __post_init__(self) -> None:
        if len(self.values) != self.length:
            raise ValueError("signature length does not match value count")


def _signature_for_columns(cols: np.ndarray, length: int, seed: int) -> np.ndarray:
    a, b = _hash_params(length, seed)
    mixed = _mix_columns(cols)
    # (length, n_cols) hashed grid; exact in uint64 since a, x < 2^31
    hashed = (a[:, None] * mixed[None, :] + b[:, None]) % MERSENNE_PRIME
    return hashed.min(axis=1)


def minhash_signature(
    row: Sequence[int] | np.ndarray,
    length: int = DEFAULT_SIGNATURE_LENGTH,
    seed: int = DEFAULT_SEED,
) -> MinHashSignature:
    """Signature of one dense binary row."""
    if length < 1:
        raise ValueError("signature length must be >= 1")
    dense = np.asarray(row)
    cols = np.flatnonzero(dense)
    if cols.size == 0:
        raise ValueError("cannot sign an empty row (no set columns)")
    values = _signature_for_columns(cols.astype(np.uint64), length, seed)
    return MinHashSignature(tuple(int(v) for v in values), length, seed)


def signature_similarity(a: MinHashSignature, b: MinHashSignature) -> float:
    """Fraction of slot positions where the two signatures agree."""
    if a.length != b.length or a.seed != b.seed:
        raise ValueError("signatures differ in length or seed; not comparable")
    agree = sum(1 for x, y in zip(a.values, b.values) if x == y)
    return agree / a.length


def exact_jaccard(row_a: Sequence[int] | np.ndarray, row_b: Sequence[int] | np.ndarray) -> float:
    """True Jaccard similarity of two dense binary rows (same vocabulary)."""
    a = np.asarray(row_a)
    b = np.asarray(row_b)
    if a.shape != b.shape:
        raise ValueError("rows have different vocabulary sizes")
    sa = set(np.flatnonzero(a).tolist())
    sb = set(np.flatnonzero(b).tolist())
    union = len(sa | sb)
    if union == 0:
        return 0.0
    return len(sa & sb) / union


class UnionFind:
    """Disjoint sets over range(n), path compression + union by rank."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self.rank[rx] == self.rank[ry]:
            self.rank[rx] += 1


@dataclass
class BucketMap:
    """Bucket assignment for one node kind, keyed by doc id."""

    kind: NodeKind
    assignment: dict[DocId, str]
    threshold: float
    signature_length: int
    seed: int
    method: str = "minhash"

    def bucket_of(self, doc_id: DocId) -> str:
        try:
            return self.assignment[doc_id]
        except KeyError:
            raise UnbucketizedNodeError(f"node {doc_id} has no bucket") from None

    def buckets(self) -> dict[str, list[DocId]]:
        grouped: dict[str, list[DocId]] = {}
        for doc_id, bucket in self.assignment.items():
            grouped.setdefault(bucket, []).append(doc_id)
        return {b: sorted(members) for b, members in sorted(grouped.items())}

    def to_lines(self) -> list[str]:
        """`<bucket_id> <graph_id>:<node_id>` lines, stable order."""
        return [
            f"{bucket} {gid}:{nid}"
            for bucket, members in self.buckets().items()
            for gid, nid in members
        ]


@dataclass
class CorpusBuckets:
    """Subject and object bucket maps for one featurized corpus."""

    by_kind: dict[NodeKind, BucketMap]

    def bucket_of(self, kind: NodeKind, doc_id: DocId) -> str:
        return self.by_kind[kind].bucket_of(doc_id)

    def to_lines(self) -> list[str]:
        lines: list[str] = []
        for kind in (NodeKind.SUBJECT, NodeKind.OBJECT):
            if kind in self.by_kind:
                lines.extend(self.by_kind[kind].to_lines())
        return lines


def _bucket_id(members: Iterable[DocId]) -> str:
    gid, nid = min(members)
    return f"{gid}:{nid}"


def _min_agreeing_slots(j_t: float, length: int) -> int:
    """Smallest slot-agreement count c with c/length >= j_t (float-safe)."""
    c = int(np.ceil(j_t * length))
    while c > 0 and (c - 1) / length >= j_t:
        c -= 1
    while c / length < j_t:
        c += 1
    return c


def _band_shape(j_t: float, length: int) -> tuple[int, int]:
    """Pick (bands, rows_per_band) whose LSH curve knee sits near j_t."""
    best = (length, 1)
    best_gap = abs((1.0 / length) ** 1.0 - j_t)
    for rows in range(1, length + 1):
        if length % rows:
            continue
        bands = length // rows
        knee = (1.0 / bands) ** (1.0 / rows)
        if abs(knee - j_t) < best_gap:
            best, best_gap = (bands, rows), abs(knee - j_t)
    return best


def _candidate_pairs_banded(sigs: np.ndarray, j_t: float) -> set[tuple[int, int]]:
    n, length = sigs.shape
    bands, rows = _band_shape(j_t, length)
    pairs: set[tuple[int, int]] = set()
    for b in range(bands):
        chunk = sigs[:, b * rows : (b + 1) * rows]
        groups: dict[bytes, list[int]] = {}
        for i in range(n):
            groups.setdefault(chunk[i].tobytes(), []).append(i)
        for members in groups.values():
            for i_pos, i in enumerate(members):
                for j in members[i_pos + 1 :]:
                    pairs.add((i, j))
    return pairs


def _pairwise_minhash_edges(sigs: np.ndarray, j_t: float, banding: bool) -> list[tuple[int, int]]:
    n, length = sigs.shape
    need = _min_agreeing_slots(j_t, length)
    edges: list[tuple[int, int]] = []
    if banding:
        for i, j in sorted(_candidate_pairs_banded(sigs, j_t)):
            if int(np.count_nonzero(sigs[i] == sigs[j])) >= need:
                edges.append((i, j))
        return edges
    # full pairwise scan, chunked so the transient bool block stays small
    chunk = max(1, int(32_000_000 // max(1, n * length)))
    for start in range(0, n, chunk):
        block = sigs[start : start + chunk]
        counts = (block[:, None, :] == sigs[None, :, :]).sum(axis=2)
        for local_i in range(block.shape[0]):
            i = start + local_i
            js = np.nonzero(counts[local_i] >= need)[0]
            for j in js:
                if j > i:
                    edges.append((i, int(j)))
    return edges


def _pairwise_exact_edges(col_sets: list[frozenset[int]], j_t: float) -> list[tuple[int, int]]:
    edges: list[tuple[int, int]] = []
    n = len(col_sets)
    for i in range(n):
        for j in range(i + 1, n):
            union = len(col_sets[i] | col_sets[j])
            if union and len(col_sets[i] & col_sets[j]) / union >= j_t:
                edges.append((i, j))
    return edges


def bucketize(
    matrix: FeatureMatrix,
    j_t: float = DEFAULT_BUCKET_THRESHOLD,
    signature_length: int = DEFAULT_SIGNATURE_LENGTH,
    seed: int = DEFAULT_SEED,
    exact: bool = False,
    banding: bool = False,
) -> BucketMap:
    """Partition rows into buckets of pairwise-similar documents.

    Pairs at or above j_t (estimated slot agreement, or true Jaccard when
    exact=True) are unioned; buckets are the connected components and each is
    named after its lexicographically lowest member.
    """
    if not (0.0 < j_t <= 1.0):
        raise ValueError(f"bucket threshold must be in (0, 1], got {j_t}")
    if signature_length < 1:
        raise ValueError("signature length must be >= 1")
    doc_ids = list(matrix.doc_ids)
    if not doc_ids:
        raise ValueError("empty feature matrix")

    # identical rows share signatures and true Jaccard 1.0, so deduplicating
    # them cannot change the partition; it only shrinks the pairwise scan
    unique_keys: dict[bytes, int] = {}
    doc_to_unique: dict[DocId, int] = {}
    unique_cols: list[np.ndarray] = []
    for doc_id in doc_ids:
        cols = matrix.row_columns[doc_id]
        if cols.size == 0:
            raise ValueError(f"row {doc_id} has no set columns")
        key = cols.tobytes()
        if key not in unique_keys:
            unique_keys[key] = len(unique_cols)
            unique_cols.append(cols)
        doc_to_unique[doc_id] = unique_keys[key]

    n_unique = len(unique_cols)
    if exact:
        edges = _pairwise_exact_edges(
            [frozenset(c.tolist()) for c in unique_cols], j_t
        )
    else:
        a, b = _hash_params(signature_length, seed)
        lengths = np.asarray([c.size for c in unique_cols])
        flat = _mix_columns(np.concatenate(unique_cols).astype(np.uint64))
        hashed = (a[:, None] * flat[None, :] + b[:, None]) % MERSENNE_PRIME
        starts = np.zeros(n_unique, dtype=np.int64)
        np.cumsum(lengths[:-1], out=starts[1:])
        sigs = np.minimum.reduceat(hashed, starts, axis=1).T.copy()
        edges = _pairwise_minhash_edges(sigs, j_t, banding)

    uf = UnionFind(n_unique)
    for i, j in edges:
        uf.union(i, j)

    members: dict[int, list[DocId]] = {}
    for doc_id in doc_ids:
        members.setdefault(uf.find(doc_to_unique[doc_id]), []).append(doc_id)
    assignment: dict[DocId, str] = {}
    for group in members.values():
        bucket = _bucket_id(group)
        for doc_id in group:
            assignment[doc_id] = bucket
    return BucketMap(
        kind=matrix.kind,
        assignment=dict(sorted(assignment.items())),
        threshold=j_t,
        signature_length=signature_length,
        seed=seed,
        method="exact" if exact else "minhash",
    )


def string_match_buckets(
    labeled: Iterable[tuple[DocId, str]], kind: NodeKind
) -> BucketMap:
    """Trivial baseline: buckets are classes of byte-identical labels."""
    groups: dict[str, list[DocId]] = {}
    for doc_id, label in labeled:
        groups.setdefault(label, []).append(doc_id)
    assignment: dict[DocId, str] = {}
    for members in groups.values():
        bucket = _bucket_id(members)
        for doc_id in members:
            assignment[doc_id] = bucket
    return BucketMap(
        kind=kind,
        assignment=dict(sorted(assignment.items())),
        threshold=1.0,
        signature_length=0,
        seed=0,
        method="string",
    )
