"""MinHash signatures, Jaccard estimation, and bucket partitioning."""

import numpy as np
import pytest

from crosshunt import synth
from crosshunt.bucketizer import (
    BucketMap,
    UnionFind,
    bucketize,
    exact_jaccard,
    minhash_signature,
    signature_similarity,
    string_match_buckets,
)
from crosshunt.errors import UnbucketizedNodeError
from crosshunt.featurizer import FeatureMatrix, featurize
from crosshunt.graph_model import NodeKind


def matrix_from_rows(rows: dict[str, list[int]], width: int) -> FeatureMatrix:
    """Hand-built sparse matrix; keys become ('g', key) doc ids."""
    vocab = tuple(f"t{i:03d}" for i in range(width))
    return FeatureMatrix(
        kind=NodeKind.SUBJECT,
        vocabulary=vocab,
        doc_ids=tuple(sorted(("g", k) for k in rows)),
        row_columns={
            ("g", k): np.asarray(sorted(cols), dtype=np.int64)
            for k, cols in rows.items()
        },
    )


def dense(cols, width):
    row = np.zeros(width, dtype=np.int8)
    row[list(cols)] = 1
    return row


class TestSignatures:
    def test_signature_is_deterministic_per_seed(self):
        row = dense([1, 5, 9], 16)
        assert minhash_signature(row) == minhash_signature(row)
        assert minhash_signature(row, seed=1) != minhash_signature(row, seed=2)

    def test_identical_rows_share_signatures(self):
        a = minhash_signature(dense([2, 3, 11], 16))
        b = minhash_signature(dense([2, 3, 11], 16))
        assert signature_similarity(a, b) == 1.0

    def test_disjoint_rows_rarely_agree(self):
        a = minhash_signature(dense(range(0, 30), 200), length=256)
        b = minhash_signature(dense(range(100, 130), 200), length=256)
        assert signature_similarity(a, b) < 0.15

    def test_incompatible_signatures_rejected(self):
        row = dense([1], 4)
        with pytest.raises(ValueError, match="not comparable"):
            signature_similarity(
                minhash_signature(row, length=16), minhash_signature(row, length=32)
            )
        with pytest.raises(ValueError, match="not comparable"):
            signature_similarity(
                minhash_signature(row, seed=1), minhash_signature(row, seed=2)
            )

    def test_empty_row_cannot_be_signed(self):
        with pytest.raises(ValueError, match="empty row"):
            minhash_signature(dense([], 8))
        with pytest.raises(ValueError):
            minhash_signature(dense([1], 8), length=0)

    def test_estimate_tracks_exact_jaccard(self):
        rng = np.random.default_rng(17)
        width = 300
        errors = []
        for _ in range(100):
            base = set(rng.choice(width, size=40, replace=False).tolist())
            drop = set(rng.choice(sorted(base), size=rng.integers(0, 30), replace=False).tolist())
            add = set(rng.choice(width, size=rng.integers(0, 30), replace=False).tolist())
            other = (base - drop) | add
            if not other:
                continue
            ra, rb = dense(base, width), dense(other, width)
            est = signature_similarity(minhash_signature(ra), minhash_signature(rb))
            errors.append(abs(est - exact_jaccard(ra, rb)))
        assert np.mean(errors) < 0.05


class TestExactJaccard:
    def test_known_overlap(self):
        a = dense([0, 1, 2, 3], 8)
        b = dense([2, 3, 4, 5], 8)
        assert exact_jaccard(a, b) == 2 / 6

    def test_identical_and_disjoint(self):
        assert exact_jaccard(dense([1, 2], 4), dense([1, 2], 4)) == 1.0
        assert exact_jaccard(dense([0], 4), dense([3], 4)) == 0.0
        assert exact_jaccard(dense([], 4), dense([], 4)) == 0.0

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError):
            exact_jaccard(dense([0], 4), dense([0], 5))

    def test_matches_python_set_oracle(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            a = set(rng.choice(60, size=rng.integers(1, 20), replace=False).tolist())
            b = set(rng.choice(60, size=rng.integers(1, 20), replace=False).tolist())
            expected = len(a & b) / len(a | b)
            assert exact_jaccard(dense(a, 60), dense(b, 60)) == expected


class TestUnionFind:
    def test_transitive_union(self):
        uf = UnionFind(5)
        uf.union(0, 1)
        uf.union(1, 2)
        assert uf.find(0) == uf.find(2)
        assert uf.find(3) != uf.find(0)
        uf.union(3, 3)  # self-union is a no-op
        assert uf.find(3) == 3


class TestBucketize:
    def test_identical_rows_always_share_a_bucket(self):
        m = matrix_from_rows({"a": [1, 2, 3], "b": [1, 2, 3], "c": [9]}, 12)
        buckets = bucketize(m, j_t=1.0)
        assert buckets.bucket_of(("g", "a")) == buckets.bucket_of(("g", "b"))
        assert buckets.bucket_of(("g", "c")) != buckets.bucket_of(("g", "a"))

    def test_bucket_named_after_lowest_member(self):
        m = matrix_from_rows({"zz": [1, 2], "aa": [1, 2]}, 4)
        buckets = bucketize(m)
        assert buckets.bucket_of(("g", "zz")) == "g:aa"

    def test_exact_mode_matches_set_arithmetic(self):
        rows = {
            "a": [0, 1, 2, 3, 4],
            "b": [0, 1, 2, 3, 5],   # J(a,b) = 4/6 = 0.667
            "c": [0, 1, 8, 9, 10],  # J(a,c) = 2/8 = 0.25
            "d": [20, 21],
        }
        buckets = bucketize(matrix_from_rows(rows, 24), j_t=0.6, exact=True)
        assert buckets.method == "exact"
        assert buckets.bucket_of(("g", "a")) == buckets.bucket_of(("g", "b"))
        assert buckets.bucket_of(("g", "c")) != buckets.bucket_of(("g", "a"))
        assert buckets.bucket_of(("g", "d")) not in {
            buckets.bucket_of(("g", "a")), buckets.bucket_of(("g", "c")),
        }

    def test_minhash_agrees_with_exact_on_separated_clusters(self):
        # within-cluster J >= 0.875, across <= 0.2: far from the threshold,
        # so the estimator must land on the same partition as true Jaccard
        rows = {
            "a1": list(range(0, 8)),
            "a2": list(range(0, 8)),
            "a3": list(range(0, 7)) + [8],
            "b1": list(range(20, 28)),
            "b2": list(range(20, 27)) + [28],
            "solo": [40, 41],
        }
        matrix = matrix_from_rows(rows, 48)
        est = bucketize(matrix, j_t=0.6)
        true = bucketize(matrix, j_t=0.6, exact=True)

        def parts(bm: BucketMap):
            return sorted(tuple(m) for m in bm.buckets().values())

        assert parts(est) == parts(true)

    def test_raising_threshold_refines_the_partition(self, mini):
        corpus, _ = mini
        _, _, matrix = featurize(corpus.iter_graphs(), NodeKind.SUBJECT)
        coarse = bucketize(matrix, j_t=0.3)
        fine = bucketize(matrix, j_t=0.9)
        coarse_of = coarse.assignment
        groups: dict[str, set[str]] = {}
        for doc, fine_bucket in fine.assignment.items():
            groups.setdefault(fine_bucket, set()).add(coarse_of[doc])
        for fine_bucket, coarse_buckets in groups.items():
            assert len(coarse_buckets) == 1, fine_bucket

    def test_banded_partition_refines_full_scan(self, mini):
        corpus, _ = mini
        _, _, matrix = featurize(corpus.iter_graphs(), NodeKind.SUBJECT)
        full = bucketize(matrix, j_t=0.6)
        banded = bucketize(matrix, j_t=0.6, banding=True)
        groups: dict[str, set[str]] = {}
        for doc, b in banded.assignment.items():
            groups.setdefault(b, set()).add(full.assignment[doc])
        for members in groups.values():
            assert len(members) == 1

    def test_duplicate_rows_follow_their_representative(self):
        # "b" is byte-identical to "a"; "c" is near "a"
        rows = {"a": [0, 1, 2, 3, 4], "b": [0, 1, 2, 3, 4], "c": [0, 1, 2, 3, 5]}
        buckets = bucketize(matrix_from_rows(rows, 8), j_t=0.6, exact=True)
        assert (
            buckets.bucket_of(("g", "a"))
            == buckets.bucket_of(("g", "b"))
            == buckets.bucket_of(("g", "c"))
        )

    def test_unknown_doc_raises(self):
        buckets = bucketize(matrix_from_rows({"a": [0]}, 2))
        with pytest.raises(UnbucketizedNodeError):
            buckets.bucket_of(("g", "ghost"))

    def test_bad_threshold_rejected(self):
        m = matrix_from_rows({"a": [0]}, 2)
        for j_t in (0.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                bucketize(m, j_t=j_t)

    def test_to_lines_format(self):
        m = matrix_from_rows({"a": [0, 1], "b": [0, 1]}, 4)
        buckets = bucketize(m)
        assert buckets.to_lines() == ["g:a g:a", "g:a g:b"]


class TestStringBaseline:
    def test_groups_byte_identical_labels_only(self):
        labeled = [
            (("g", "a"), "svchost.exe -k netsvcs"),
            (("g", "b"), "svchost.exe -k netsvcs"),
            (("g", "c"), "svchost.exe -k netsvcs "),  # trailing space differs
        ]
        bm = string_match_buckets(labeled, NodeKind.SUBJECT)
        assert bm.method == "string"
        assert bm.bucket_of(("g", "a")) == bm.bucket_of(("g", "b"))
        assert bm.bucket_of(("g", "c")) != bm.bucket_of(("g", "a"))
