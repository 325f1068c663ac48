"""Tokenizer, tf-idf scoring and median binarization, against a brute oracle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crosshunt import synth
from crosshunt.featurizer import (
    Document,
    build_feature_matrix,
    corpus_documents,
    document_terms,
    featurize,
    idf,
    tf,
    tokenize,
)
from crosshunt.graph_model import Corpus, Node, NodeKind, TaggedProvenanceGraph

from reference_tfidf import ref_marked_terms, ref_tokens

# frozen from the brute-force oracle; see reference_tfidf.ref_marked_terms
MINI_GOLDEN = {
    "s00": ("-nop", "-w", "1", "powershell.exe", "v1.0", "windowspowershell"),
    "s01": ("-noni", "-nop", "-w", "1", "powershell.exe", "v1.0", "windowspowershell"),
    "s02": ("-executionpolicy", "-file", "backup.ps1", "bypass", "powershell.exe", "v1.0", "windowspowershell"),
    "s03": ("-executionpolicy", "-file", "-nologo", "backup.ps1", "bypass", "powershell.exe", "v1.0", "windowspowershell"),
    "s04": ("-k", "-p", "netsvcs", "svchost.exe"),
    "s05": ("-k", "-p", "localservice", "svchost.exe"),
    "s06": ("-new-tab", "files", "firefox", "firefox.exe", "mozilla", "program"),
    "s07": ("-private-window", "files", "firefox", "firefox.exe", "mozilla", "program"),
    "s08": ("-k", "-p", "netsvcs", "svchost.exe"),
    "s09": ("all", "c", "cmd.exe", "whoami"),
}

_LABEL_ALPHABET = "abcdefgz0123456789 .:-\\/_"
label_strategy = st.text(alphabet=_LABEL_ALPHABET, min_size=1, max_size=40).filter(
    lambda s: s.strip()
)


def one_node_per_label(labels):
    """A corpus of single-subject-node graphs, one per label."""
    graphs = [
        TaggedProvenanceGraph.build(
            f"g{i:03d}", "host-x", [Node("n0", NodeKind.SUBJECT, label)], []
        )
        for i, label in enumerate(labels)
    ]
    return Corpus.from_graphs(graphs)


class TestTokenize:
    def test_command_line_golden(self):
        assert tokenize("PowerShell -noP -w 1") == ["powershell", "-nop", "-w", "1"]

    def test_windows_path_components_emitted(self):
        assert tokenize("C:\\Windows\\System32\\svchost.exe -k netsvcs") == [
            "c:", "windows", "system32", "svchost.exe", "-k", "netsvcs",
        ]

    def test_posix_path_and_repeated_separators(self):
        assert tokenize("/usr//bin/env python3") == ["usr", "bin", "env", "python3"]

    def test_mixed_separators_in_one_chunk(self):
        assert tokenize("a\\b/c") == ["a", "b", "c"]

    def test_separator_only_label_yields_no_tokens(self):
        assert tokenize("///") == []
        assert document_terms("///") == ["///"]  # fallback keeps the row non-empty

    def test_blank_label_rejected(self):
        with pytest.raises(ValueError):
            document_terms("   ")

    @given(label_strategy)
    def test_tokenizer_matches_reference(self, label):
        assert document_terms(label) == ref_tokens(label)


class TestScores:
    def test_tf_is_count_over_length(self):
        assert tf("a", ["a", "b", "a", "c"]) == 0.5
        with pytest.raises(ValueError):
            tf("a", [])

    def test_idf_is_ln_n_over_df(self):
        docs = [["a"], ["a", "b"], ["c"]] + [["z"]] * 7
        assert idf("b", docs) == math.log(10)
        assert idf("a", docs) == math.log(5)
        with pytest.raises(KeyError):
            idf("missing", docs)

    def test_universal_term_scores_zero(self):
        corpus = one_node_per_label(["c: alpha", "c: beta", "c: gamma"])
        docs, table, matrix = featurize(corpus.iter_graphs(), NodeKind.SUBJECT)
        for doc_id in matrix.doc_ids:
            assert table.score(doc_id, "c:") == 0.0
            # the universal term never clears the positive median
            assert "c:" not in matrix.row_terms(doc_id)

    def test_median_is_mean_of_central_pair_for_even_counts(self):
        # four distinct terms; median must interpolate, not pick an element
        corpus = one_node_per_label(["w x y z", "w x", "w y", "w z q r"])
        _, table, _ = featurize(corpus.iter_graphs(), NodeKind.SUBJECT)
        doc = ("g000", "n0")
        scores = sorted(table.scores[doc].values())
        assert table.per_doc_median[doc] == (scores[1] + scores[2]) / 2


class TestBinarization:
    def test_mini_corpus_matches_frozen_golden(self, mini):
        corpus, _ = mini
        _, _, matrix = featurize(corpus.iter_graphs(), NodeKind.SUBJECT)
        for gid, nid in matrix.doc_ids:
            assert matrix.row_terms((gid, nid)) == set(MINI_GOLDEN[nid]), nid

    def test_single_document_marks_every_term(self):
        # lone document: every idf is ln(1)=0, so the degenerate rule keeps all
        corpus = one_node_per_label(["only one doc here"])
        _, _, matrix = featurize(corpus.iter_graphs(), NodeKind.SUBJECT)
        assert matrix.row_terms(("g000", "n0")) == {"only", "one", "doc", "here"}

    def test_zero_median_keeps_only_positive_scores(self):
        # doc 0 has 3 terms, two shared by everyone (score 0): median 0
        corpus = one_node_per_label(["c: x rare", "c: x", "c: x", "c: x"])
        _, table, matrix = featurize(corpus.iter_graphs(), NodeKind.SUBJECT)
        assert table.per_doc_median[("g000", "n0")] == 0.0
        assert matrix.row_terms(("g000", "n0")) == {"rare"}

    def test_duplicating_the_corpus_keeps_marked_sets(self, mini):
        corpus, _ = mini
        graphs = list(corpus.iter_graphs())
        clones = [
            TaggedProvenanceGraph.build(
                f"{g.graph_id}-copy", g.host_id, list(g.nodes.values()), g.edges
            )
            for g in graphs
        ]
        _, _, single = featurize(graphs, NodeKind.SUBJECT)
        _, _, doubled = featurize(graphs + clones, NodeKind.SUBJECT)
        for doc_id in single.doc_ids:
            assert single.row_terms(doc_id) == doubled.row_terms(doc_id)

    def test_at_least_half_the_terms_survive_a_positive_median(self, mini):
        corpus, _ = mini
        _, table, matrix = featurize(corpus.iter_graphs(), NodeKind.SUBJECT)
        for doc_id in matrix.doc_ids:
            if table.per_doc_median[doc_id] > 0:
                k = len(table.scores[doc_id])
                assert len(matrix.row_terms(doc_id)) >= k // 2

    @settings(max_examples=60, deadline=None)
    @given(st.lists(label_strategy, min_size=1, max_size=12))
    def test_matrix_matches_brute_oracle(self, labels):
        corpus = one_node_per_label(labels)
        _, _, matrix = featurize(corpus.iter_graphs(), NodeKind.SUBJECT)
        expected = ref_marked_terms(
            {f"g{i:03d}": label for i, label in enumerate(labels)}
        )
        for gid, nid in matrix.doc_ids:
            assert matrix.row_terms((gid, nid)) == expected[gid]


class TestMatrixShape:
    def test_kinds_are_featurized_separately(self, demo_corpus):
        graphs = list(demo_corpus.iter_graphs())
        _, _, m_sub = featurize(graphs, NodeKind.SUBJECT)
        _, _, m_obj = featurize(graphs, NodeKind.OBJECT)
        assert m_sub.kind is NodeKind.SUBJECT
        assert m_obj.kind is NodeKind.OBJECT
        # subject vocab comes from command lines, object vocab from paths
        assert "-nop" in m_sub.vocabulary
        assert "-nop" not in m_obj.vocabulary

    def test_document_order_is_canonical(self, mini):
        corpus, _ = mini
        forward = corpus_documents(list(corpus.iter_graphs()), NodeKind.SUBJECT)
        reversed_ = corpus_documents(
            list(reversed(list(corpus.iter_graphs()))), NodeKind.SUBJECT
        )
        assert forward == reversed_

    def test_row_dense_and_triplets_agree(self, mini):
        corpus, _ = mini
        _, _, matrix = featurize(corpus.iter_graphs(), NodeKind.SUBJECT)
        doc = matrix.doc_ids[0]
        dense = matrix.row_dense(doc)
        assert dense.sum() == len(matrix.row_terms(doc))
        assert matrix.shape == (10, len(matrix.vocabulary))
        gid, nid = doc
        assert f"{gid}:{nid} " in matrix.to_triplets()[0]

    def test_column_of_unknown_term_raises(self, mini):
        corpus, _ = mini
        _, _, matrix = featurize(corpus.iter_graphs(), NodeKind.SUBJECT)
        with pytest.raises(KeyError):
            matrix.column_of("never-seen-term")

    def test_empty_document_set_rejected(self):
        from crosshunt.featurizer import DocumentSet

        with pytest.raises(ValueError):
            build_feature_matrix(DocumentSet(NodeKind.SUBJECT, ()))
        with pytest.raises(ValueError):
            Document(("g", "n"), ())
