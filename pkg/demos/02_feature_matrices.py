"""
From node labels to binary feature matrices
============================================

Node labels are free text (command lines, file paths). To compare them
across hosts we tokenize each label, score every token with TF-IDF, and
keep only the tokens whose score clears the per-document median. The result
is one binary matrix per node kind: rows are nodes, columns are tokens,
and a 1 means "this token is characteristic of this node".
"""

from crosshunt import synth
from crosshunt.correlator import featurize_corpus
from crosshunt.featurizer import tokenize
from crosshunt.graph_model import NodeKind

# -- tokenization lowercases, splits on whitespace, then on path separators

for label in (
    "PowerShell -noP -w 1",
    "C:\\Windows\\System32\\WindowsPowerShell\\v1.0\\PowerShell.exe -NoP",
    "/usr/bin/python3 implant.py",
):
    print(f"{label!r}\n  -> {tokenize(label)}")

# -- the mini corpus: ten process labels in five behavioral clusters ------

corpus, clusters = synth.mini_label_corpus()
features = featurize_corpus(corpus)
table = features.tables[NodeKind.SUBJECT]
matrix = features.matrices[NodeKind.SUBJECT]

n_docs, n_terms = matrix.shape
print(f"\nsubject matrix: {n_docs} documents x {n_terms} terms")

# -- scores, medians, and the surviving terms per document ----------------

print("\nper-document marked terms (score >= per-document median):")
for doc_id in matrix.doc_ids:
    gid, nid = doc_id
    marked = sorted(matrix.row_terms(doc_id))
    print(f"  {gid}:{nid} [{clusters[doc_id]:>8}]  {marked}")

# a term shared by every document has idf = ln(10/10) = 0 and never survives
some_doc = matrix.doc_ids[0]
print(f"\nscore of 'c:' in {some_doc[0]}:{some_doc[1]} ->", table.score(some_doc, "c:"))
print("('c:' appears in every label, so its idf -- and score -- is zero)")
