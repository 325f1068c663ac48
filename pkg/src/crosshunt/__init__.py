"""Cross-host attack correlation over tagged provenance graphs.

Pipeline: node labels are tokenized and TF-IDF-binarized into per-kind
feature matrices; MinHash signatures group near-duplicate nodes into buckets;
bucket-matched node pairs seed a weighted dual BFS that scores graph pairs;
a correlator hunts a corpus with seed graphs and raises per-graph alerts.
"""

from .bucketizer import (
    BucketMap,
    CorpusBuckets,
    MinHashSignature,
    bucketize,
    exact_jaccard,
    minhash_signature,
    signature_similarity,
    string_match_buckets,
)
from .config import Config, load_config, parse_config
from .correlator import (
    Alert,
    BenchRow,
    CorpusFeatures,
    EvalReport,
    HuntConfig,
    HuntReport,
    PairScore,
    benchmark,
    bucket_quality,
    bucketize_corpus,
    evaluate,
    featurize_corpus,
    hunt,
    parse_truth,
    threshold_sweep,
)
from .edge_rules import (
    EdgeContext,
    Rule,
    RuleSet,
    default_rules_text,
    edge_context,
    edges_similar,
)
from .errors import (
    CoverageGapError,
    CrosshuntError,
    DanglingEdgeError,
    DuplicateGraphError,
    DuplicateNodeError,
    GraphFormatError,
    GraphNotFoundError,
    MissingSeedError,
    StoreError,
    UnbucketizedNodeError,
)
from .featurizer import (
    Document,
    DocumentSet,
    FeatureMatrix,
    TfIdfTable,
    build_feature_matrix,
    corpus_documents,
    featurize,
    idf,
    tf,
    tokenize,
)
from .graph_model import (
    Corpus,
    DocId,
    Edge,
    GraphStore,
    Node,
    NodeKind,
    TaggedProvenanceGraph,
    parse_graph,
    serialize_graph,
    store_get,
    store_list,
    store_put,
)
from .graph_similarity import (
    MatchedPairSet,
    SimilarityScore,
    WeightConfig,
    build_mps,
    parallel_bfs,
    similarity,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
