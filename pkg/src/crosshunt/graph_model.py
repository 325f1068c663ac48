"""Host-scoped activity graphs and their line-oriented interchange format.

Document layout (UTF-8, one record per line, single-space separated):

    G <graph_id> <host_id>                                   exactly one, first
    N <node_id> <S|O> <label...>                             label is verbatim
    E <src> <dst> <syscall_label> <suspiciousness_label> <seq>

A graph is a directed multigraph: nodes are system entities (S = subject,
process-like; O = object, e.g. file/socket/registry key) carrying free-text
labels, edges carry a syscall label, a suspiciousness label assigned by the
upstream detector, and a per-graph sequence ordinal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

from .errors import (
    DanglingEdgeError,
    DuplicateGraphError,
    DuplicateNodeError,
    GraphFormatError,
    GraphNotFoundError,
    MissingSeedError,
    StoreError,
)

# graph/host ids become file names and report keys; keep them path-safe
_ID_RE = re.compile(r"^[A-Za-z0-9._-]+$")

INDEX_FILE = "corpus.idx"
GRAPH_SUFFIX = ".tpg"

DocId = tuple[str, str]  # (graph_id, node_id)


class NodeKind(str, Enum):
    SUBJECT = "subject"
    OBJECT = "object"

    @property
    def tag(self) -> str:
        return "S" if self is NodeKind.SUBJECT else "O"

    @classmethod
    def from_tag(cls, tag: str) -> "NodeKind":
        if tag == "S":
            return cls.SUBJECT
        if tag == "O":
            return cls.OBJECT
        raise GraphFormatError(f"unknown node kind tag {tag!r} (expected S or O)")


@dataclass(frozen=True)
class Node:
    node_id: str
    kind: NodeKind
    label: str


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    syscall_label: str
    suspiciousness_label: str
    seq: int


@dataclass
class TaggedProvenanceGraph:
    """One host-scoped graph. Nodes keyed by id, edges in document order."""

    graph_id: str
    host_id: str
    nodes: dict[str, Node]
    edges: list[Edge]
    _adjacency: dict[str, tuple[str, ...]] | None = field(
        default=None, repr=False, compare=False
    )
    _edge_index: dict[frozenset[str], list[Edge]] | None = field(
        default=None, repr=False, compare=False
    )

    @classmethod
    def build(
        cls,
        graph_id: str,
        host_id: str,
        nodes: Iterable[Node],
        edges: Iterable[Edge],
    ) -> "TaggedProvenanceGraph":
        """Validate and assemble a graph (the constructor used everywhere)."""
        _require_id(graph_id, "graph_id")
        _require_id(host_id, "host_id")
        node_map: dict[str, Node] = {}
        for node in nodes:
            if not node.node_id or any(ch.isspace() for ch in node.node_id):
                raise GraphFormatError(
                    f"bad node id {node.node_id!r} in graph {graph_id}"
                )
            if node.node_id in node_map:
                raise DuplicateNodeError(
                    f"duplicate node id {node.node_id!r} in graph {graph_id}"
                )
            if not node.label.strip():
                raise GraphFormatError(
                    f"empty label on node {node.node_id!r} in graph {graph_id}"
                )
            node_map[node.node_id] = node
        if not node_map:
            raise GraphFormatError(f"graph {graph_id} defines no nodes")
        edge_list: list[Edge] = []
        for edge in edges:
            for endpoint in (edge.src, edge.dst):
                if endpoint not in node_map:
                    raise DanglingEdgeError(
                        f"edge ({edge.src!r} -> {edge.dst!r}) in graph {graph_id} "
                        f"references undefined node {endpoint!r}"
                    )
            if not edge.syscall_label or not edge.suspiciousness_label:
                raise GraphFormatError(
                    f"edge ({edge.src!r} -> {edge.dst!r}) in graph {graph_id} "
                    "has an empty label"
                )
            if edge.seq < 0:
                raise GraphFormatError(
                    f"edge ({edge.src!r} -> {edge.dst!r}) in graph {graph_id} "
                    f"has negative seq {edge.seq}"
                )
            edge_list.append(edge)
        return cls(graph_id, host_id, node_map, edge_list)

    # -- structure accessors -------------------------------------------------

    def node_ids(self) -> list[str]:
        return sorted(self.nodes)

    def doc_id(self, node_id: str) -> DocId:
        return (self.graph_id, node_id)

    def nodes_of_kind(self, kind: NodeKind) -> list[Node]:
        return [self.nodes[nid] for nid in self.node_ids() if self.nodes[nid].kind is kind]

    def neighbors(self, node_id: str) -> tuple[str, ...]:
        """Nodes adjacent to node_id by an edge in either direction, sorted."""
        if self._adjacency is None:
            adj: dict[str, set[str]] = {nid: set() for nid in self.nodes}
            for edge in self.edges:
                adj[edge.src].add(edge.dst)
                adj[edge.dst].add(edge.src)
            self._adjacency = {nid: tuple(sorted(peers)) for nid, peers in adj.items()}
        return self._adjacency[node_id]

    def edges_between(self, a: str, b: str) -> list[Edge]:
        """All edges connecting a and b, either direction (parallel included)."""
        if self._edge_index is None:
            index: dict[frozenset[str], list[Edge]] = {}
            for edge in self.edges:
                index.setdefault(frozenset((edge.src, edge.dst)), []).append(edge)
            self._edge_index = index
        return self._edge_index.get(frozenset((a, b)), [])


@dataclass
class Corpus:
    """An ordered collection of graphs plus the designated seed ids."""

    graphs: dict[str, TaggedProvenanceGraph]
    seed_ids: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        for seed in self.seed_ids:
            if seed not in self.graphs:
                raise MissingSeedError(f"seed graph {seed!r} is not in the corpus")

    def __len__(self) -> int:
        return len(self.graphs)

    def graph_ids(self) -> list[str]:
        return sorted(self.graphs)

    def iter_graphs(self) -> Iterator[TaggedProvenanceGraph]:
        for gid in self.graph_ids():
            yield self.graphs[gid]

    def candidates(self) -> list[str]:
        seeds = set(self.seed_ids)
        return [gid for gid in self.graph_ids() if gid not in seeds]

    @classmethod
    def from_graphs(
        cls, graphs: Iterable[TaggedProvenanceGraph], seed_ids: Iterable[str] = ()
    ) -> "Corpus":
        mapping: dict[str, TaggedProvenanceGraph] = {}
        for g in graphs:
            if g.graph_id in mapping:
                raise DuplicateGraphError(f"duplicate graph id {g.graph_id!r}")
            mapping[g.graph_id] = g
        return cls(mapping, tuple(seed_ids))


# -- parsing / serialization -------------------------------------------------


def _require_id(value: str, what: str) -> None:
    if not _ID_RE.match(value or ""):
        raise GraphFormatError(
            f"bad {what} {value!r}: must match [A-Za-z0-9._-]+"
        )


def parse_graph(text: str) -> TaggedProvenanceGraph:
    """Parse one interchange document into a validated graph."""
    header: tuple[str, str] | None = None
    nodes: list[Node] = []
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        tag, _, rest = line.partition(" ")
        if tag == "G":
            if header is not None:
                raise GraphFormatError(f"line {lineno}: second G header")
            parts = rest.split(" ")
            if len(parts) != 2:
                raise GraphFormatError(
                    f"line {lineno}: G header needs <graph_id> <host_id>"
                )
            header = (parts[0], parts[1])
        elif tag == "N":
            if header is None:
                raise GraphFormatError(f"line {lineno}: N record before G header")
            node_id, _, tail = rest.partition(" ")
            kind_tag, _, label = tail.partition(" ")
            if not node_id or not kind_tag or not label.strip():
                raise GraphFormatError(
                    f"line {lineno}: N record needs <id> <S|O> <label>"
                )
            nodes.append(Node(node_id, NodeKind.from_tag(kind_tag), label))
        elif tag == "E":
            if header is None:
                raise GraphFormatError(f"line {lineno}: E record before G header")
            parts = rest.split(" ")
            if len(parts) != 5:
                raise GraphFormatError(
                    f"line {lineno}: E record needs <src> <dst> <syscall> "
                    "<suspiciousness> <seq>"
                )
            src, dst, syscall, susp, seq_text = parts
            try:
                seq = int(seq_text)
            except ValueError:
                raise GraphFormatError(
                    f"line {lineno}: seq {seq_text!r} is not an integer"
                ) from None
            edges.append(Edge(src, dst, syscall, susp, seq))
        else:
            raise GraphFormatError(f"line {lineno}: unknown record type {tag!r}")
    if header is None:
        raise GraphFormatError("document has no G header")
    return TaggedProvenanceGraph.build(header[0], header[1], nodes, edges)


def serialize_graph(graph: TaggedProvenanceGraph) -> str:
    """Render a graph back to its interchange document (round-trip safe)."""
    lines = [f"G {graph.graph_id} {graph.host_id}"]
    for node in graph.nodes.values():
        lines.append(f"N {node.node_id} {node.kind.tag} {node.label}")
    for e in graph.edges:
        lines.append(
            f"E {e.src} {e.dst} {e.syscall_label} {e.suspiciousness_label} {e.seq}"
        )
    return "\n".join(lines) + "\n"


# -- on-disk store ------------------------------------------------------------


class GraphStore:
    """Directory of one .tpg document per graph plus a corpus.idx of headers."""

    def __init__(self, corpus_dir: str | Path):
        self.root = Path(corpus_dir)

    def _graph_path(self, graph_id: str) -> Path:
        return self.root / f"{graph_id}{GRAPH_SUFFIX}"

    def put(self, graph: TaggedProvenanceGraph) -> Path:
        path = self._graph_path(graph.graph_id)
        if path.exists():
            raise DuplicateGraphError(f"graph {graph.graph_id!r} already stored")
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            path.write_text(serialize_graph(graph), encoding="utf-8")
            with (self.root / INDEX_FILE).open("a", encoding="utf-8") as idx:
                idx.write(f"G {graph.graph_id} {graph.host_id}\n")
        except OSError as exc:
            raise StoreError(f"cannot write graph {graph.graph_id!r}: {exc}") from exc
        return path

    def get(self, graph_id: str) -> TaggedProvenanceGraph:
        path = self._graph_path(graph_id)
        if not path.exists():
            raise GraphNotFoundError(f"graph {graph_id!r} not in store")
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise StoreError(f"cannot read graph {graph_id!r}: {exc}") from exc
        return parse_graph(text)

    def list(self) -> list[tuple[str, str, int, int]]:
        """(graph_id, host_id, node_count, edge_count) sorted by graph_id."""
        index = self.root / INDEX_FILE
        if not index.exists():
            return []
        rows: list[tuple[str, str, int, int]] = []
        try:
            for line in index.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                tag, gid, host = line.split(" ")
                if tag != "G":
                    raise StoreError(f"bad index line {line!r}")
                n_nodes = n_edges = 0
                for rec in self._graph_path(gid).read_text(encoding="utf-8").splitlines():
                    if rec.startswith("N "):
                        n_nodes += 1
                    elif rec.startswith("E "):
                        n_edges += 1
                rows.append((gid, host, n_nodes, n_edges))
        except OSError as exc:
            raise StoreError(f"cannot read corpus index: {exc}") from exc
        except ValueError as exc:
            raise StoreError(f"corrupt corpus index: {exc}") from exc
        rows.sort()
        return rows

    def load_corpus(self, seed_ids: Iterable[str] = ()) -> Corpus:
        graphs = [self.get(gid) for gid, _, _, _ in self.list()]
        return Corpus.from_graphs(graphs, tuple(seed_ids))


def store_put(corpus_dir: str | Path, graph: TaggedProvenanceGraph) -> Path:
    return GraphStore(corpus_dir).put(graph)


def store_get(corpus_dir: str | Path, graph_id: str) -> TaggedProvenanceGraph:
    return GraphStore(corpus_dir).get(graph_id)


def store_list(corpus_dir: str | Path) -> list[tuple[str, str, int, int]]:
    return GraphStore(corpus_dir).list()
