"""
Tagged provenance graphs: build, serialize, store
==================================================

A graph is one host's worth of audit activity: Subject nodes (processes),
Object nodes (files, sockets, registry keys), and directed edges that carry
a system-call label plus a suspiciousness label. This script builds a small
graph in code, round-trips it through the text interchange format, and
stores it in an on-disk corpus.
"""

import tempfile

from crosshunt.graph_model import (
    Edge,
    GraphStore,
    Node,
    NodeKind,
    TaggedProvenanceGraph,
    parse_graph,
    serialize_graph,
)

S, O = NodeKind.SUBJECT, NodeKind.OBJECT

# -- build a two-process graph by hand -----------------------------------

graph = TaggedProvenanceGraph.build(
    "host-101-demo",
    "host-101",
    nodes=[
        Node("p0", S, "C:\\Windows\\System32\\WindowsPowerShell\\v1.0\\powershell.exe -noP -w 1"),
        Node("p1", S, "C:\\Windows\\System32\\cmd.exe /c whoami"),
        Node("f0", O, "C:\\Users\\alice\\AppData\\payload.ps1"),
        Node("f1", O, "C:\\Windows\\System32\\ntdll.dll"),
    ],
    edges=[
        Edge("p0", "f0", "read", "Untrusted_Read", 0),
        Edge("p0", "p1", "fork", "Untrusted_Exec", 1),
        Edge("p1", "f1", "load", "Benign_Load", 2),
    ],
)

print("graph:", graph.graph_id, "on", graph.host_id)
print("nodes:", len(graph.nodes), " edges:", len(graph.edges))

# -- the interchange text is line-oriented and diff-friendly --------------

text = serialize_graph(graph)
print("\ninterchange form:")
print(text)

# parse_graph is the exact inverse: byte-identical round trip
assert serialize_graph(parse_graph(text)) == text
print("round trip is byte-identical")

# -- a corpus is a directory of .tpg files plus an index ------------------

with tempfile.TemporaryDirectory() as tmp:
    store = GraphStore(tmp)
    store.put(graph)
    again = store.get("host-101-demo")
    print("\nstored and reloaded:", again.graph_id)
    print("neighbors of p0:", list(again.neighbors("p0")))
    print("edges p0 -> p1:", [e.syscall_label for e in again.edges_between("p0", "p1")])
