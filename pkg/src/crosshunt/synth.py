"""Deterministic synthetic corpora for tests, demos and benchmarks.

Every builder is pure given its rng_seed. The hunt corpora contain three
populations: seed graphs (fully developed intrusion chains), planted attack
graphs (the same core activity with a lighter footprint, some padded with
look-alike subject nodes that dilute the score), and benign graphs (distinct
label vocabularies; a few "grey" families deliberately share single buckets
with the seeds to produce small non-zero scores).
"""

from __future__ import annotations

import numpy as np

from .graph_model import Corpus, DocId, Edge, Node, NodeKind, TaggedProvenanceGraph

S = NodeKind.SUBJECT
O = NodeKind.OBJECT

# -- attack vocabulary (identical strings across attack graphs on purpose:
#    byte-equal labels featurize to identical rows, so bucket membership of
#    the core entities is exact rather than threshold-dependent) -------------

PS_LOADER_LABEL = (
    "C:\\Windows\\System32\\WindowsPowerShell\\v1.0\\PowerShell.exe"
    " -NoP -NonI -W Hidden -Enc aQBlAHgAKABOAGUAdwBjAGwA"
)
PAYLOAD_LABEL = "C:\\Users\\Public\\Libraries\\invoice_update.ps1"
C2_LABEL = "185.220.101.44:4443"
REG_RUN_LABEL = "HKLM\\Software\\Microsoft\\Windows\\CurrentVersion\\Run\\SyncHelper"
CRED_DUMP_LABEL = "C:\\Windows\\Temp\\mem\\lsass_diag.dmp"
RECON_CMD_LABEL = "C:\\Windows\\System32\\cmd.exe /c tasklist /v /fo csv"
SCHTASK_LABEL = (
    "C:\\Windows\\System32\\schtasks.exe /create /tn SyncHelper"
    " /tr C:\\Users\\Public\\Libraries\\invoice_update.ps1"
)
STAGE2_LABEL = "C:\\Users\\Public\\Libraries\\stage2_helper.dll"
DOCS_LABEL = "C:\\Users\\Public\\Documents\\quarterly_forecast.xlsx"
ADMIN_SCRIPT_LABEL = "C:\\ProgramData\\Scripts\\weekly_maintenance.ps1"

_USERS = ("kim", "lee", "ana", "raj", "mia", "tom", "eva", "sam")
_SITES = ("cdn-metrics", "static-assets", "tiles-geo", "fonts-pool")
_SVC_GROUPS = ("netsvcs", "localservice", "utcsvc", "appmodel")
_PROJECTS = ("billing-api", "fleet-sync", "geo-index", "mail-relay")


def _hexes(rng: np.random.Generator, n: int, width: int = 6) -> list[str]:
    return ["".join(rng.choice(list("0123456789abcdef"), size=width)) for _ in range(n)]


class _GraphDraft:
    """Tiny helper: accumulate nodes/edges, then build a validated graph."""

    def __init__(self, graph_id: str, host_id: str):
        self.graph_id = graph_id
        self.host_id = host_id
        self.nodes: list[Node] = []
        self.edges: list[Edge] = []

    def node(self, node_id: str, kind: NodeKind, label: str) -> str:
        self.nodes.append(Node(node_id, kind, label))
        return node_id

    def edge(self, src: str, dst: str, syscall: str, susp: str) -> None:
        self.edges.append(Edge(src, dst, syscall, susp, len(self.edges)))

    def build(self) -> TaggedProvenanceGraph:
        return TaggedProvenanceGraph.build(
            self.graph_id, self.host_id, self.nodes, self.edges
        )


# -- attack graphs -------------------------------------------------------------


def _seed_graph(graph_id: str, host_id: str, rng: np.random.Generator) -> TaggedProvenanceGraph:
    g = _GraphDraft(graph_id, host_id)
    g.node("p0", S, PS_LOADER_LABEL)
    g.node("p1", S, RECON_CMD_LABEL)
    g.node("p2", S, SCHTASK_LABEL)
    g.node("o0", O, PAYLOAD_LABEL)
    g.node("o1", O, C2_LABEL)
    g.node("o2", O, REG_RUN_LABEL)
    g.node("o3", O, CRED_DUMP_LABEL)
    g.node("o4", O, STAGE2_LABEL)
    g.node("o5", O, DOCS_LABEL)
    sess = _hexes(rng, 1)[0]
    g.node("x0", O, f"C:\\Windows\\Temp\\diag\\sess_{sess}.log")
    g.edge("p0", "o0", "read", "Untrusted_Read")
    g.edge("p0", "o0", "exec", "Untrusted_Exec")
    g.edge("p0", "o1", "write", "C2_Comm")
    g.edge("p0", "o3", "write", "Cred_Dump_Write")
    g.edge("p0", "o4", "load", "Stage_Load")
    g.edge("p0", "o5", "read", "Sensitive_Read")
    g.edge("p0", "p1", "fork", "Child_Spawn")
    g.edge("p0", "p2", "fork", "Child_Spawn")
    g.edge("p1", "o5", "read", "Sensitive_Read")
    g.edge("p1", "x0", "write", "Recon_Tmp_Write")
    g.edge("p2", "o2", "write", "Persist_Write")
    return g.build()


def _planted_graph(
    graph_id: str, host_id: str, rng: np.random.Generator, ballast: int
) -> TaggedProvenanceGraph:
    """Light-footprint attack: loader + payload + beacon, plus `ballast`
    look-alike loader subjects doing mundane reads (they enlarge the matched
    pair set without contributing traversal weight, diluting the score)."""
    g = _GraphDraft(graph_id, host_id)
    g.node("p0", S, PS_LOADER_LABEL)
    g.node("o0", O, PAYLOAD_LABEL)
    g.node("o1", O, C2_LABEL)
    g.edge("p0", "o0", "read", "Untrusted_Read")
    g.edge("p0", "o0", "exec", "Untrusted_Exec")
    g.edge("p0", "o1", "write", "C2_Comm")
    user = rng.choice(_USERS)
    for i, hx in enumerate(_hexes(rng, ballast)):
        pid = g.node(f"p{8 + i}", S, PS_LOADER_LABEL)
        xid = g.node(
            f"x{i}", O, f"C:\\Users\\{user}\\AppData\\Local\\Temp\\tmp_{hx}.dat"
        )
        g.edge(pid, xid, "read", "Low_Sev_Read")
    return g.build()


# -- benign families -----------------------------------------------------------


def _benign_browser(g: _GraphDraft, rng: np.random.Generator) -> None:
    user = rng.choice(_USERS)
    site = rng.choice(_SITES)
    ch, prof, asset = _hexes(rng, 3)
    p = g.node("p0", S, f"C:\\Program Files\\Mozilla Firefox\\firefox.exe -contentproc --channel={ch}")
    js = g.node("o0", O, f"https://{site}.example.net/assets/bundle_{asset}.js")
    cache = g.node(
        "o1",
        O,
        f"C:\\Users\\{user}\\AppData\\Local\\Mozilla\\Firefox\\Profiles\\{prof}.default\\cache2\\entries\\{asset}",
    )
    g.edge(p, js, "read", "Net_Fetch")
    g.edge(p, cache, "write", "Cache_Write")


def _benign_updater(g: _GraphDraft, rng: np.random.Generator) -> None:
    guid, ver = _hexes(rng, 2)
    p = g.node("p0", S, "C:\\Program Files (x86)\\Microsoft\\EdgeUpdate\\MicrosoftEdgeUpdate.exe /svc")
    pkg = g.node(
        "o0", O,
        f"C:\\Program Files (x86)\\Microsoft\\EdgeUpdate\\Download\\{guid}\\edge_x64_{ver}.exe",
    )
    manifest = g.node("o1", O, f"https://msedge.example.net/api/manifest_{ver}.json")
    g.edge(p, manifest, "read", "Net_Fetch")
    g.edge(p, pkg, "write", "Pkg_Write")
    g.edge(p, pkg, "exec", "Pkg_Exec")


def _benign_office(g: _GraphDraft, rng: np.random.Generator) -> None:
    user = rng.choice(_USERS)
    name = rng.choice(("budget", "roster", "minutes", "planning"))
    q, tmp = _hexes(rng, 2)
    p = g.node("p0", S, "C:\\Program Files\\Microsoft Office\\root\\Office16\\EXCEL.EXE /dde")
    doc = g.node("o0", O, f"C:\\Users\\{user}\\Documents\\{name}_{q}.xlsx")
    autosave = g.node("o1", O, f"C:\\Users\\{user}\\AppData\\Roaming\\Microsoft\\Excel\\ar_{tmp}.xar")
    g.edge(p, doc, "read", "Doc_Read")
    g.edge(p, autosave, "write", "Doc_Autosave")


def _benign_service(g: _GraphDraft, rng: np.random.Generator) -> None:
    group = rng.choice(_SVC_GROUPS)
    svc = rng.choice(("DiagTrack", "WSearch", "BITS", "Spooler"))
    p = g.node("p0", S, f"C:\\Windows\\System32\\svchost.exe -k {group} -p -s {svc}")
    reg = g.node("o0", O, f"HKLM\\System\\CurrentControlSet\\Services\\{svc}\\Parameters")
    db = g.node("o1", O, f"C:\\Windows\\ServiceProfiles\\LocalService\\AppData\\{svc.lower()}_state.db")
    g.edge(p, reg, "read", "Cfg_Read")
    g.edge(p, db, "write", "State_Write")


def _benign_build(g: _GraphDraft, rng: np.random.Generator) -> None:
    user = rng.choice(_USERS)
    proj = rng.choice(_PROJECTS)
    hx, ver = _hexes(rng, 2)
    p = g.node(
        "p0", S,
        f"C:\\Users\\{user}\\AppData\\Local\\Programs\\Python\\Python311\\python.exe"
        f" build.py --target {proj}",
    )
    src = g.node("o0", O, f"C:\\Repos\\{proj}\\src\\module_{hx}.py")
    out = g.node("o1", O, f"C:\\Repos\\{proj}\\dist\\{proj}-0.{int(ver[:2], 16)}.whl")
    g.edge(p, src, "read", "Src_Read")
    g.edge(p, out, "write", "Artifact_Write")


def _benign_backup(g: _GraphDraft, rng: np.random.Generator) -> None:
    user = rng.choice(_USERS)
    day, hx = _hexes(rng, 2)
    p = g.node("p0", S, "C:\\Program Files\\AgentBackup\\backup_agent.exe /scheduled")
    docs = g.node("o0", O, f"C:\\Users\\{user}\\Documents\\archive_{hx}.pst")
    snap = g.node("o1", O, f"D:\\Backups\\snapshots\\snap_{day}.vbk")
    g.edge(p, docs, "read", "Backup_Read")
    g.edge(p, snap, "write", "Backup_Write")


_PURE_FAMILIES = (
    _benign_browser,
    _benign_updater,
    _benign_office,
    _benign_service,
    _benign_build,
    _benign_backup,
)


def _grey_doc(g: _GraphDraft, rng: np.random.Generator) -> None:
    """Shares the loader bucket and the shared-document bucket with seeds;
    its edges carry low-severity tags, so consumption earns only W2."""
    hx = _hexes(rng, 1)[0]
    p = g.node("p0", S, PS_LOADER_LABEL)
    doc = g.node("o0", O, DOCS_LABEL)
    log = g.node("o1", O, f"C:\\ProgramData\\Scripts\\logs\\run_{hx}.log")
    g.edge(p, doc, "read", "Low_Sev_Read")
    g.edge(p, log, "write", "Low_Sev_Write")


def _grey_noisy(g: _GraphDraft, rng: np.random.Generator, ballast: int) -> None:
    """One falsely tagged Untrusted_Read gives a single W3 hit; ballast
    loader look-alikes set the denominator (score 0.8 / (1 + ballast))."""
    user = rng.choice(_USERS)
    p = g.node("p0", S, PS_LOADER_LABEL)
    scr = g.node("o0", O, ADMIN_SCRIPT_LABEL)
    g.edge(p, scr, "read", "Untrusted_Read")
    for i, hx in enumerate(_hexes(rng, ballast)):
        pid = g.node(f"p{8 + i}", S, PS_LOADER_LABEL)
        xid = g.node(f"x{i}", O, f"C:\\Users\\{user}\\AppData\\Local\\Temp\\tmp_{hx}.dat")
        g.edge(pid, xid, "read", "Low_Sev_Read")


def _benign_graph(
    graph_id: str, host_id: str, family: str, rng: np.random.Generator
) -> TaggedProvenanceGraph:
    g = _GraphDraft(graph_id, host_id)
    if family == "grey_doc":
        _grey_doc(g, rng)
    elif family == "grey_noisy":
        _grey_noisy(g, rng, ballast=1)
    elif family == "grey_noisy3":
        _grey_noisy(g, rng, ballast=2)
    else:
        _PURE_FAMILIES[int(rng.integers(len(_PURE_FAMILIES)))](g, rng)
    return g.build()


# -- assembled corpora --------------------------------------------------------


def _hunt_corpus(
    n_seeds: int,
    planted_ballast: tuple[int, ...],
    benign_families: list[str],
    n_hosts: int,
    rng_seed: int,
) -> tuple[Corpus, dict[str, bool]]:
    rng = np.random.default_rng(rng_seed)
    graphs: list[TaggedProvenanceGraph] = []
    truth: dict[str, bool] = {}
    seed_ids: list[str] = []
    for i in range(n_seeds):
        gid = f"seed-{i + 1:02d}"
        graphs.append(_seed_graph(gid, f"wks-s{i + 1:02d}", rng))
        truth[gid] = True
        seed_ids.append(gid)
    for i, ballast in enumerate(planted_ballast):
        gid = f"atk-{i + 1:02d}"
        graphs.append(_planted_graph(gid, f"wks-a{i + 1:02d}", rng, ballast))
        truth[gid] = True
    hosts = [f"wks-b{i + 1:02d}" for i in range(n_hosts)]
    for i, family in enumerate(benign_families):
        gid = f"ben-{i + 1:03d}"
        host = hosts[int(rng.integers(len(hosts)))]
        graphs.append(_benign_graph(gid, host, family, rng))
        truth[gid] = False
    return Corpus.from_graphs(graphs, tuple(seed_ids)), truth


def day2_corpus(rng_seed: int = 7) -> tuple[Corpus, dict[str, bool]]:
    """3 seeds, 7 planted attack graphs on 7 distinct hosts, 52 benign."""
    families = ["pure"] * 40 + ["grey_doc"] * 6 + ["grey_noisy3"] * 3 + ["grey_noisy"] * 3
    return _hunt_corpus(
        n_seeds=3,
        planted_ballast=(0, 0, 0, 2, 2, 4, 4),
        benign_families=families,
        n_hosts=20,
        rng_seed=rng_seed,
    )


def day1_corpus(rng_seed: int = 11) -> tuple[Corpus, dict[str, bool]]:
    """4 seeds, 14 planted attack graphs, 400 benign (including greys)."""
    families = (
        ["pure"] * 376 + ["grey_doc"] * 12 + ["grey_noisy3"] * 6 + ["grey_noisy"] * 6
    )
    return _hunt_corpus(
        n_seeds=4,
        planted_ballast=(0, 0, 0, 0, 0, 0, 2, 2, 2, 2, 4, 4, 4, 4),
        benign_families=families,
        n_hosts=30,
        rng_seed=rng_seed,
    )


def demo_pair() -> Corpus:
    """A two-graph corpus: one full chain, one light-footprint twin."""
    rng = np.random.default_rng(99)
    a = _seed_graph("demo-a", "wks-011", rng)
    b = _planted_graph("demo-b", "wks-042", rng, ballast=0)
    return Corpus.from_graphs([a, b], ("demo-a",))


# -- ten-label mini corpus (featurizer golden + bucket ground truth) ----------

_PS_PREFIX = "C:\\Windows\\System32\\WindowsPowerShell\\v1.0\\PowerShell.exe"

MINI_LABELS: tuple[tuple[str, str], ...] = (
    # (cluster, label); every label shares the "c:" token so a universal
    # term with idf 0 always exists
    ("ps-obf", f"{_PS_PREFIX} -NoP -w 1"),
    ("ps-obf", f"{_PS_PREFIX} -NoP -NonI -w 1"),
    ("ps-admin", f"{_PS_PREFIX} -ExecutionPolicy Bypass -File backup.ps1"),
    ("ps-admin", f"{_PS_PREFIX} -ExecutionPolicy Bypass -File backup.ps1 -NoLogo"),
    ("svc", "C:\\Windows\\System32\\svchost.exe -k netsvcs -p"),
    ("svc", "C:\\Windows\\System32\\svchost.exe -k localservice -p"),
    ("browser", "C:\\Program Files\\Mozilla Firefox\\firefox.exe -new-tab"),
    ("browser", "C:\\Program Files\\Mozilla Firefox\\firefox.exe -private-window"),
    ("svc", "C:\\Windows\\System32\\svchost.exe -k netsvcs -p"),  # exact dup of #5
    ("cmd", "C:\\Windows\\System32\\cmd.exe /c whoami /all"),
)


def mini_label_corpus() -> tuple[Corpus, dict[DocId, str]]:
    """One graph holding ten subject nodes plus the hand-labeled clusters."""
    g = _GraphDraft("mini", "wks-m01")
    cluster_truth: dict[DocId, str] = {}
    for i, (cluster, label) in enumerate(MINI_LABELS):
        nid = g.node(f"s{i:02d}", S, label)
        cluster_truth[("mini", nid)] = cluster
    corpus = Corpus.from_graphs([g.build()])
    return corpus, cluster_truth


# -- tiny graph family for exhaustive cross-checks ----------------------------

_TINY_SUBJECT_LABELS = (
    PS_LOADER_LABEL,
    f"{_PS_PREFIX} -NoP -w 1",
    RECON_CMD_LABEL,
    "C:\\Windows\\System32\\svchost.exe -k netsvcs -p",
)
_TINY_OBJECT_LABELS = (
    PAYLOAD_LABEL,
    ADMIN_SCRIPT_LABEL,
    STAGE2_LABEL,
    C2_LABEL,
    DOCS_LABEL,
    "C:\\Windows\\System32\\kernel32.dll",
)
_TINY_SYSCALLS = ("read", "write", "exec", "fork", "load", "create")
_TINY_SUSP = ("Untrusted_Exec", "Untrusted_Read", "Low_Sev_Read", "C2_Comm")


def tiny_graph_family(count: int = 12, rng_seed: int = 5) -> Corpus:
    """Small random graphs (2..6 nodes) over shared label pools."""
    rng = np.random.default_rng(rng_seed)
    graphs = []
    for i in range(count):
        g = _GraphDraft(f"tiny-{i + 1:02d}", f"wks-t{i + 1:02d}")
        n_nodes = int(rng.integers(2, 7))
        ids = []
        for j in range(n_nodes):
            if rng.random() < 0.45:
                ids.append(g.node(f"n{j}", S, str(rng.choice(_TINY_SUBJECT_LABELS))))
            else:
                ids.append(g.node(f"n{j}", O, str(rng.choice(_TINY_OBJECT_LABELS))))
        n_edges = int(rng.integers(1, 8))
        for _ in range(n_edges):
            a, b = rng.choice(len(ids), size=2, replace=False)
            g.edge(
                ids[int(a)],
                ids[int(b)],
                str(rng.choice(_TINY_SYSCALLS)),
                str(rng.choice(_TINY_SUSP)),
            )
        graphs.append(g.build())
    return Corpus.from_graphs(graphs)


# -- benchmark corpus ----------------------------------------------------------


def benchmark_corpus(n_nodes: int, rng_seed: int = 3) -> tuple[Corpus, dict[str, bool]]:
    """Roughly n_nodes nodes total: a few seeds/planted plus filler benign."""
    rng = np.random.default_rng(rng_seed)
    graphs: list[TaggedProvenanceGraph] = []
    truth: dict[str, bool] = {}
    seed_ids = []
    for i in range(2):
        gid = f"seed-{i + 1:02d}"
        graphs.append(_seed_graph(gid, f"wks-s{i + 1:02d}", rng))
        truth[gid] = True
        seed_ids.append(gid)
    for i in range(3):
        gid = f"atk-{i + 1:02d}"
        graphs.append(_planted_graph(gid, f"wks-a{i + 1:02d}", rng, ballast=i))
        truth[gid] = True
    used = sum(len(g.nodes) for g in graphs)
    i = 0
    while used < n_nodes:
        gid = f"ben-{i + 1:04d}"
        g = _benign_graph(gid, f"wks-b{(i % 40) + 1:02d}", "pure", rng)
        graphs.append(g)
        truth[gid] = False
        used += len(g.nodes)
        i += 1
    return Corpus.from_graphs(graphs, tuple(seed_ids)), truth
