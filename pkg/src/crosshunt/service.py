"""Loopback JSON-over-HTTP API exposing the ingested corpus and the hunter.

Routes:
    GET  /graphs                     corpus listing
    GET  /graphs/{id}                one full graph
    GET  /buckets[?j_t=&signature_length=&seed=]
    GET  /compare?a=&b=[&weights...] pair score with per-pair contributions
    POST /hunt                       body: seeds/threshold/weights/bucket params

The server is read-only over an immutable corpus snapshot (re-read when the
store changes on disk). Featurization and bucketization are memoized per
(corpus version, j_t, signature_length, seed); pair scores are additionally
memoized per weights and seed set, so threshold-only changes never recompute.
Cache behavior is reported in the X-Crosshunt-Cache response header, keeping
response bodies byte-identical to CLI reports for the same parameters.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from .bucketizer import CorpusBuckets
from .config import Config
from .correlator import (
    HuntConfig,
    HuntReport,
    bucketize_corpus,
    featurize_corpus,
    hunt,
)
from .errors import CrosshuntError, GraphNotFoundError, MissingSeedError
from .graph_model import GRAPH_SUFFIX, Corpus, GraphStore, NodeKind
from .graph_similarity import SimilarityScore, WeightConfig, similarity


class _HTTPError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


class ServiceState:
    """Corpus snapshot plus memoized feature/bucket/score caches."""

    def __init__(self, corpus_dir: str | Path, config: Config):
        self.store = GraphStore(corpus_dir)
        self.config = config
        self._lock = threading.Lock()
        self._version: tuple | None = None
        self._corpus: Corpus | None = None
        self._buckets: dict[tuple, CorpusBuckets] = {}
        self._scores: dict[tuple, tuple] = {}

    def _disk_version(self) -> tuple:
        root = self.store.root
        if not root.is_dir():
            return ()
        entries = []
        for path in sorted(root.glob(f"*{GRAPH_SUFFIX}")):
            st = path.stat()
            entries.append((path.name, st.st_mtime_ns, st.st_size))
        return tuple(entries)

    def corpus(self) -> Corpus:
        with self._lock:
            version = self._disk_version()
            if version != self._version:
                self._corpus = self.store.load_corpus()
                self._version = version
                self._buckets.clear()
                self._scores.clear()
            assert self._corpus is not None
            if not self._corpus.graphs:
                raise _HTTPError(409, "corpus is empty; ingest graphs first")
            return self._corpus

    def buckets(self, j_t: float, length: int, seed: int) -> tuple[CorpusBuckets, bool]:
        corpus = self.corpus()
        key = (self._version, j_t, length, seed)
        with self._lock:
            cached = self._buckets.get(key)
        if cached is not None:
            return cached, True
        features = featurize_corpus(corpus)
        buckets = bucketize_corpus(
            features, j_t=j_t, signature_length=length, seed=seed
        )
        with self._lock:
            self._buckets[key] = buckets
        return buckets, False

    def pair_scores(
        self,
        seeds: tuple[str, ...],
        j_t: float,
        length: int,
        seed: int,
        weights: WeightConfig,
    ) -> tuple[tuple, bool, bool]:
        """Scored pairs for a seed set; (pairs, buckets_hit, scores_hit)."""
        corpus = self.corpus()
        key = (
            self._version,
            j_t,
            length,
            seed,
            (weights.w1, weights.w2, weights.w3),
            tuple(sorted(set(seeds))),
        )
        with self._lock:
            cached = self._scores.get(key)
        if cached is not None:
            return cached, True, True
        buckets, buckets_hit = self.buckets(j_t, length, seed)
        rules = self.config.ruleset()
        pair_keys = sorted(
            {
                (min(s, other), max(s, other))
                for s in set(seeds)
                for other in corpus.graph_ids()
                if other != s
            }
        )
        scored = tuple(
            (a, b, similarity(corpus.graphs[a], corpus.graphs[b], buckets, rules, weights))
            for a, b in pair_keys
        )
        with self._lock:
            self._scores[key] = scored
        return scored, buckets_hit, False


def _graph_summary(corpus: Corpus) -> dict:
    return {
        "graphs": [
            {
                "graph_id": g.graph_id,
                "host_id": g.host_id,
                "node_count": len(g.nodes),
                "edge_count": len(g.edges),
            }
            for g in corpus.iter_graphs()
        ]
    }


def _graph_detail(corpus: Corpus, graph_id: str) -> dict:
    if graph_id not in corpus.graphs:
        raise _HTTPError(404, f"graph {graph_id!r} not found")
    g = corpus.graphs[graph_id]
    return {
        "graph_id": g.graph_id,
        "host_id": g.host_id,
        "nodes": [
            {"id": n.node_id, "kind": n.kind.value, "label": n.label}
            for n in (g.nodes[nid] for nid in g.node_ids())
        ],
        "edges": [
            {
                "src": e.src,
                "dst": e.dst,
                "syscall_label": e.syscall_label,
                "suspiciousness_label": e.suspiciousness_label,
                "seq": e.seq,
            }
            for e in g.edges
        ],
    }


def _buckets_payload(buckets: CorpusBuckets) -> dict:
    payload: dict = {}
    for kind in (NodeKind.SUBJECT, NodeKind.OBJECT):
        bmap = buckets.by_kind.get(kind)
        if bmap is None:
            continue
        payload[kind.value] = {
            "kind": bmap.kind.value,
            "threshold": bmap.threshold,
            "signature_length": bmap.signature_length,
            "seed": bmap.seed,
            "method": bmap.method,
            "assignment": {
                f"{gid}:{nid}": bucket
                for (gid, nid), bucket in bmap.assignment.items()
            },
        }
    return payload


def compare_payload(a: str, b: str, score: SimilarityScore) -> dict:
    return {
        "a": a,
        "b": b,
        "raw": score.value,
        "clamped": score.clamped,
        "mps_size": score.mps_size,
        "pairs": [
            {
                "a_node": f"{ga}:{na}",
                "b_node": f"{gb}:{nb}",
                "contribution": contribution,
            }
            for (ga, na), (gb, nb), contribution in score.matched_pairs
        ],
    }


def _float_param(params: dict, name: str, default: float) -> float:
    if name not in params:
        return default
    try:
        return float(params[name][0])
    except (TypeError, ValueError):
        raise _HTTPError(400, f"parameter {name} must be a number") from None


def _int_param(params: dict, name: str, default: int) -> int:
    if name not in params:
        return default
    try:
        return int(params[name][0])
    except (TypeError, ValueError):
        raise _HTTPError(400, f"parameter {name} must be an integer") from None


def build_handler(state: ServiceState) -> type[BaseHTTPRequestHandler]:
    config = state.config

    class Handler(BaseHTTPRequestHandler):
        server_version = "crosshunt"

        def log_message(self, fmt: str, *args) -> None:  # keep stdio clean
            pass

        def _send(self, status: int, body: str, headers: dict | None = None) -> None:
            data = body.encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(data)))
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            for key, value in (headers or {}).items():
                self.send_header(key, value)
            self.end_headers()
            self.wfile.write(data)

        def _send_json(self, obj: dict, headers: dict | None = None) -> None:
            self._send(200, json.dumps(obj, indent=2, sort_keys=True) + "\n", headers)

        def _send_error_json(self, status: int, message: str) -> None:
            self._send(status, json.dumps({"error": message}) + "\n")

        def _dispatch(self, handler) -> None:
            try:
                handler()
            except _HTTPError as exc:
                self._send_error_json(exc.status, exc.message)
            except (GraphNotFoundError, MissingSeedError) as exc:
                self._send_error_json(404, str(exc))
            except (ValueError, CrosshuntError) as exc:
                self._send_error_json(400, str(exc))
            except Exception as exc:  # noqa: BLE001 - last-resort server guard
                self._send_error_json(500, f"internal error: {exc}")

        def do_OPTIONS(self) -> None:  # CORS preflight for the UI
            self._send(204, "")

        def do_GET(self) -> None:
            self._dispatch(self._handle_get)

        def do_POST(self) -> None:
            self._dispatch(self._handle_post)

        def _handle_get(self) -> None:
            url = urlparse(self.path)
            params = parse_qs(url.query)
            parts = [p for p in url.path.split("/") if p]
            if url.path == "/graphs":
                self._send_json(_graph_summary(state.corpus()))
            elif len(parts) == 2 and parts[0] == "graphs":
                self._send_json(_graph_detail(state.corpus(), parts[1]))
            elif url.path == "/buckets":
                j_t = _float_param(params, "j_t", config.j_t)
                length = _int_param(params, "signature_length", config.signature_length)
                seed = _int_param(params, "seed", config.seed)
                buckets, hit = state.buckets(j_t, length, seed)
                self._send_json(
                    _buckets_payload(buckets),
                    {"X-Crosshunt-Cache": f"buckets={'hit' if hit else 'miss'}"},
                )
            elif url.path == "/compare":
                self._handle_compare(params)
            else:
                raise _HTTPError(404, f"no route for {url.path}")

        def _handle_compare(self, params: dict) -> None:
            if "a" not in params or "b" not in params:
                raise _HTTPError(400, "compare needs a and b graph ids")
            a, b = params["a"][0], params["b"][0]
            corpus = state.corpus()
            for gid in (a, b):
                if gid not in corpus.graphs:
                    raise _HTTPError(404, f"graph {gid!r} not found")
            j_t = _float_param(params, "j_t", config.j_t)
            length = _int_param(params, "signature_length", config.signature_length)
            seed = _int_param(params, "seed", config.seed)
            weights = WeightConfig(
                _float_param(params, "w1", config.w1),
                _float_param(params, "w2", config.w2),
                _float_param(params, "w3", config.w3),
            )
            buckets, hit = state.buckets(j_t, length, seed)
            score = similarity(
                corpus.graphs[a], corpus.graphs[b], buckets,
                config.ruleset(), weights,
            )
            self._send_json(
                compare_payload(a, b, score),
                {"X-Crosshunt-Cache": f"buckets={'hit' if hit else 'miss'}"},
            )

        def _handle_post(self) -> None:
            url = urlparse(self.path)
            if url.path != "/hunt":
                raise _HTTPError(404, f"no route for {url.path}")
            try:
                length = int(self.headers.get("Content-Length") or 0)
                body = json.loads(self.rfile.read(length) or b"{}")
            except json.JSONDecodeError:
                raise _HTTPError(400, "request body is not valid JSON") from None
            if not isinstance(body, dict):
                raise _HTTPError(400, "request body must be a JSON object")
            seeds = body.get("seeds")
            if not isinstance(seeds, list) or not all(isinstance(s, str) for s in seeds) or not seeds:
                raise _HTTPError(400, "seeds must be a non-empty list of graph ids")
            corpus = state.corpus()
            for s in seeds:
                if s not in corpus.graphs:
                    raise _HTTPError(404, f"seed graph {s!r} not found")
            raw_weights = body.get("weights", [config.w1, config.w2, config.w3])
            if isinstance(raw_weights, dict):
                raw_weights = [
                    raw_weights.get("w1", config.w1),
                    raw_weights.get("w2", config.w2),
                    raw_weights.get("w3", config.w3),
                ]
            if not isinstance(raw_weights, list) or len(raw_weights) != 3:
                raise _HTTPError(400, "weights must be [w1, w2, w3]")
            try:
                weights = WeightConfig(*(float(w) for w in raw_weights))
                hunt_config = HuntConfig(
                    seed_ids=tuple(seeds),
                    alert_threshold=float(body.get("threshold", config.alert_threshold)),
                    weights=weights,
                    j_t=float(body.get("j_t", config.j_t)),
                    signature_length=int(body.get("signature_length", config.signature_length)),
                    seed=int(body.get("seed", config.seed)),
                )
            except (TypeError, ValueError) as exc:
                raise _HTTPError(400, str(exc)) from None
            scored, buckets_hit, scores_hit = state.pair_scores(
                hunt_config.seed_ids,
                hunt_config.j_t,
                hunt_config.signature_length,
                hunt_config.seed,
                weights,
            )
            report = _report_from_scored(corpus, hunt_config, scored)
            cache_note = (
                f"buckets={'hit' if buckets_hit else 'miss'} "
                f"scores={'hit' if scores_hit else 'miss'}"
            )
            self._send(200, report.to_json(), {"X-Crosshunt-Cache": cache_note})

    return Handler


def _report_from_scored(corpus: Corpus, config: HuntConfig, scored: tuple) -> HuntReport:
    """Assemble a HuntReport from memoized pair scores (same math as hunt)."""
    from .correlator import Alert, PairScore

    pairs = tuple(PairScore(a, b, s.value, s.clamped) for a, b, s in scored)
    seed_set = set(config.seed_ids)
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
    return HuntReport(
        seed_ids=tuple(sorted(seed_set)),
        alert_threshold=config.alert_threshold,
        weights=config.weights,
        j_t=config.j_t,
        signature_length=config.signature_length,
        seed=config.seed,
        pairs=pairs,
        alerts=alerts,
        correlated_hosts=tuple(sorted({a.host_id for a in alerts})),
    )


def serve(
    corpus_dir: str | Path,
    config: Config,
    host: str | None = None,
    port: int | None = None,
) -> ThreadingHTTPServer:
    """Create a bound server (caller runs serve_forever)."""
    state = ServiceState(corpus_dir, config)
    handler = build_handler(state)
    bind_host = host if host is not None else config.host
    bind_port = port if port is not None else config.port
    return ThreadingHTTPServer((bind_host, bind_port), handler)
