"""Command-line front end: ingest, bucketize, compare, hunt, eval, bench, serve.

Options resolve in three layers: built-in defaults, then a config file
(--config/-C or the CROSSHUNT_CONFIG environment variable), then explicit
command-line flags. Domain failures exit 1 with a one-line diagnostic on
stderr; usage errors exit 2 (argparse).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import synth
from .config import Config, load_config
from .correlator import (
    HuntConfig,
    benchmark,
    bucketize_corpus,
    evaluate,
    featurize_corpus,
    hunt,
    parse_truth,
    threshold_sweep,
)
from .errors import CrosshuntError
from .graph_model import Corpus, GraphStore, NodeKind, parse_graph
from .graph_similarity import WeightConfig, similarity
from .service import serve as build_server


def _add_corpus_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--corpus-dir", default=None, help="graph store directory (default: corpus)"
    )


def _add_bucket_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--jt", type=float, default=None, metavar="J_T",
        help="estimated-Jaccard bucketing threshold in (0, 1]",
    )
    parser.add_argument(
        "--signature-length", type=int, default=None, metavar="D",
        help="MinHash signature length",
    )
    parser.add_argument(
        "--seed", type=int, default=None, help="hash-family RNG seed"
    )
    parser.add_argument(
        "--jaccard-exact", action="store_true",
        help="bucket on exact Jaccard instead of MinHash estimates",
    )
    parser.add_argument(
        "--banding", action="store_true",
        help="use banded candidate generation before signature comparison",
    )


def _add_weight_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--w1", type=float, default=None, help="matched-pair, similar edges")
    parser.add_argument("--w2", type=float, default=None, help="matched-pair, dissimilar edges")
    parser.add_argument("--w3", type=float, default=None, help="unmatched pair, similar edges")
    parser.add_argument("--rules", default=None, help="edge-rule table file")


def _resolved(config: Config, args: argparse.Namespace) -> Config:
    """Overlay non-None CLI flags onto the loaded config."""
    updates = {}
    for flag, key in (
        ("corpus_dir", "corpus_dir"),
        ("jt", "j_t"),
        ("signature_length", "signature_length"),
        ("seed", "seed"),
        ("w1", "w1"),
        ("w2", "w2"),
        ("w3", "w3"),
        ("rules", "rules_path"),
        ("threshold", "alert_threshold"),
        ("workers", "workers"),
        ("host", "host"),
        ("port", "port"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            updates[key] = value
    if getattr(args, "banding", False):
        updates["banding"] = True
    return dataclasses.replace(config, **updates)


def _load_corpus(config: Config, seeds: tuple[str, ...] = ()) -> Corpus:
    return GraphStore(config.corpus_dir).load_corpus(seeds)


def _parse_seeds(raw: str) -> tuple[str, ...]:
    seeds = tuple(s for s in (part.strip() for part in raw.split(",")) if s)
    if not seeds:
        raise ValueError("--seeds needs at least one graph id")
    return seeds


def _hunt_config(config: Config, args: argparse.Namespace, seeds: tuple[str, ...]) -> HuntConfig:
    return HuntConfig(
        seed_ids=seeds,
        alert_threshold=config.alert_threshold,
        weights=config.weights(),
        j_t=config.j_t,
        signature_length=config.signature_length,
        seed=config.seed,
        exact_jaccard=getattr(args, "jaccard_exact", False),
        banding=config.banding,
        workers=config.workers,
    )


# -- subcommands ----------------------------------------------------------------


def _cmd_ingest(config: Config, args: argparse.Namespace) -> int:
    store = GraphStore(config.corpus_dir)
    total_nodes = total_edges = 0
    for name in args.files:
        text = Path(name).read_text(encoding="utf-8")
        graph = parse_graph(text)
        store.put(graph)
        total_nodes += len(graph.nodes)
        total_edges += len(graph.edges)
        print(
            f"ingested {graph.graph_id} (host {graph.host_id}, "
            f"{len(graph.nodes)} nodes, {len(graph.edges)} edges)"
        )
    print(
        f"{len(args.files)} graphs -> {store.root} "
        f"({total_nodes} nodes, {total_edges} edges)"
    )
    return 0


def _cmd_bucketize(config: Config, args: argparse.Namespace) -> int:
    corpus = _load_corpus(config)
    if not corpus.graphs:
        raise CrosshuntError(f"no graphs in {config.corpus_dir!r}; ingest first")
    features = featurize_corpus(corpus)
    buckets = bucketize_corpus(
        features,
        j_t=config.j_t,
        signature_length=config.signature_length,
        seed=config.seed,
        exact=args.jaccard_exact,
        banding=config.banding,
    )
    for kind in (NodeKind.SUBJECT, NodeKind.OBJECT):
        bmap = buckets.by_kind.get(kind)
        if bmap is None:
            continue
        print(
            f"# kind={kind.value} method={bmap.method} j_t={bmap.threshold} "
            f"d={bmap.signature_length} seed={bmap.seed} "
            f"buckets={len(bmap.buckets())}"
        )
        for line in bmap.to_lines():
            print(line)
    return 0


def _cmd_compare(config: Config, args: argparse.Namespace) -> int:
    corpus = _load_corpus(config)
    a = corpus.graphs.get(args.a)
    b = corpus.graphs.get(args.b)
    for gid, g in ((args.a, a), (args.b, b)):
        if g is None:
            raise CrosshuntError(f"graph {gid!r} not in {config.corpus_dir!r}")
    features = featurize_corpus(corpus)
    buckets = bucketize_corpus(
        features,
        j_t=config.j_t,
        signature_length=config.signature_length,
        seed=config.seed,
        exact=args.jaccard_exact,
        banding=config.banding,
    )
    score = similarity(a, b, buckets, config.ruleset(), config.weights())
    for line in score.to_lines():
        print(line)
    return 0


def _cmd_hunt(config: Config, args: argparse.Namespace) -> int:
    seeds = _parse_seeds(args.seeds)
    corpus = _load_corpus(config, seeds)
    report = hunt(corpus, _hunt_config(config, args, seeds), rules=config.ruleset())
    if args.json:
        text = report.to_json()
    elif args.machine:
        text = report.to_machine_text()
    else:
        text = report.to_table_text()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_eval(config: Config, args: argparse.Namespace) -> int:
    seeds = _parse_seeds(args.seeds)
    corpus = _load_corpus(config, seeds)
    truth = parse_truth(Path(args.truth).read_text(encoding="utf-8"))
    report = hunt(corpus, _hunt_config(config, args, seeds), rules=config.ruleset())
    print("# threshold precision recall f1 accuracy")
    if args.sweep:
        parts = args.sweep.split(":")
        if len(parts) != 3:
            raise ValueError("--sweep expects lo:hi:step")
        lo, hi, step = (float(p) for p in parts)
        for row in threshold_sweep(report, truth, lo, hi, step):
            print(row.to_line())
    else:
        row = evaluate(report, truth)
        print(row.to_line())
        print(f"# tp={row.tp} fp={row.fp} tn={row.tn} fn={row.fn}")
    return 0


def _cmd_bench(config: Config, args: argparse.Namespace) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    if not sizes:
        raise ValueError("--sizes needs at least one node count")
    print("# nodes featurize_s bucketize_s similarity_s")
    for row in benchmark(
        sizes,
        j_t=config.j_t,
        signature_length=config.signature_length,
        seed=config.seed,
    ):
        print(row.to_line())
    return 0


def _cmd_serve(config: Config, args: argparse.Namespace) -> int:
    server = build_server(config.corpus_dir, config)
    host, port = server.server_address[:2]
    print(f"serving {config.corpus_dir} at http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def _write_corpus(
    store: GraphStore,
    corpus: Corpus,
    truth: dict[str, bool] | None,
    out_dir: Path,
) -> None:
    for graph in corpus.iter_graphs():
        store.put(graph)
    if corpus.seed_ids:
        (out_dir / "seeds.txt").write_text(
            "".join(f"{s}\n" for s in corpus.seed_ids), encoding="utf-8"
        )
    if truth is not None:
        (out_dir / "truth.txt").write_text(
            "".join(
                f"{gid} {'attack' if flag else 'benign'}\n"
                for gid, flag in sorted(truth.items())
            ),
            encoding="utf-8",
        )


def _cmd_synth(config: Config, args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    store = GraphStore(out_dir)
    if args.scenario == "day1":
        corpus, truth = synth.day1_corpus(rng_seed=args.rng_seed or 11)
        _write_corpus(store, corpus, truth, out_dir)
    elif args.scenario == "day2":
        corpus, truth = synth.day2_corpus(rng_seed=args.rng_seed or 7)
        _write_corpus(store, corpus, truth, out_dir)
    elif args.scenario == "demo":
        corpus = synth.demo_pair()
        _write_corpus(store, corpus, None, out_dir)
    elif args.scenario == "mini":
        corpus, clusters = synth.mini_label_corpus()
        _write_corpus(store, corpus, None, out_dir)
        (out_dir / "clusters.txt").write_text(
            "".join(
                f"{gid}:{nid} {cluster}\n"
                for (gid, nid), cluster in sorted(clusters.items())
            ),
            encoding="utf-8",
        )
    else:  # bench
        corpus, truth = synth.benchmark_corpus(args.nodes, rng_seed=args.rng_seed or 3)
        _write_corpus(store, corpus, truth, out_dir)
    n_nodes = sum(len(g.nodes) for g in corpus.iter_graphs())
    print(
        f"wrote {len(corpus.graphs)} graphs ({n_nodes} nodes) to {out_dir}"
        + (f", seeds: {','.join(corpus.seed_ids)}" if corpus.seed_ids else "")
    )
    return 0


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crosshunt",
        description="Correlate attack activity across hosts from tagged provenance graphs.",
    )
    parser.add_argument(
        "-C", "--config", default=None, metavar="FILE",
        help="config file (also: CROSSHUNT_CONFIG env var)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse graph files into the corpus store")
    p.add_argument("files", nargs="+", help="graph interchange files")
    _add_corpus_flag(p)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("bucketize", help="print node bucket assignments")
    _add_corpus_flag(p)
    _add_bucket_flags(p)
    p.set_defaults(func=_cmd_bucketize)

    p = sub.add_parser("compare", help="score one graph pair with explanations")
    p.add_argument("a", help="first graph id")
    p.add_argument("b", help="second graph id")
    _add_corpus_flag(p)
    _add_bucket_flags(p)
    _add_weight_flags(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("hunt", help="score seeds against the corpus and alert")
    p.add_argument("--seeds", required=True, help="comma-separated seed graph ids")
    p.add_argument("--threshold", type=float, default=None, help="alert threshold")
    p.add_argument("--workers", type=int, default=None, help="scoring thread count")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="emit the JSON report")
    fmt.add_argument("--machine", action="store_true", help="emit the line-oriented report")
    p.add_argument("--out", default=None, help="write the report to a file")
    _add_corpus_flag(p)
    _add_bucket_flags(p)
    _add_weight_flags(p)
    p.set_defaults(func=_cmd_hunt)

    p = sub.add_parser("eval", help="score a hunt against per-graph ground truth")
    p.add_argument("--seeds", required=True, help="comma-separated seed graph ids")
    p.add_argument("--truth", required=True, help="ground-truth file (<id> attack|benign)")
    p.add_argument("--threshold", type=float, default=None, help="decision threshold")
    p.add_argument("--sweep", default=None, metavar="LO:HI:STEP", help="threshold sweep")
    p.add_argument("--workers", type=int, default=None, help="scoring thread count")
    _add_corpus_flag(p)
    _add_bucket_flags(p)
    _add_weight_flags(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("bench", help="time each pipeline stage on synthetic corpora")
    p.add_argument("--sizes", default="1000,2000,5000", help="comma-separated node counts")
    _add_bucket_flags(p)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("serve", help="expose the corpus over a local JSON API")
    p.add_argument("--host", default=None, help="bind address (default 127.0.0.1)")
    p.add_argument("--port", type=int, default=None, help="bind port (0 = ephemeral)")
    _add_corpus_flag(p)
    _add_bucket_flags(p)
    _add_weight_flags(p)
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("synth", help="materialize a synthetic corpus on disk")
    p.add_argument(
        "scenario", choices=("day1", "day2", "demo", "mini", "bench"),
        help="which generator to run",
    )
    p.add_argument("--out", required=True, help="output store directory")
    p.add_argument("--rng-seed", type=int, default=None, help="label RNG seed")
    p.add_argument("--nodes", type=int, default=5000, help="node count for bench")
    p.set_defaults(func=_cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _resolved(load_config(args.config), args)
        return args.func(config, args)
    except (CrosshuntError, ValueError, OSError) as exc:
        print(f"crosshunt: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
