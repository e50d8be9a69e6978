"""Command-line entry point: a thin client over the engine.

Subcommands:
    build   run the full pipeline and write an index file
    stats   graph summary statistics for an index
    query   one-shot search against an index
    serve   HTTP API (and optionally the static UI) over an index
    eval    precision/recall/F1 of a sidecar predictions file against gold

Exit codes: 0 success, 1 configuration error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import relex
from .corpus import binary_label, parse_chemprot, split_sentences
from .engine import PipelineConfig, run_pipeline, SearchEngine
from .errors import ConfigurationError, DataError
from .graph import GraphStats, SimRankParams
from .schemas import SearchResponse

logger = logging.getLogger(__name__)

STATS_LABELS = [
    ("# Nodes (Entities)", "n_nodes"),
    ("# Chemical Nodes", "n_chemical"),
    ("# Protein Nodes", "n_protein"),
    ("# Edges (Relations)", "n_edges"),
    ("# Connected Components", "n_components"),
    ("# Nodes in the Largest Component", "largest_component_nodes"),
    ("# Edges in the Largest Component", "largest_component_edges"),
    ("# Diameter of the Largest Component", "largest_component_diameter"),
]


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit(2); flags are config errors
        raise ConfigurationError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="relsearch", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="build and persist an index")
    build.add_argument("--corpus", type=Path, help="annotated corpus (JSON Lines)")
    build.add_argument("--chemprot-dir", type=Path, help="ChemProt-style directory")
    build.add_argument("--classifier", default="oracle",
                       choices=list(relex.CLASSIFIER_HANDLES))
    build.add_argument("--gold", type=Path,
                       help="gold-label sidecar TSV for the oracle classifier")
    build.add_argument("--predictions", type=Path,
                       help="score sidecar TSV for the external classifier")
    build.add_argument("--index", type=Path, required=True, help="output index path")
    build.add_argument("--format", choices=["text", "machine"], default="text")

    stats = sub.add_parser("stats", help="graph summary statistics")
    stats.add_argument("--index", type=Path, required=True)
    stats.add_argument("--format", choices=["text", "machine"], default="text")

    query = sub.add_parser("query", help="one-shot search")
    query.add_argument("text", help="free-text entity query")
    query.add_argument("--index", type=Path, required=True)
    query.add_argument("--min-similarity", type=float, default=None)
    query.add_argument("--k", type=int, default=5, help="similar entities to list")
    query.add_argument("--offset", type=int, default=0, help="evidence page offset")
    query.add_argument("--simrank-c", type=float, default=0.8)
    query.add_argument("--format", choices=["text", "machine"], default="text")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--index", type=Path, required=True)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--min-similarity", type=float, default=None)
    serve.add_argument("--simrank-c", type=float, default=0.8)
    serve.add_argument("--precompute-simrank", action="store_true",
                       help="compute all similarity tables at startup")
    serve.add_argument("--static-dir", type=Path, default=None,
                       help="serve a built single-page client under /")

    ev = sub.add_parser("eval", help="score sidecar predictions against gold")
    ev.add_argument("--chemprot-dir", type=Path, required=True)
    ev.add_argument("--predictions", type=Path, required=True)
    ev.add_argument("--format", choices=["text", "machine"], default="text")

    return parser


def _engine_kwargs(args) -> dict:
    kwargs: dict = {}
    if getattr(args, "min_similarity", None) is not None:
        if not 0.0 <= args.min_similarity <= 1.0:
            raise ConfigurationError("--min-similarity must be in [0,1]")
        kwargs["min_similarity"] = args.min_similarity
    if getattr(args, "simrank_c", None) is not None:
        try:
            kwargs["simrank_params"] = SimRankParams(c=args.simrank_c)
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
    return kwargs


def _print_report(report: dict[str, int], fmt: str) -> None:
    if fmt == "machine":
        for key, value in report.items():
            print(f"{key}={value}")
    else:
        width = max(len(k) for k in report)
        for key, value in report.items():
            print(f"{key.replace('_', ' '):<{width}}  {value}")


def _cmd_build(args) -> None:
    config = PipelineConfig(
        corpus=args.corpus, chemprot_dir=args.chemprot_dir,
        classifier=args.classifier, gold=args.gold,
        predictions=args.predictions, index_out=args.index,
    )
    _index, report = run_pipeline(config)
    _print_report(report.as_dict(), args.format)


def _cmd_stats(args) -> None:
    engine = SearchEngine.from_file(args.index)
    stats: GraphStats = engine.stats()
    values = [
        stats.n_nodes, stats.n_chemical, stats.n_protein, stats.n_edges,
        stats.n_components, stats.largest_component_nodes,
        stats.largest_component_edges, stats.largest_component_diameter,
    ]
    if args.format == "machine":
        for (label, _), value in zip(STATS_LABELS, values):
            print(f"{label}\t{value}")
    else:
        width = max(len(label) for label, _ in STATS_LABELS)
        for (label, _), value in zip(STATS_LABELS, values):
            print(f"{label:<{width}}  {value}")


def _render_text(response: SearchResponse) -> str:
    lines = [f"query: {response.query}"]
    if response.matched is None:
        lines.append("no entity matched the query")
        return "\n".join(lines)
    m = response.matched
    lines.append(f"matched: {m.canonical} (class {m.class_id}, "
                 f"similarity {m.similarity:.3f})")
    if m.external_ids:
        lines.append(f"  ids: {', '.join(m.external_ids)}")
    if response.similar:
        shown = ", ".join(f"{s.canonical} ({s.score:.3f})" for s in response.similar)
        lines.append(f"similar: {shown}")
    for rel in response.related:
        lines.append(f"related: {rel.canonical} "
                     f"({rel.co_mention_count} co-mentioned sentence(s))")
        for ev in rel.evidence:
            lines.append(f"  [{ev.doc_id}] {ev.sentence_text}")
            if ev.source_url:
                lines.append(f"      {ev.source_url}")
    return "\n".join(lines)


def _cmd_query(args) -> None:
    if args.offset < 0:
        raise ConfigurationError("--offset must be >= 0")
    if args.k < 1:
        raise ConfigurationError("--k must be >= 1")
    engine = SearchEngine.from_file(args.index, **_engine_kwargs(args))
    response = engine.search(args.text, k=args.k, offset=args.offset)
    if args.format == "machine":
        print(response.model_dump_json(indent=2))
    else:
        print(_render_text(response))


def _cmd_serve(args) -> None:
    import uvicorn

    from .app import create_app

    engine = SearchEngine.from_file(args.index, **_engine_kwargs(args))
    if args.precompute_simrank:
        engine.warm_simrank()
    static_dir = args.static_dir
    if static_dir is not None and not Path(static_dir).is_dir():
        raise ConfigurationError(f"--static-dir is not a directory: {static_dir}")
    app = create_app(engine, static_dir=static_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")


def _cmd_eval(args) -> None:
    documents, mentions, relations, _summary = parse_chemprot(args.chemprot_dir)
    sentences = [s for d in documents for s in split_sentences(d.body, d.doc_id)]
    by_sentence: dict[tuple[str, int], list] = {}
    for mention in mentions:
        by_sentence.setdefault((mention.doc_id, mention.sent_index), []).append(mention)
    # duplicate annotations (distinct mention ids over identical spans) are
    # counted once on both sides: textually identical instances collapse, and
    # a pair is gold-positive when any of its annotations is
    by_id = {m.mention_id: m for m in mentions}
    instances: dict[tuple[str, int, str], relex.TaggedInstance] = {}
    for sentence in sentences:
        group = by_sentence.get((sentence.doc_id, sentence.sent_index))
        for inst in relex.expand_pairs(sentence, group) if group else ():
            instances.setdefault((inst.doc_id, inst.sent_index, inst.tagged_text), inst)
    gold_positive = set()
    for rel in relations:
        if binary_label(rel.cpr):
            chem, prot = by_id[rel.chem_mention_id], by_id[rel.prot_mention_id]
            gold_positive.add((rel.doc_id, rel.sent_index,
                               chem.start, chem.end, prot.start, prot.end))
    kept = list(instances.values())
    gold = []
    for inst in kept:
        chem, prot = by_id[inst.chem_mention_id], by_id[inst.prot_mention_id]
        gold.append((inst.doc_id, inst.sent_index,
                     chem.start, chem.end, prot.start, prot.end) in gold_positive)
    classifier = relex.ExternalClassifier.from_tsv(args.predictions)
    predictions = [relex.classify(inst, classifier) for inst in kept]
    metrics = relex.evaluate(predictions, gold)
    report = {
        "instances": len(kept), "tp": metrics.tp, "fp": metrics.fp,
        "fn": metrics.fn, "tn": metrics.tn,
        "precision": round(metrics.precision, 6),
        "recall": round(metrics.recall, 6),
        "f1": round(metrics.f1, 6),
    }
    _print_report(report, args.format)


_COMMANDS = {
    "build": _cmd_build,
    "stats": _cmd_stats,
    "query": _cmd_query,
    "serve": _cmd_serve,
    "eval": _cmd_eval,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _COMMANDS[args.command](args)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (DataError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
