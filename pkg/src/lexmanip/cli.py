"""Command line front end.

Every subcommand reads its inputs, writes its artifacts and, next to the
main output, a ``<out>.config.json`` holding the fully resolved settings.
Settings may come from ``--config FILE`` (JSON, keys named like the flags);
flags given on the command line win.

Exit status: 0 on success, 1 on a data error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .bigraph import (FilterSpec, autotune_rel_threshold, build_graph, filter_graph, merge_graphs,
                      read_graph, write_graph)
from .corpus_io import (SimplifyConfig, load_aligned_pairs, read_alignments, read_conllu,
                        read_embeddings, read_gold_alignments, read_lemmatized, read_parallel_corpus,
                        simplify_corpus, embedding_matrix, write_lines, write_parallel_corpus)
from .entropy import BandSpec, entropy_report_lines, partition_by_entropy
from .estimators import select_band
from .evaluation import alignment_prf, embedding_metrics
from .exceptions import LexmanipError
from .lexswap import SwapReport, swap_corpus
from .reorder import estimate_ordering_stats, read_ordering_stats, reorder_sentence, write_ordering_stats
from .script_sub import (LATIN_LOWERCASE, build_charmap, default_symbols, invert_charmap, read_charmap,
                         substitute_script, write_charmap)

logger = logging.getLogger("lexmanip")

CONFIG_SUFFIX = ".config.json"
_INTERNAL = {"command", "func", "config", "_required", "_inputs"}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers

def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=1) + "\n"


def _write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _emit_json(obj, out=None) -> None:
    text = _dump_json(obj)
    if out:
        _write_text(out, text)
    sys.stdout.write(text)


def _resolved_config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in _INTERNAL}
    return {"command": args.command, "version": __version__, "settings": cfg}


def _write_config(args, out) -> None:
    if out:
        _write_text(os.fspath(out) + CONFIG_SUFFIX, _dump_json(_resolved_config(args)))


def _pair_arg(value, flag):
    if value is None:
        return None
    if isinstance(value, (list, tuple)):
        parts = list(value)
    else:
        parts = value.split(",")
    if len(parts) != 2 or not all(parts):
        raise UsageError(f"{flag} expects two comma-separated paths, got {value!r}")
    return parts


def _boundaries(value) -> tuple[float, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(float(x) for x in value)
    try:
        return tuple(float(x) for x in str(value).split(","))
    except ValueError:
        raise UsageError(f"bad --boundaries {value!r}") from None


def _log_base(value) -> float:
    if value in ("e", None):
        return math.e
    base = float(value)
    if base <= 0 or base == 1:
        raise UsageError("--log-base must be positive and different from 1")
    return base


def _chunks(items, n):
    size = max(1, -(-len(items) // n))
    return [items[i:i + size] for i in range(0, len(items), size)]


def _pmap(func, jobs, threads):
    if threads <= 1 or len(jobs) <= 1:
        return [func(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, jobs))


def _load_pairs(args):
    alignments = read_alignments(args.align)
    corpus = None
    if args.corpus:
        src, tgt = _pair_arg(args.corpus, "--corpus")
        corpus = read_parallel_corpus(src, tgt)
    if args.lemmas:
        src, tgt = _pair_arg(args.lemmas, "--lemmas")
        return load_aligned_pairs(alignments, corpus=corpus,
                                  source_sentences=read_lemmatized(src),
                                  target_sentences=read_lemmatized(tgt))
    if corpus is None:
        raise UsageError("need --corpus and/or --lemmas")
    return load_aligned_pairs(alignments, corpus=corpus)


# ---------------------------------------------------------------------------
# subcommands

def cmd_simplify_corpus(args):
    pairs = read_parallel_corpus(args.src, args.tgt)

    def config(script, cjk):
        kw = dict(min_words=args.min_words, max_words=args.max_words, max_punct=args.max_punct,
                  min_symbols=args.min_symbols, max_symbols=args.max_symbols,
                  lowercase=not args.no_lowercase)
        if script == "any":
            return SimplifyConfig(cjk_mode=cjk, **kw)
        return SimplifyConfig.for_script(script, cjk_mode=cjk or script == "han", **kw)

    kept = simplify_corpus(pairs, config(args.src_script, args.src_cjk), config(args.tgt_script, args.tgt_cjk))
    write_parallel_corpus(kept, args.out_src, args.out_tgt)
    _write_config(args, args.out_src)
    _emit_json({"input_pairs": len(pairs), "kept_pairs": len(kept)})


def _graph_shard(pairs):
    return build_graph(pairs)


def cmd_build_graph(args):
    pairs = _load_pairs(args)
    shards = _pmap(_graph_shard, _chunks(pairs, args.threads), args.threads) if pairs else []
    graph = merge_graphs(*shards) if shards else build_graph([])
    graph.source_lang, graph.target_lang = args.src_lang, args.tgt_lang
    write_graph(graph, args.out)
    _write_config(args, args.out)
    _emit_json({"edges": len(graph), "total_weight": graph.total_weight,
                "source_vertices": len(graph.source_vertices), "target_vertices": len(graph.target_vertices)})


def cmd_filter_graph(args):
    graph = read_graph(args.graph)
    filtered = filter_graph(graph, FilterSpec(args.abs_threshold, args.rel_threshold))
    write_graph(filtered, args.out)
    _write_config(args, args.out)
    total = graph.total_weight
    _emit_json({"edges_before": len(graph), "edges_after": len(filtered),
                "filtered_instance_fraction": 1 - filtered.total_weight / total if total else 0.0})


def cmd_autotune(args):
    graph = read_graph(args.graph)
    res = autotune_rel_threshold(graph, args.abs_threshold, args.target, args.tolerance)
    _write_config(args, args.out)
    _emit_json({"rel_threshold": res.rel_threshold, "achieved_fraction": res.achieved_fraction,
                "within_tolerance": res.within_tolerance}, args.out)


def cmd_entropy(args):
    graph = read_graph(args.graph)
    partition = partition_by_entropy(graph, args.side, BandSpec(_boundaries(args.boundaries)))
    write_lines(args.out, entropy_report_lines(graph, partition, _log_base(args.log_base)))
    _write_config(args, args.out)


def cmd_partition(args):
    graph = read_graph(args.graph)
    spec = BandSpec(_boundaries(args.boundaries), zero_only=args.zero_only)
    p = partition_by_entropy(graph, args.side, spec)
    labels = p.labels
    _write_config(args, args.out)
    _emit_json({"side": p.side, "labels": labels, "masses": list(p.masses),
                "assignment": {v: labels[p.assignment[v]] for v in p.order}}, args.out)


def cmd_subgraph(args):
    graph = read_graph(args.graph)
    sub, _ = select_band(graph, args.band, args.side, _boundaries(args.boundaries))
    write_graph(sub, args.out)
    _write_config(args, args.out)
    _emit_json({"edges": len(sub), "total_weight": sub.total_weight})


def cmd_script_sub(args):
    if args.charmap:
        cmap = read_charmap(args.charmap)
    else:
        cmap = build_charmap(args.alphabet, default_symbols(args.symbols))
    if args.write_charmap:
        write_charmap(cmap, args.write_charmap)
    if args.invert:
        cmap = invert_charmap(cmap)
    with open(args.input, encoding="utf-8") as f:
        lines = f.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    write_lines(args.out, (substitute_script(line, cmap) for line in lines))
    _write_config(args, args.out)


def cmd_estimate_order_stats(args):
    trees = read_conllu(args.treebank)
    if not trees:
        raise LexmanipError(f"{args.treebank}: no valid trees")
    stats = estimate_ordering_stats(trees, coarse=args.coarse)
    write_ordering_stats(stats, args.out)
    _write_config(args, args.out)


def _reorder_chunk(job):
    trees, stats, coarse = job
    return [reorder_sentence(t, stats, coarse) for t in trees]


def cmd_reorder(args):
    trees = read_conllu(args.input)
    stats = read_ordering_stats(args.stats)
    jobs = [(chunk, stats, args.coarse) for chunk in _chunks(trees, args.threads)]
    lines = [line for part in _pmap(_reorder_chunk, jobs, args.threads) for line in part]
    write_lines(args.out, lines)
    _write_config(args, args.out)


def _swap_chunk(job):
    pairs, graph, skip_errors, first_line = job
    return swap_corpus(pairs, graph, skip_errors=skip_errors, first_line=first_line)


def cmd_swap(args):
    graph = read_graph(args.graph)
    graph, _ = select_band(graph, args.band, args.side, _boundaries(args.boundaries))
    pairs = _load_pairs(args)
    jobs, start = [], 1
    for chunk in _chunks(pairs, args.threads):
        jobs.append((chunk, graph, args.skip_errors, start))
        start += len(chunk)
    lines, report = [], SwapReport()
    for part_lines, part_report in _pmap(_swap_chunk, jobs, args.threads):
        lines.extend(part_lines)
        report = report.merge(part_report)
    write_lines(args.out, lines)
    _write_config(args, args.out)
    if args.report:
        _write_text(args.report, _dump_json(report.to_dict()))
    _emit_json(report.to_dict())


def cmd_eval_align(args):
    pred = read_gold_alignments(args.pred, include_possible=True)
    gold = read_gold_alignments(args.gold, include_possible=args.possible == "include")
    _write_config(args, args.out)
    _emit_json(alignment_prf(pred, gold).to_dict(), args.out)


def cmd_eval_embed(args):
    student = embedding_matrix(read_embeddings(args.student))
    teacher = embedding_matrix(read_embeddings(args.teacher))
    flags = None
    if args.pairs:
        flags = []
        with open(args.pairs, encoding="utf-8") as f:
            for lineno, line in enumerate(f, 1):
                tok = line.strip().lower()
                if tok not in ("0", "1", "true", "false"):
                    raise LexmanipError(f"{args.pairs}:line {lineno}: expected 0/1, got {tok!r}")
                flags.append(tok in ("1", "true"))
    _write_config(args, args.out)
    _emit_json(embedding_metrics(student, teacher, flags), args.out)


# ---------------------------------------------------------------------------
# parser

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--config", metavar="PATH", help="JSON file with default settings")
    g.add_argument("--threads", type=int, default=1, metavar="N", help="worker processes")
    g.add_argument("--log-level", default="WARNING",
                   choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return p


# command -> (handler, required settings, input-file settings)
COMMANDS = {}


def _add(sub, common, name, func, help, required=(), inputs=()):
    p = sub.add_parser(name, help=help, description=help, parents=[common])
    p.set_defaults(func=func, _required=tuple(required), _inputs=tuple(inputs))
    COMMANDS[name] = p
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lexmanip", description="Corpus manipulation and lexical alignment toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    common = _common()

    p = _add(sub, common, "simplify-corpus", cmd_simplify_corpus,
             "Filter and lowercase a parallel corpus.",
             ("src", "tgt", "out_src", "out_tgt"), ("src", "tgt"))
    p.add_argument("--src")
    p.add_argument("--tgt")
    p.add_argument("--out-src")
    p.add_argument("--out-tgt")
    for side in ("src", "tgt"):
        p.add_argument(f"--{side}-script", default="latin", choices=["latin", "greek", "han", "any"],
                       help="allowed character set (default: latin)")
        p.add_argument(f"--{side}-cjk", action="store_true", help="count symbols instead of words")
    p.add_argument("--min-words", type=int, default=4)
    p.add_argument("--max-words", type=int, default=16)
    p.add_argument("--max-punct", type=int, default=1)
    p.add_argument("--min-symbols", type=int, default=5)
    p.add_argument("--max-symbols", type=int, default=25)
    p.add_argument("--no-lowercase", action="store_true")

    p = _add(sub, common, "build-graph", cmd_build_graph,
             "Count lemma co-alignments into a translation graph.", ("align", "out"), ("align",))
    p.add_argument("--corpus", metavar="SRC,TGT")
    p.add_argument("--lemmas", metavar="SRC,TGT", help="CoNLL-U or form<TAB>lemma files")
    p.add_argument("--align", metavar="PATH", help="Pharaoh alignments")
    p.add_argument("--out", metavar="G.tsv")
    p.add_argument("--src-lang", default="")
    p.add_argument("--tgt-lang", default="")

    p = _add(sub, common, "filter-graph", cmd_filter_graph,
             "Drop light edges from a graph.", ("graph", "out"), ("graph",))
    p.add_argument("--graph")
    p.add_argument("--out")
    p.add_argument("--abs-threshold", type=int, default=5)
    p.add_argument("--rel-threshold", type=float, default=0.0)

    p = _add(sub, common, "autotune", cmd_autotune,
             "Find the relative threshold filtering a target share of instances.", ("graph",), ("graph",))
    p.add_argument("--graph")
    p.add_argument("--out")
    p.add_argument("--abs-threshold", type=int, default=5)
    p.add_argument("--target", type=float, default=0.12)
    p.add_argument("--tolerance", type=float, default=0.005)

    p = _add(sub, common, "entropy", cmd_entropy,
             "Write a per-vertex translation entropy report.", ("graph", "out"), ("graph",))
    p.add_argument("--graph")
    p.add_argument("--out")
    p.add_argument("--side", default="source", choices=["source", "target"])
    p.add_argument("--log-base", default="e", help="'e' (default) or a number")
    p.add_argument("--boundaries", default="33,67")

    p = _add(sub, common, "partition", cmd_partition,
             "Assign vertices to instance-weighted entropy bands.", ("graph",), ("graph",))
    p.add_argument("--graph")
    p.add_argument("--out")
    p.add_argument("--side", default="source", choices=["source", "target"])
    p.add_argument("--boundaries", default="33,67")
    p.add_argument("--zero-only", action="store_true")

    p = _add(sub, common, "subgraph", cmd_subgraph,
             "Keep one entropy band of a graph.", ("graph", "out"), ("graph",))
    p.add_argument("--graph")
    p.add_argument("--out")
    p.add_argument("--side", default="source", choices=["source", "target"])
    p.add_argument("--band", default="all", help="all, zero, or a label such as 67-100")
    p.add_argument("--boundaries", default="33,67")

    p = _add(sub, common, "script-sub", cmd_script_sub,
             "Substitute characters with another script.", ("input", "out"), ("input", "charmap"))
    p.add_argument("--input")
    p.add_argument("--out")
    p.add_argument("--charmap", metavar="PATH", help="src<TAB>tgt character map")
    p.add_argument("--symbols", default="greek", help="bundled symbol list (greek, chinese)")
    p.add_argument("--alphabet", default=LATIN_LOWERCASE)
    p.add_argument("--invert", action="store_true")
    p.add_argument("--write-charmap", metavar="PATH")

    p = _add(sub, common, "estimate-order-stats", cmd_estimate_order_stats,
             "Collect pairwise ordering statistics from a CoNLL-U treebank.",
             ("treebank", "out"), ("treebank",))
    p.add_argument("--treebank")
    p.add_argument("--out")
    p.add_argument("--coarse", action="store_true", help="strip relation subtypes")

    p = _add(sub, common, "reorder", cmd_reorder,
             "Reorder CoNLL-U sentences to follow ordering statistics.",
             ("input", "stats", "out"), ("input", "stats"))
    p.add_argument("--input")
    p.add_argument("--stats")
    p.add_argument("--out")
    p.add_argument("--coarse", action="store_true")

    p = _add(sub, common, "swap", cmd_swap, "Swap source words using a translation graph.",
             ("graph", "align", "out"), ("graph", "align"))
    p.add_argument("--graph")
    p.add_argument("--corpus", metavar="SRC,TGT")
    p.add_argument("--align")
    p.add_argument("--lemmas", metavar="SRC,TGT")
    p.add_argument("--band", default="all")
    p.add_argument("--side", default="source", choices=["source", "target"])
    p.add_argument("--boundaries", default="33,67")
    p.add_argument("--out")
    p.add_argument("--report", metavar="PATH", help="write the swap report JSON here too")
    p.add_argument("--skip-errors", action="store_true")

    p = _add(sub, common, "eval-align", cmd_eval_align,
             "Precision, recall and F1 of alignments against a gold standard.",
             ("pred", "gold"), ("pred", "gold"))
    p.add_argument("--pred")
    p.add_argument("--gold")
    p.add_argument("--possible", default="exclude", choices=["include", "exclude"])
    p.add_argument("--out")

    p = _add(sub, common, "eval-embed", cmd_eval_embed,
             "Average cosine similarity and cosine embedding loss.",
             ("student", "teacher"), ("student", "teacher", "pairs"))
    p.add_argument("--student")
    p.add_argument("--teacher")
    p.add_argument("--pairs", help="one 0/1 flag per line; 1 marks a manipulation pair")
    p.add_argument("--out")
    return parser


def _apply_config(parser, argv, args):
    if not args.config:
        return args
    try:
        with open(args.config, encoding="utf-8") as f:
            cfg = json.load(f)
    except FileNotFoundError:
        raise UsageError(f"config file not found: {args.config}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.config}: invalid JSON ({exc})") from None
    if not isinstance(cfg, dict):
        raise UsageError(f"{args.config}: expected a JSON object")
    sub = COMMANDS[args.command]
    known = {a.dest for a in sub._actions} - _INTERNAL - {"help"}
    settings = {}
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if dest not in known:
            raise UsageError(f"{args.config}: unknown setting {key!r} for {args.command}")
        settings[dest] = value
    sub.set_defaults(**settings)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args = _apply_config(parser, argv, args)
        logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")
        missing = [d for d in args._required if getattr(args, d) in (None, "")]
        if missing:
            raise UsageError("missing required option(s): "
                             + ", ".join("--" + m.replace("_", "-") for m in missing))
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        for dest in args._inputs:
            value = getattr(args, dest)
            if value:
                for path in str(value).split(","):
                    if not os.path.exists(path):
                        raise UsageError(f"--{dest.replace('_', '-')}: no such file: {path}")
        for dest in ("corpus", "lemmas"):
            value = getattr(args, dest, None)
            if value:
                for path in _pair_arg(value, "--" + dest):
                    if not os.path.exists(path):
                        raise UsageError(f"--{dest}: no such file: {path}")
        args.func(args)
    except UsageError as exc:
        COMMANDS[args.command].print_usage(sys.stderr)
        sys.stderr.write(_dump_json({"error": "usage", "message": str(exc)}))
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(_dump_json({"error": "usage", "message": str(exc)}))
        return 2
    except (LexmanipError, ValueError, KeyError) as exc:
        sys.stderr.write(_dump_json({"error": type(exc).__name__, "message": str(exc)}))
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
