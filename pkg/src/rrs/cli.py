"""`rrs` command line: corpus, ast, diff, embed, score, sweep, validate,
report, and full pipeline runs.

Exit codes: 0 success, 2 configuration/usage error, 3 stage failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, RrsError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STAGE = 3


def _cmd_corpus_validate(args) -> int:
    from .corpus import load_corpus

    pairs = load_corpus(args.path)
    print(f"OK: {len(pairs)} pairs, ids unique, schema valid")
    return EXIT_OK


def _cmd_corpus_stats(args) -> int:
    from .corpus import load_corpus
    from .pipeline import parse_pair_trees

    pairs = load_corpus(args.path)
    trees = parse_pair_trees(pairs)
    parsed = sum(1 for t in trees.values() if t is not None)
    sizes = []
    for entry in trees.values():
        if entry is not None:
            sizes.extend([len(entry[0]), len(entry[1])])
    stats = {
        "pairs": len(pairs),
        "parsed": parsed,
        "parse_failed": len(pairs) - parsed,
        "min_nodes": min(sizes) if sizes else 0,
        "max_nodes": max(sizes) if sizes else 0,
        "mean_nodes": sum(sizes) / len(sizes) if sizes else 0.0,
    }
    print(json.dumps(stats, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_ast_dump(args) -> int:
    from .astkit import parse_function, to_sexpr

    source = Path(args.file).read_text(encoding="utf-8")
    tree = parse_function(source, args.language)
    print(to_sexpr(tree))
    print(f"; nodes={len(tree)} errors={tree.has_errors}", file=sys.stderr)
    return EXIT_OK


def _cmd_diff(args) -> int:
    from .astkit import parse_function
    from .corpus import load_corpus
    from .treediff import isolate_change_regions, structural_scores

    pairs = {p.pair_id: p for p in load_corpus(args.corpus)}
    pair = pairs.get(args.pair)
    if pair is None:
        raise ConfigError(f"pair {args.pair!r} not in corpus")
    t1 = parse_function(pair.vuln_source, pair.language_hint)
    t2 = parse_function(pair.benign_source, pair.language_hint)
    scores = structural_scores(t1, t2)
    payload = {
        "pair_id": pair.pair_id,
        "ted_ops": scores.ted_ops,
        "nted_similarity": scores.nted_similarity,
        "lts_similarity": scores.lts_similarity,
        "jaccard": scores.jaccard,
        "align_sim": scores.align_sim,
    }
    if args.metric != "all":
        key = {"nted": "nted_similarity", "lts": "lts_similarity",
               "jaccard": "jaccard", "align": "align_sim"}[args.metric]
        payload = {"pair_id": pair.pair_id, key: payload[key]}
    if args.emit_regions:
        payload["regions"] = [
            {
                "vuln_root": r.vuln_subtree_root,
                "benign_root": r.benign_subtree_root,
                "vuln_size": r.vuln_size,
                "benign_size": r.benign_size,
                "vuln_span": list(t1.nodes[r.vuln_subtree_root].span)
                if r.vuln_subtree_root >= 0 else None,
                "benign_span": list(t2.nodes[r.benign_subtree_root].span)
                if r.benign_subtree_root >= 0 else None,
            }
            for r in isolate_change_regions(t1, t2)
        ]
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_embed_precompute(args) -> int:
    from .corpus import load_corpus
    from .embedkit import HttpServiceProvider, MockProvider, precompute_store

    pairs = load_corpus(args.corpus)
    model_ids = args.models.split(",") if args.models else None
    if args.provider == "mock":
        provider = MockProvider(model_ids=model_ids or ("model-a", "model-b", "model-c"),
                                dim=args.dim, seed=args.seed)
    else:
        import os

        url = args.url or os.environ.get("RRS_EMBED_URL")
        if not url:
            raise ConfigError("--url or RRS_EMBED_URL required for the http provider")
        if not model_ids:
            raise ConfigError("--models required for the http provider")
        provider = HttpServiceProvider(url, model_ids)
    rows = precompute_store(provider, pairs, model_ids or provider.model_ids, args.out)
    print(f"wrote {rows} vectors to {args.out}")
    return EXIT_OK


def _parse_weights(text: str):
    from .scoring import WeightConfig

    parts = [float(x) for x in text.split(",")]
    if len(parts) != 3:
        raise ConfigError("--weights expects alpha,beta,gamma")
    return WeightConfig(alpha=parts[0], beta=parts[1], gamma=parts[2])


def _score_common(args):
    from .corpus import CorpusFilterConfig, filter_pairs, load_corpus
    from .embedkit import FileStoreProvider
    from .pipeline import parse_pair_trees, score_pairs

    pairs = load_corpus(args.corpus)
    trees = parse_pair_trees(pairs)
    kept, dropped = filter_pairs(pairs, trees, CorpusFilterConfig(
        max_ast_nodes=args.max_ast_nodes))
    if not kept:
        raise RrsError("no pairs survived filtering")
    provider = FileStoreProvider(args.embeddings)
    weights = _parse_weights(args.weights)
    scores, ctx = score_pairs(kept, trees, provider, provider.model_ids, weights)
    return scores, ctx, provider.model_ids, dropped


def _cmd_score(args) -> int:
    from .pipeline import write_scores_csv

    scores, ctx, model_ids, dropped = _score_common(args)
    write_scores_csv(scores, model_ids, args.out)
    print(f"scored {len(scores)} pairs -> {args.out} "
          f"(dropped {len(dropped)}, sigma_max={ctx.sigma_max:.6g})")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    from .scoring import default_weight_grid, sensitivity_sweep

    scores, _ctx, _model_ids, _dropped = _score_common(args)
    grid = default_weight_grid() if args.grid == "default" else None
    if grid is None:
        configs = []
        for chunk in args.grid.split(";"):
            configs.append(_parse_weights(chunk))
        grid = configs
    result = sensitivity_sweep(scores, grid)
    payload = {
        "configs": [{"alpha": c.alpha, "beta": c.beta, "gamma": c.gamma}
                    for c in result.configs],
        "pair_ids": result.pair_ids,
        "rrs_table": [[float(v) for v in row] for row in result.rrs_table],
        "rank_correlation": [[float(v) for v in row]
                             for row in result.rank_correlation],
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        print(f"sweep written to {args.out}")
    else:
        print(text)
    return EXIT_OK


def _cmd_validate(args) -> int:
    from .corpus import load_corpus
    from .pipeline import parse_pair_trees, read_scores_csv
    from .staticval import Taxonomy, run_validation, summarize

    scores = read_scores_csv(args.scores)
    selected_ids = {s.pair_id for s in scores if s.quadrant == args.top_quadrant}
    if not selected_ids:
        raise RrsError(f"no pairs in quadrant {args.top_quadrant}")
    pairs = [p for p in load_corpus(args.corpus) if p.pair_id in selected_ids]
    trees = parse_pair_trees(pairs)
    taxonomy = Taxonomy.from_mapping_file(args.mapping) if args.mapping else None
    tools = tuple(args.tools.split(","))
    results = run_validation(pairs, trees, tools=tools, timeout=args.timeout,
                             taxonomy=taxonomy)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "findings.jsonl", "w", encoding="utf-8") as handle:
        for pair_id in sorted(results):
            for tool, result in sorted(results[pair_id].items()):
                for f in result.findings:
                    handle.write(json.dumps({
                        "pair_id": pair_id, "tool": f.tool, "raw_id": f.raw_id,
                        "category": f.category, "severity": f.severity,
                        "line": f.line, "message": f.message,
                    }, sort_keys=True) + "\n")
    summary = summarize(results, severity_filter=args.severity)
    with open(out_dir / "summary.json", "w", encoding="utf-8") as handle:
        json.dump(summary.__dict__, handle, indent=2, sort_keys=True)
        handle.write("\n")
    print(f"validated {summary.n_analyzed} pairs: "
          f"any={summary.pct_flagged_any:.1f}% two={summary.pct_flagged_two:.1f}% "
          f"all={summary.pct_flagged_all:.1f}% clean={summary.pct_clean:.1f}%")
    return EXIT_OK


def _cmd_report(args) -> int:
    from .pipeline import read_scores_csv
    from .report import (
        PLOT_SERIES,
        emit_plot_data,
        render_markdown_summary,
        write_plot_csv,
    )
    from .scoring import batch_context

    scores = read_scores_csv(args.scores)
    ctx = batch_context(scores)
    Path(args.out).write_text(render_markdown_summary(scores, ctx, args.top_k),
                              encoding="utf-8")
    if args.plots:
        plots_dir = Path(args.plots)
        plots_dir.mkdir(parents=True, exist_ok=True)
        for which in PLOT_SERIES:
            series = emit_plot_data(scores, which)
            write_plot_csv(series, plots_dir / f"{which}.csv")
    print(f"report written to {args.out}")
    return EXIT_OK


def _cmd_run(args) -> int:
    from .pipeline import load_run_config, run_pipeline

    config = load_run_config(args.config)
    artifacts = run_pipeline(config, output_dir=args.output_dir)
    print(json.dumps(artifacts["counts"], sort_keys=True))
    print(f"scores: {artifacts['scores_csv']}")
    print(f"manifest: {artifacts['manifest']}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rrs",
                                     description="Residual risk scoring pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    corpus = sub.add_parser("corpus", help="corpus inspection")
    corpus_sub = corpus.add_subparsers(dest="subcommand", required=True)
    validate = corpus_sub.add_parser("validate")
    validate.add_argument("path")
    validate.set_defaults(func=_cmd_corpus_validate)
    stats = corpus_sub.add_parser("stats")
    stats.add_argument("path")
    stats.set_defaults(func=_cmd_corpus_stats)

    ast = sub.add_parser("ast", help="syntax tree tools")
    ast_sub = ast.add_subparsers(dest="subcommand", required=True)
    dump = ast_sub.add_parser("dump")
    dump.add_argument("file")
    dump.add_argument("--language", choices=("c", "cpp"), default="c")
    dump.set_defaults(func=_cmd_ast_dump)

    diff = sub.add_parser("diff", help="structural metrics for one pair")
    diff.add_argument("corpus")
    diff.add_argument("--pair", required=True)
    diff.add_argument("--metric", choices=("nted", "lts", "jaccard", "align", "all"),
                      default="all")
    diff.add_argument("--emit-regions", action="store_true")
    diff.set_defaults(func=_cmd_diff)

    embed = sub.add_parser("embed", help="embedding utilities")
    embed_sub = embed.add_subparsers(dest="subcommand", required=True)
    precompute = embed_sub.add_parser("precompute")
    precompute.add_argument("corpus")
    precompute.add_argument("--provider", choices=("mock", "http"), default="mock")
    precompute.add_argument("--models", default="")
    precompute.add_argument("--dim", type=int, default=64)
    precompute.add_argument("--seed", type=int, default=0)
    precompute.add_argument("--url", default="")
    precompute.add_argument("--out", required=True)
    precompute.set_defaults(func=_cmd_embed_precompute)

    score = sub.add_parser("score", help="score a corpus against a vector store")
    score.add_argument("corpus")
    score.add_argument("--embeddings", required=True)
    score.add_argument("--weights", default="0.5,0.3,0.2")
    score.add_argument("--max-ast-nodes", type=int, default=350)
    score.add_argument("--out", default="scores.csv")
    score.set_defaults(func=_cmd_score)

    sweep = sub.add_parser("sweep", help="weight sensitivity sweep")
    sweep.add_argument("corpus")
    sweep.add_argument("--embeddings", required=True)
    sweep.add_argument("--weights", default="0.5,0.3,0.2")
    sweep.add_argument("--max-ast-nodes", type=int, default=350)
    sweep.add_argument("--grid", default="default")
    sweep.add_argument("--out", default="")
    sweep.set_defaults(func=_cmd_sweep)

    validate_cmd = sub.add_parser("validate", help="static-analyzer validation")
    validate_cmd.add_argument("scores")
    validate_cmd.add_argument("--corpus", required=True)
    validate_cmd.add_argument("--top-quadrant", default="I")
    validate_cmd.add_argument("--tools", default="cppcheck,clang-tidy,infer")
    validate_cmd.add_argument("--timeout", type=float, default=120.0)
    validate_cmd.add_argument("--mapping", default="")
    validate_cmd.add_argument("--severity", choices=("both", "error", "warning"),
                              default="both")
    validate_cmd.add_argument("--out-dir", default="validation")
    validate_cmd.set_defaults(func=_cmd_validate)

    report = sub.add_parser("report", help="rank report and plot data")
    report.add_argument("scores")
    report.add_argument("--out", default="report.md")
    report.add_argument("--plots", default="")
    report.add_argument("--top-k", type=int, default=10)
    report.set_defaults(func=_cmd_report)

    run = sub.add_parser("run", help="full pipeline from a config file")
    run.add_argument("--config", required=True)
    run.add_argument("--output-dir", default=None)
    run.set_defaults(func=_cmd_run)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RrsError as exc:
        print(f"error [{args.command}]: {exc}", file=sys.stderr)
        return EXIT_STAGE


if __name__ == "__main__":
    sys.exit(main())
