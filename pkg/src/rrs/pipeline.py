"""End-to-end pipeline: corpus -> parse -> filter -> diff -> embed -> score,
with a run manifest that pins everything needed to reproduce the run.
"""

from __future__ import annotations

import csv
import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .astkit import parse_function
from .corpus import CorpusFilterConfig, load_corpus
from .embedkit import (
    FileStoreProvider,
    HttpServiceProvider,
    MockProvider,
    distance_family,
    get_pair_embeddings,
)
from .errors import ConfigError, ParseFailure, RrsError
from .scoring import PairScore, WeightConfig, finalize_scores, mean_semantic
from .treediff import lts_similarity


@dataclass
class RunManifest:
    tool_version: str
    corpus_path: str
    corpus_digest: str
    weights: dict
    provider: dict
    filter: dict
    started_at: str
    finished_at: str = ""
    stage_counts: dict = field(default_factory=dict)

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(self.__dict__, handle, indent=2, sort_keys=True)
            handle.write("\n")


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def build_provider(cfg: dict):
    kind = cfg.get("kind")
    if kind == "file_store":
        store = cfg.get("store")
        if not store:
            raise ConfigError("provider.store is required for the file_store provider")
        return FileStoreProvider(store)
    if kind == "mock":
        return MockProvider(
            model_ids=cfg.get("model_ids", ["model-a", "model-b", "model-c"]),
            dim=int(cfg.get("dim", 64)),
            seed=int(cfg.get("seed", 0)),
        )
    if kind == "http_service":
        import os

        url = cfg.get("url") or os.environ.get("RRS_EMBED_URL")
        if not url:
            raise ConfigError("provider.url (or RRS_EMBED_URL) is required "
                              "for the http_service provider")
        model_ids = cfg.get("model_ids")
        if not model_ids:
            raise ConfigError("provider.model_ids is required for http_service")
        return HttpServiceProvider(url, model_ids)
    raise ConfigError(f"provider.kind must be file_store, mock, or http_service "
                      f"(got {kind!r})")


def parse_pair_trees(pairs):
    """pair_id -> (vuln_tree, benign_tree); None entry on parse failure."""
    trees = {}
    for pair in pairs:
        try:
            vuln = parse_function(pair.vuln_source, pair.language_hint)
            benign = parse_function(pair.benign_source, pair.language_hint)
            trees[pair.pair_id] = (vuln, benign)
        except ParseFailure:
            trees[pair.pair_id] = None
    return trees


def score_pairs(pairs, trees, provider, model_ids, weights: WeightConfig):
    """Two-pass scoring: per-pair signals, then batch finalization."""
    scores = []
    for pair in pairs:
        vuln_tree, benign_tree = trees[pair.pair_id]
        per_model = []
        for model_id in model_ids:
            x, y = get_pair_embeddings(provider, pair, model_id)
            per_model.append(distance_family(x, y))
        score = PairScore(
            pair_id=pair.pair_id,
            per_model=per_model,
            mean_sem=mean_semantic([m.cosine for m in per_model]),
            struct_sim=lts_similarity(vuln_tree, benign_tree),
        )
        scores.append(score)
    ctx = finalize_scores(scores, weights)
    return scores, ctx


# -- scores.csv ------------------------------------------------------------------


def write_scores_csv(scores, model_ids, path) -> None:
    """Deterministic, byte-stable CSV (floats via repr round-trip)."""
    header = (["pair_id"] + [f"cos_{m}" for m in model_ids]
              + ["mean_sem", "struct_sim", "cross_var", "agree", "rrs", "quadrant"])
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for score in scores:
            by_model = {m.model_id: m.cosine for m in score.per_model}
            writer.writerow(
                [score.pair_id]
                + [repr(by_model[m]) for m in model_ids]
                + [repr(score.mean_sem), repr(score.struct_sim),
                   repr(score.cross_var), repr(score.agree), repr(score.rrs),
                   score.quadrant])


def read_scores_csv(path):
    """Rebuild PairScore rows (per_model dropped to cosine-only entries)."""
    from .embedkit import ModelSimilarity

    scores = []
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        model_cols = [c for c in reader.fieldnames or [] if c.startswith("cos_")]
        for row in reader:
            per_model = [
                ModelSimilarity(model_id=c[len("cos_"):], cosine=float(row[c]),
                                dot=0.0, l1=0.0, l2=0.0, linf=0.0)
                for c in model_cols
            ]
            scores.append(PairScore(
                pair_id=row["pair_id"],
                per_model=per_model,
                mean_sem=float(row["mean_sem"]),
                struct_sim=float(row["struct_sim"]),
                cross_var=float(row["cross_var"]),
                agree=float(row["agree"]),
                rrs=float(row["rrs"]),
                quadrant=row["quadrant"],
            ))
    return scores


# -- full run ----------------------------------------------------------------------


def load_run_config(path) -> dict:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file {path} does not exist")
    text = p.read_text(encoding="utf-8")
    if p.suffix == ".toml":
        try:
            import tomllib
        except ImportError:
            import tomli as tomllib
        return tomllib.loads(text)
    return json.loads(text)


def run_pipeline(config: dict, output_dir=None) -> dict:
    """Execute every stage; returns artifact paths and counts.

    Raises ConfigError for bad configuration; stage failures raise RrsError.
    """
    corpus_path = config.get("corpus")
    if not corpus_path:
        raise ConfigError("config field 'corpus' is required")
    provider_cfg = config.get("provider")
    if not isinstance(provider_cfg, dict):
        raise ConfigError("config table 'provider' is required")
    out_dir = Path(output_dir or config.get("output_dir") or ".")
    out_dir.mkdir(parents=True, exist_ok=True)

    weights_cfg = config.get("weights", {})
    weights = WeightConfig(
        alpha=float(weights_cfg.get("alpha", 0.5)),
        beta=float(weights_cfg.get("beta", 0.3)),
        gamma=float(weights_cfg.get("gamma", 0.2)),
    )
    filter_cfg = config.get("filter", {})
    corpus_filter = CorpusFilterConfig(
        max_ast_nodes=int(filter_cfg.get("max_ast_nodes", 350)),
        require_parse_success=bool(filter_cfg.get("require_parse_success", True)),
    )

    provider = build_provider(provider_cfg)
    model_ids = list(provider_cfg.get("model_ids") or provider.model_ids)

    provider_manifest = {"kind": provider.kind, "model_ids": model_ids}
    if provider.kind == "mock":
        provider_manifest["seed"] = provider.seed
        provider_manifest["dim"] = provider.dim
    elif provider.kind == "file_store":
        provider_manifest["store_digest"] = sha256_file(provider.path)

    manifest = RunManifest(
        tool_version=__version__,
        corpus_path=str(corpus_path),
        corpus_digest=sha256_file(corpus_path),
        weights={"alpha": weights.alpha, "beta": weights.beta, "gamma": weights.gamma},
        provider=provider_manifest,
        filter={"max_ast_nodes": corpus_filter.max_ast_nodes,
                "require_parse_success": corpus_filter.require_parse_success},
        started_at=time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    )

    pairs = load_corpus(corpus_path)
    manifest.stage_counts["loaded"] = len(pairs)

    trees = parse_pair_trees(pairs)
    from .corpus import filter_pairs

    kept, dropped = filter_pairs(pairs, trees, corpus_filter)
    manifest.stage_counts["kept"] = len(kept)
    manifest.stage_counts["dropped"] = len(dropped)
    if not kept:
        raise RrsError("no pairs survived filtering")

    scores, ctx = score_pairs(kept, trees, provider, model_ids, weights)
    manifest.stage_counts["scored"] = len(scores)

    scores_path = out_dir / "scores.csv"
    write_scores_csv(scores, model_ids, scores_path)

    warnings: list[str] = []

    if config.get("sweep"):
        from .scoring import sensitivity_sweep

        result = sensitivity_sweep(scores)
        sweep_payload = {
            "configs": [{"alpha": c.alpha, "beta": c.beta, "gamma": c.gamma}
                        for c in result.configs],
            "pair_ids": result.pair_ids,
            "rrs_table": [[float(v) for v in row] for row in result.rrs_table],
            "rank_correlation": [[float(v) for v in row]
                                 for row in result.rank_correlation],
        }
        with open(out_dir / "sweep.json", "w", encoding="utf-8") as handle:
            json.dump(sweep_payload, handle, indent=2, sort_keys=True)
            handle.write("\n")
        manifest.stage_counts["sweep_configs"] = len(result.configs)

    validate_cfg = config.get("validate", {})
    if validate_cfg.get("enabled"):
        # degraded stage: analyzer problems become warnings, never failures
        try:
            from .staticval import run_validation, summarize

            quadrant = validate_cfg.get("quadrant", "I")
            selected = [p for p, s in zip(kept, scores) if s.quadrant == quadrant]
            results = run_validation(
                selected, trees,
                tools=tuple(validate_cfg.get("tools",
                                             ("cppcheck", "clang-tidy", "infer"))),
                timeout=float(validate_cfg.get("timeout", 120.0)))
            summary = summarize(results)
            with open(out_dir / "summary.json", "w", encoding="utf-8") as handle:
                json.dump(summary.__dict__, handle, indent=2, sort_keys=True)
                handle.write("\n")
            manifest.stage_counts["validated"] = summary.n_analyzed
        except RrsError as exc:
            warnings.append(f"validate stage degraded: {exc}")

    from .report import render_markdown_summary

    report_path = out_dir / "report.md"
    report_path.write_text(render_markdown_summary(scores, ctx), encoding="utf-8")

    if warnings:
        manifest.stage_counts["warnings"] = warnings
    manifest.finished_at = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    manifest_path = out_dir / "manifest.json"
    manifest.write(manifest_path)

    return {
        "scores_csv": str(scores_path),
        "report_md": str(report_path),
        "manifest": str(manifest_path),
        "counts": dict(manifest.stage_counts),
        "dropped": dropped,
        "warnings": warnings,
    }
