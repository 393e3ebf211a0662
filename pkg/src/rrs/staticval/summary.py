"""Batch validation: run the analyzer set over selected pairs and compute
agreement statistics.

"Unavailable" is distinct from "clean": hosts without a tool still produce
a summary, with the gap recorded instead of counted as a silent pass.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..errors import EmptyBatchError, ToolTimeoutError, ToolUnavailableError
from .preamble import synthesize_preamble
from .runners import TOOLS, run_analyzer
from .taxonomy import Finding, Taxonomy


@dataclass
class ToolRunResult:
    status: str  # "ok" | "unavailable" | "timeout"
    findings: list[Finding] = field(default_factory=list)


@dataclass
class ValidationSummary:
    n_analyzed: int
    n_gaps: int
    pct_flagged_any: float
    pct_flagged_two: float
    pct_flagged_all: float
    pct_clean: float
    per_category: dict
    per_pair_agreement: dict
    severity_filter: str = "both"


def run_validation(pairs, trees, tools=TOOLS, timeout: float = 120.0,
                   taxonomy: Taxonomy | None = None, max_workers: int | None = None):
    """Analyze each pair's benign source under every requested tool.

    Returns {pair_id: {tool: ToolRunResult}}. Missing binaries and timeouts
    are recorded per pair, not raised.
    """
    import os

    if max_workers is None:
        max_workers = min(8, os.cpu_count() or 1)

    jobs = []
    for pair in pairs:
        tree = trees.get(pair.pair_id)
        preamble = synthesize_preamble(pair.benign_source, tree[1]) if tree else None
        for tool in tools:
            jobs.append((pair.pair_id, tool, preamble))

    def run_one(job):
        pair_id, tool, preamble = job
        if preamble is None:
            return pair_id, tool, ToolRunResult(status="unavailable")
        try:
            findings = run_analyzer(tool, preamble.source_with_preamble,
                                    timeout, taxonomy)
            return pair_id, tool, ToolRunResult(status="ok", findings=findings)
        except ToolUnavailableError:
            return pair_id, tool, ToolRunResult(status="unavailable")
        except ToolTimeoutError:
            return pair_id, tool, ToolRunResult(status="timeout")

    results: dict[str, dict[str, ToolRunResult]] = {}
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        for pair_id, tool, result in pool.map(run_one, jobs):
            results.setdefault(pair_id, {})[tool] = result
    return results


def _keep(finding: Finding, severity_filter: str) -> bool:
    return severity_filter == "both" or finding.severity == severity_filter


def summarize(per_pair_results, severity_filter: str = "both") -> ValidationSummary:
    """Agreement statistics over analyzed pairs.

    Full agreement: every available tool flags, and one category is shared
    by all of them (two or more tools). Partial: anything flagged short of
    full. None: all available tools silent.
    """
    if not per_pair_results:
        raise EmptyBatchError("no validation results")

    n_analyzed = 0
    n_gaps = 0
    flagged_any = flagged_two = flagged_all = 0
    per_category: dict[str, int] = {}
    agreement: dict[str, str] = {}

    for pair_id, tool_results in sorted(per_pair_results.items()):
        available = {tool: r for tool, r in tool_results.items() if r.status == "ok"}
        n_gaps += sum(1 for r in tool_results.values() if r.status != "ok")
        if not available:
            agreement[pair_id] = "none"
            continue
        n_analyzed += 1
        categories_by_tool = {}
        for tool, result in available.items():
            kept = [f for f in result.findings if _keep(f, severity_filter)]
            for finding in kept:
                per_category[finding.category] = per_category.get(finding.category, 0) + 1
            if kept:
                categories_by_tool[tool] = {f.category for f in kept}
        n_flagged = len(categories_by_tool)
        if n_flagged >= 1:
            flagged_any += 1
        if n_flagged >= 2:
            flagged_two += 1
        if n_flagged >= 3:
            flagged_all += 1
        if n_flagged == 0:
            agreement[pair_id] = "none"
        elif n_flagged == len(available) and len(available) >= 2 \
                and set.intersection(*categories_by_tool.values()):
            agreement[pair_id] = "full"
        else:
            agreement[pair_id] = "partial"

    if n_analyzed == 0:
        raise EmptyBatchError("every pair lacked tool results")

    def pct(count):
        return 100.0 * count / n_analyzed

    return ValidationSummary(
        n_analyzed=n_analyzed,
        n_gaps=n_gaps,
        pct_flagged_any=pct(flagged_any),
        pct_flagged_two=pct(flagged_two),
        pct_flagged_all=pct(flagged_all),
        pct_clean=pct(n_analyzed - flagged_any),
        per_category=dict(sorted(per_category.items())),
        per_pair_agreement=agreement,
        severity_filter=severity_filter,
    )
