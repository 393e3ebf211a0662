from .preamble import HelperPreamble, synthesize_preamble
from .runners import (
    parse_clang_tidy_output,
    parse_cppcheck_xml,
    parse_infer_report,
    run_analyzer,
    tool_available,
)
from .summary import ToolRunResult, ValidationSummary, run_validation, summarize
from .taxonomy import CATEGORIES, UNCATEGORIZED, Finding, Rule, Taxonomy, categorize

__all__ = [
    "HelperPreamble",
    "synthesize_preamble",
    "parse_clang_tidy_output",
    "parse_cppcheck_xml",
    "parse_infer_report",
    "run_analyzer",
    "tool_available",
    "ToolRunResult",
    "ValidationSummary",
    "run_validation",
    "summarize",
    "CATEGORIES",
    "UNCATEGORIZED",
    "Finding",
    "Rule",
    "Taxonomy",
    "categorize",
]
