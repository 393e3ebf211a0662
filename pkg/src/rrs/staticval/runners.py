"""Run cppcheck / clang-tidy / infer on single-function translation units
and normalize their machine-readable output into Findings.

Output parsing is pure (fixture-testable without the tools installed);
execution is skip-gated on binary discovery, overridable through the
RRS_CPPCHECK_BIN / RRS_CLANG_TIDY_BIN / RRS_INFER_BIN environment variables.
"""

from __future__ import annotations

import json
import os
import re
import shutil
import subprocess
import tempfile
import xml.etree.ElementTree as ET
from pathlib import Path

from ..errors import ToolTimeoutError, ToolUnavailableError
from .taxonomy import Taxonomy, categorize

TOOLS = ("cppcheck", "clang-tidy", "infer")
_ENV_OVERRIDES = {
    "cppcheck": "RRS_CPPCHECK_BIN",
    "clang-tidy": "RRS_CLANG_TIDY_BIN",
    "infer": "RRS_INFER_BIN",
}

CLANG_TIDY_CHECKS = ",".join([
    "clang-analyzer-core.*",
    "clang-analyzer-deadcode.*",
    "clang-analyzer-unix.*",
    "bugprone-*",
    "cppcoreguidelines-init-variables",
    "cppcoreguidelines-narrowing-conversions",
])


def discover_tool(tool: str) -> str:
    """Resolve the executable path or raise ToolUnavailableError."""
    if tool not in TOOLS:
        raise ValueError(f"unknown tool {tool!r}")
    override = os.environ.get(_ENV_OVERRIDES[tool])
    if override:
        if not Path(override).exists():
            raise ToolUnavailableError(f"{tool}: override path {override} missing")
        return override
    found = shutil.which(tool)
    if not found:
        raise ToolUnavailableError(f"{tool}: executable not found")
    return found


def tool_available(tool: str) -> bool:
    try:
        discover_tool(tool)
        return True
    except ToolUnavailableError:
        return False


# -- output parsers (pure) -----------------------------------------------------


def parse_cppcheck_xml(xml_text: str, taxonomy: Taxonomy | None = None):
    """cppcheck --xml --xml-version=2 report (emitted on stderr)."""
    findings = []
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError:
        return findings
    for error in root.iter("error"):
        raw_id = error.get("id", "")
        if raw_id in ("missingIncludeSystem", "missingInclude", "checkersReport",
                      "unmatchedSuppression", "information"):
            continue
        severity = error.get("severity", "warning")
        message = error.get("msg", "")
        line = 0
        location = error.find("location")
        if location is not None:
            line = int(location.get("line", "0"))
        findings.append(categorize(
            "cppcheck", raw_id, message,
            "error" if severity == "error" else "warning", line, taxonomy))
    return findings


_CLANG_TIDY_LINE = re.compile(
    r"^(?P<file>[^:\n]+):(?P<line>\d+):(?P<col>\d+):\s+"
    r"(?P<severity>warning|error):\s+(?P<message>.*?)\s+\[(?P<check>[^\]]+)\]\s*$")


def parse_clang_tidy_output(text: str, taxonomy: Taxonomy | None = None):
    """clang-tidy stdout diagnostics: file:line:col: severity: message [check]."""
    findings = []
    for line in text.splitlines():
        match = _CLANG_TIDY_LINE.match(line.strip())
        if not match:
            continue
        check = match.group("check")
        if check.startswith("clang-diagnostic"):
            continue  # compiler noise from the synthesized context
        findings.append(categorize(
            "clang_tidy", check, match.group("message"),
            match.group("severity"), int(match.group("line")), taxonomy))
    return findings


def parse_infer_report(json_text: str, taxonomy: Taxonomy | None = None):
    """infer report.json: list of {bug_type, qualifier, severity, line, ...}."""
    findings = []
    try:
        entries = json.loads(json_text)
    except json.JSONDecodeError:
        return findings
    if not isinstance(entries, list):
        return findings
    for entry in entries:
        severity = str(entry.get("severity", "WARNING")).lower()
        findings.append(categorize(
            "infer", entry.get("bug_type", ""), entry.get("qualifier", ""),
            "error" if severity == "error" else "warning",
            int(entry.get("line", 0) or 0), taxonomy))
    return findings


# -- execution ------------------------------------------------------------------


def _run(cmd, timeout, cwd=None):
    try:
        return subprocess.run(cmd, capture_output=True, text=True,
                              timeout=timeout, cwd=cwd, check=False)
    except subprocess.TimeoutExpired as exc:
        raise ToolTimeoutError(f"{cmd[0]} exceeded {timeout}s") from exc


def run_analyzer(tool: str, source_with_preamble: str, timeout: float = 120.0,
                 taxonomy: Taxonomy | None = None):
    """Spawn `tool` on a temporary translation unit and parse its findings."""
    if timeout <= 0:
        raise ValueError("timeout must be positive")
    binary = discover_tool(tool)
    with tempfile.TemporaryDirectory(prefix="rrs-val-") as tmp:
        unit = Path(tmp) / "unit.c"
        unit.write_text(source_with_preamble, encoding="utf-8")
        if tool == "cppcheck":
            proc = _run([binary, "--enable=warning,style,portability",
                         "--xml", "--xml-version=2", "--quiet", str(unit)], timeout)
            return parse_cppcheck_xml(proc.stderr, taxonomy)
        if tool == "clang-tidy":
            proc = _run([binary, str(unit), "--quiet",
                         f"--checks=-*,{CLANG_TIDY_CHECKS}",
                         "--", "-std=c11", "-Wno-everything"], timeout)
            return parse_clang_tidy_output(proc.stdout, taxonomy)
        # infer
        results_dir = Path(tmp) / "infer-out"
        _run([binary, "run", "--results-dir", str(results_dir),
              "--", "clang", "-c", str(unit), "-o", str(Path(tmp) / "unit.o")],
             timeout, cwd=tmp)
        report = results_dir / "report.json"
        if not report.exists():
            return []
        return parse_infer_report(report.read_text(encoding="utf-8"), taxonomy)
