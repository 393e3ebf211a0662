"""Vulnerable/benign function-pair corpus: load, validate, filter, persist.

Corpus files are UTF-8 JSON lines; each record carries `pair_id`,
`vuln_source`, `benign_source` and optional `cve_id`, `project`,
`language_hint` ("c" | "cpp").
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import CorpusFormatError, DuplicatePairIdError

REQUIRED_FIELDS = ("pair_id", "vuln_source", "benign_source")
LANGUAGE_HINTS = ("c", "cpp")


@dataclass
class FunctionPair:
    pair_id: str
    vuln_source: str
    benign_source: str
    cve_id: str | None = None
    project: str | None = None
    language_hint: str = "c"

    def to_record(self) -> dict:
        rec = {
            "pair_id": self.pair_id,
            "vuln_source": self.vuln_source,
            "benign_source": self.benign_source,
        }
        if self.cve_id is not None:
            rec["cve_id"] = self.cve_id
        if self.project is not None:
            rec["project"] = self.project
        if self.language_hint != "c":
            rec["language_hint"] = self.language_hint
        return rec


@dataclass
class CorpusFilterConfig:
    max_ast_nodes: int = 350
    require_parse_success: bool = True

    def __post_init__(self):
        if self.max_ast_nodes < 1:
            raise ValueError("max_ast_nodes must be >= 1")


def _parse_record(obj: dict, line_no: int) -> FunctionPair:
    for name in REQUIRED_FIELDS:
        value = obj.get(name)
        if not isinstance(value, str) or not value:
            raise CorpusFormatError(line_no, f"missing or empty field {name!r}")
    hint = obj.get("language_hint", "c")
    if hint not in LANGUAGE_HINTS:
        raise CorpusFormatError(line_no, f"language_hint must be one of {LANGUAGE_HINTS}")
    cve = obj.get("cve_id")
    project = obj.get("project")
    if cve is not None and not isinstance(cve, str):
        raise CorpusFormatError(line_no, "cve_id must be a string")
    if project is not None and not isinstance(project, str):
        raise CorpusFormatError(line_no, "project must be a string")
    return FunctionPair(
        pair_id=obj["pair_id"],
        vuln_source=obj["vuln_source"],
        benign_source=obj["benign_source"],
        cve_id=cve,
        project=project,
        language_hint=hint,
    )


def load_corpus(path) -> list[FunctionPair]:
    """Read a JSONL corpus, preserving file order; duplicate ids are rejected."""
    pairs: list[FunctionPair] = []
    seen: dict[str, int] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            raw = line.strip()
            if not raw:
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(line_no, f"invalid JSON: {exc.msg}") from exc
            if not isinstance(obj, dict):
                raise CorpusFormatError(line_no, "record must be a JSON object")
            pair = _parse_record(obj, line_no)
            if pair.pair_id in seen:
                raise DuplicatePairIdError(pair.pair_id, line_no)
            seen[pair.pair_id] = line_no
            pairs.append(pair)
    return pairs


def write_corpus(pairs: list[FunctionPair], path) -> None:
    """Inverse of load_corpus; load(write(pairs)) == pairs."""
    with open(path, "w", encoding="utf-8") as handle:
        for pair in pairs:
            handle.write(json.dumps(pair.to_record(), sort_keys=True) + "\n")


def filter_pairs(pairs, trees, cfg: CorpusFilterConfig):
    """Partition pairs into (kept, dropped) by tree size and parse success.

    `trees` maps pair_id -> (vuln_tree, benign_tree); a missing or None entry
    means the pair failed to parse. Drops are reported, never raised.
    """
    kept = []
    dropped = []
    for pair in pairs:
        entry = trees.get(pair.pair_id)
        if entry is None or entry[0] is None or entry[1] is None:
            if cfg.require_parse_success:
                dropped.append((pair.pair_id, "parse"))
            else:
                kept.append(pair)
            continue
        vuln_tree, benign_tree = entry
        if len(vuln_tree) > cfg.max_ast_nodes or len(benign_tree) > cfg.max_ast_nodes:
            dropped.append((pair.pair_id, "size"))
        else:
            kept.append(pair)
    return kept, dropped
