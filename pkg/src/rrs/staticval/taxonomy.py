"""Finding taxonomy: normalize tool-native diagnostics into residual-risk
categories.

Thirteen categories ship by default; a JSON mapping file can extend or
replace them. Rules are ordered and first match wins, on either the
tool-native check id or keywords in the message text.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

UNCATEGORIZED = "uncategorized"

CATEGORIES = (
    "null-pointer-dereference",
    "uninitialized-variable",
    "uninitialized-value",
    "dead-store",
    "unsafe-realloc",
    "invalid-pointer",
    "resource-leak",
    "memory-leak",
    "return-misuse",
    "missing-default",
    "integer-truncation",
    "allocation-overflow",
    "control-flow-issue",
)


@dataclass(frozen=True)
class Rule:
    category: str
    match_kind: str  # "check_id" | "keyword"
    patterns: tuple[str, ...]


@dataclass
class Finding:
    tool: str
    raw_id: str
    category: str
    severity: str  # "error" | "warning"
    line: int
    message: str


# check-id rules fire before keyword rules; within each block more specific
# categories come before broader ones so e.g. realloc misuse never falls
# through to the generic memory-leak keyword.
DEFAULT_RULES: tuple[Rule, ...] = (
    Rule("unsafe-realloc", "check_id",
         ("memleakOnRealloc", "reallocArg", "suspicious-realloc", "REALLOC_")),
    Rule("null-pointer-dereference", "check_id",
         ("nullPointer", "NullDereference", "NULL_DEREFERENCE",
          "NULLPTR_DEREFERENCE", "null-dereference", "ctunullpointer")),
    Rule("uninitialized-variable", "check_id",
         ("uninitvar", "init-variables", "uninitialized.Assign",
          "UNINITIALIZED_VARIABLE", "legacyUninitvar")),
    Rule("uninitialized-value", "check_id",
         ("uninitdata", "uninitStructMember", "UndefinedBinaryOperatorResult",
          "UNINITIALIZED_VALUE", "uninitialized.ArraySubscript", "UndefReturn")),
    Rule("dead-store", "check_id",
         ("DeadStores", "unreadVariable", "redundantAssignment", "DEAD_STORE")),
    Rule("invalid-pointer", "check_id",
         ("danglingLifetime", "danglingPointer", "invalidPointer",
          "USE_AFTER_FREE", "USE_AFTER_DELETE", "use-after-move",
          "DANGLING_POINTER_DEREFERENCE", "deallocuse")),
    Rule("resource-leak", "check_id",
         ("resourceLeak", "RESOURCE_LEAK", "unix.Stream")),
    Rule("memory-leak", "check_id",
         ("memleak", "MEMORY_LEAK", "NewDeleteLeaks", "unix.Malloc",
          "PULSE_MEMORY_LEAK")),
    Rule("return-misuse", "check_id",
         ("missingReturn", "bugprone-return", "returnDanglingLifetime",
          "RETURN_VALUE_IGNORED")),
    Rule("missing-default", "check_id",
         ("switch-missing-default", "missingDefault", "multiway-paths-covered",
          "switch-default")),
    Rule("integer-truncation", "check_id",
         ("truncLongCast", "narrowing-conversions", "INTEGER_TRUNCATION",
          "implicit-int-conversion")),
    Rule("allocation-overflow", "check_id",
         ("negativeMemoryAllocationSize", "implicit-widening-of-multiplication",
          "BUFFER_OVERRUN", "INTEGER_OVERFLOW", "mallocOverflow")),
    Rule("control-flow-issue", "check_id",
         ("unreachableCode", "duplicateBreak", "infinite-loop", "InfiniteLoop",
          "identicalConditionAfterEarlyExit", "UnreachableCode")),
    Rule("unsafe-realloc", "keyword", ("realloc",)),
    Rule("null-pointer-dereference", "keyword",
         ("null pointer", "nullptr", "null dereference")),
    Rule("uninitialized-variable", "keyword", ("uninitialized variable",)),
    Rule("uninitialized-value", "keyword",
         ("uninitialized value", "garbage value", "uninitialized")),
    Rule("dead-store", "keyword", ("dead store", "never read", "value stored to")),
    Rule("invalid-pointer", "keyword",
         ("dangling", "use after free", "invalid pointer")),
    Rule("resource-leak", "keyword", ("resource leak", "descriptor leak")),
    Rule("memory-leak", "keyword", ("memory leak",)),
    Rule("return-misuse", "keyword",
         ("return value", "does not return a value", "non-void function")),
    Rule("missing-default", "keyword", ("missing default", "default label")),
    Rule("integer-truncation", "keyword", ("truncat", "narrowing")),
    Rule("allocation-overflow", "keyword",
         ("allocation size", "buffer overrun", "out of bounds")),
    Rule("control-flow-issue", "keyword",
         ("unreachable", "infinite loop", "condition is always")),
)


class Taxonomy:
    def __init__(self, rules=DEFAULT_RULES):
        self.rules = tuple(rules)
        self._validate()

    def _validate(self):
        seen: dict[tuple[str, str], str] = {}
        for rule in self.rules:
            if rule.match_kind not in ("check_id", "keyword"):
                raise ValueError(f"unknown match_kind {rule.match_kind!r}")
            for pattern in rule.patterns:
                key = (rule.match_kind, pattern.lower())
                owner = seen.setdefault(key, rule.category)
                if owner != rule.category:
                    raise ValueError(
                        f"pattern {pattern!r} mapped to both {owner} and {rule.category}")

    def categorize(self, raw_id: str, message: str) -> str:
        raw_lower = raw_id.lower()
        msg_lower = message.lower()
        for rule in self.rules:
            haystack = raw_lower if rule.match_kind == "check_id" else msg_lower
            for pattern in rule.patterns:
                if pattern.lower() in haystack:
                    return rule.category
        return UNCATEGORIZED

    @classmethod
    def from_mapping_file(cls, path, extend_defaults: bool = True) -> "Taxonomy":
        """Load rules from a JSON list of {category, match_kind, patterns}."""
        with open(path, "r", encoding="utf-8") as handle:
            entries = json.load(handle)
        rules = [Rule(e["category"], e["match_kind"], tuple(e["patterns"]))
                 for e in entries]
        if extend_defaults:
            rules = rules + list(DEFAULT_RULES)
        return cls(rules)


def categorize(tool: str, raw_id: str, message: str, severity: str, line: int,
               taxonomy: Taxonomy | None = None) -> Finding:
    """Build a Finding with a taxonomy category resolved from raw tool data."""
    tax = taxonomy if taxonomy is not None else Taxonomy()
    return Finding(
        tool=tool,
        raw_id=raw_id,
        category=tax.categorize(raw_id, message),
        severity="error" if severity == "error" else "warning",
        line=line,
        message=message,
    )
