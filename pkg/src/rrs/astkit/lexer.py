"""Tokenizer for C/C++ function text.

Whitespace and comments are trivia and never reach the parser; preprocessor
lines are kept as single tokens so isolated functions with #ifdef guards
still produce usable trees.
"""

from __future__ import annotations

from dataclasses import dataclass


IDENT = "ident"
NUMBER = "number"
STRING = "string"
CHAR = "char"
PUNCT = "punct"
PREPROC = "preproc"
EOF = "eof"

# longest-match first
_PUNCTUATORS = [
    "<<=", ">>=", "...", "->*",
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "::", ".*",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "&", "|", "^",
    "?", ":", ";", ",", ".", "(", ")", "[", "]", "{", "}",
]


@dataclass
class Token:
    type: str
    value: str
    start: int
    end: int


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(source)
    line_start = True
    while i < n:
        ch = source[i]
        if ch in " \t\r":
            i += 1
            continue
        if ch == "\n":
            i += 1
            line_start = True
            continue
        if ch == "\\" and i + 1 < n and source[i + 1] == "\n":
            i += 2
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "/":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "*":
            end = source.find("*/", i + 2)
            i = n if end < 0 else end + 2
            continue
        if ch == "#" and line_start:
            start = i
            while i < n:
                if source[i] == "\n" and source[i - 1] != "\\":
                    break
                i += 1
            tokens.append(Token(PREPROC, source[start:i].strip(), start, i))
            continue
        line_start = False
        if _is_ident_start(ch):
            start = i
            while i < n and _is_ident_char(source[i]):
                i += 1
            # wide/raw string prefixes glue onto the following literal
            if i < n and source[i] in "\"'" and source[start:i] in ("L", "u", "U", "u8", "R"):
                continue_from = _scan_string(source, i)
                ttype = STRING if source[i] == '"' else CHAR
                tokens.append(Token(ttype, source[start:continue_from], start, continue_from))
                i = continue_from
                continue
            tokens.append(Token(IDENT, source[start:i], start, i))
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            start = i
            i += 1
            while i < n and (_is_ident_char(source[i]) or source[i] == "."
                             or (source[i] in "+-" and source[i - 1] in "eEpP")):
                i += 1
            tokens.append(Token(NUMBER, source[start:i], start, i))
            continue
        if ch == '"':
            end = _scan_string(source, i)
            tokens.append(Token(STRING, source[i:end], i, end))
            i = end
            continue
        if ch == "'":
            end = _scan_string(source, i)
            tokens.append(Token(CHAR, source[i:end], i, end))
            i = end
            continue
        matched = False
        for p in _PUNCTUATORS:
            if source.startswith(p, i):
                tokens.append(Token(PUNCT, p, i, i + len(p)))
                i += len(p)
                matched = True
                break
        if not matched:
            # unknown byte: emit as punct so the parser can flag it
            tokens.append(Token(PUNCT, ch, i, i + 1))
            i += 1
    tokens.append(Token(EOF, "", n, n))
    return tokens


def _scan_string(source: str, i: int) -> int:
    quote = source[i]
    n = len(source)
    j = i + 1
    while j < n:
        if source[j] == "\\":
            j += 2
            continue
        if source[j] == quote:
            return j + 1
        if source[j] == "\n":
            # unterminated literal: stop at end of line
            return j
        j += 1
    return n
