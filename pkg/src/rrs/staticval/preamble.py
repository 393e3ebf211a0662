"""Dummy-helper synthesis: make an isolated function compilable enough for
static analyzers without touching the function body.

Undeclared types become typedefs (opaque struct typedef plus a stub field
container when members are accessed through them), undeclared calls become
stub declarations, undeclared objects become int definitions, and known
library names pull in their standard headers instead of stubs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..astkit.tree import SyntaxTree

KNOWN_FUNCTION_HEADERS = {
    "memcpy": "string.h", "memmove": "string.h", "memset": "string.h",
    "memcmp": "string.h", "strlen": "string.h", "strcpy": "string.h",
    "strncpy": "string.h", "strcmp": "string.h", "strncmp": "string.h",
    "strcat": "string.h", "strncat": "string.h", "strchr": "string.h",
    "strrchr": "string.h", "strstr": "string.h", "strdup": "string.h",
    "malloc": "stdlib.h", "calloc": "stdlib.h", "realloc": "stdlib.h",
    "free": "stdlib.h", "abort": "stdlib.h", "exit": "stdlib.h",
    "atoi": "stdlib.h", "strtol": "stdlib.h", "strtoul": "stdlib.h",
    "printf": "stdio.h", "fprintf": "stdio.h", "sprintf": "stdio.h",
    "snprintf": "stdio.h", "fopen": "stdio.h", "fclose": "stdio.h",
    "fread": "stdio.h", "fwrite": "stdio.h", "fgets": "stdio.h",
    "sscanf": "stdio.h", "puts": "stdio.h", "putchar": "stdio.h",
    "isdigit": "ctype.h", "isalpha": "ctype.h", "isspace": "ctype.h",
    "toupper": "ctype.h", "tolower": "ctype.h",
    "assert": "assert.h", "va_start": "stdarg.h", "va_end": "stdarg.h",
    "va_arg": "stdarg.h",
}
KNOWN_OBJECT_HEADERS = {
    "NULL": "stddef.h", "errno": "errno.h",
    "stdin": "stdio.h", "stdout": "stdio.h", "stderr": "stdio.h",
    "true": "stdbool.h", "false": "stdbool.h",
    "INT_MAX": "limits.h", "INT_MIN": "limits.h", "UINT_MAX": "limits.h",
    "SIZE_MAX": "stdint.h", "EOF": "stdio.h",
}
KNOWN_TYPE_HEADERS = {
    "size_t": "stddef.h", "ptrdiff_t": "stddef.h", "wchar_t": "stddef.h",
    "ssize_t": "sys/types.h", "off_t": "sys/types.h", "pid_t": "sys/types.h",
    "int8_t": "stdint.h", "int16_t": "stdint.h", "int32_t": "stdint.h",
    "int64_t": "stdint.h", "uint8_t": "stdint.h", "uint16_t": "stdint.h",
    "uint32_t": "stdint.h", "uint64_t": "stdint.h", "intptr_t": "stdint.h",
    "uintptr_t": "stdint.h", "FILE": "stdio.h", "va_list": "stdarg.h",
    "bool": "stdbool.h",
}


@dataclass
class HelperPreamble:
    declarations: list[str] = field(default_factory=list)
    source_with_preamble: str = ""
    notes: list[str] = field(default_factory=list)


class _Usage:
    """What the function body declares and what it reaches for."""

    def __init__(self):
        self.declared: set[str] = set()
        self.types_declared: set[str] = set()
        self.types_used: set[str] = set()
        self.called: set[str] = set()
        self.objects: set[str] = set()
        self.members: dict[str, set[str]] = {}          # type -> member names
        self.member_arrays: dict[str, set[str]] = {}    # type -> subscripted members
        self.object_arrays: set[str] = set()
        self.notes: list[str] = []


def _innermost_identifier(tree: SyntaxTree, idx: int) -> int | None:
    node = tree.nodes[idx]
    if node.kind == "identifier":
        return idx
    for child in node.children:
        got = _innermost_identifier(tree, child)
        if got is not None:
            return got
    return None


def _collect_usage(tree: SyntaxTree) -> _Usage:
    usage = _Usage()
    parents = tree.parent_map()
    nodes = tree.nodes

    declarator_ids: set[int] = set()

    def mark_declarator(idx: int):
        ident = _innermost_identifier(tree, idx)
        if ident is not None:
            declarator_ids.add(ident)
            usage.declared.add(nodes[ident].text)

    # declaration positions: declarators of functions, parameters, locals
    var_types: dict[str, str] = {}  # variable name -> declared type_identifier
    for i, node in enumerate(nodes):
        if node.kind in ("function_definition", "declaration", "parameter_declaration"):
            spec_type = None
            is_typedef = any(nodes[c].kind == "storage_class_specifier"
                             and nodes[c].text == "typedef" for c in node.children)
            for c in node.children:
                child = nodes[c]
                if child.kind == "type_identifier":
                    spec_type = child.text
                elif child.kind in ("struct_specifier", "union_specifier",
                                    "enum_specifier"):
                    for cc in child.children:
                        if nodes[cc].kind == "type_identifier":
                            usage.types_declared.add(nodes[cc].text)
                elif child.kind in ("init_declarator", "pointer_declarator",
                                    "array_declarator", "function_declarator",
                                    "identifier"):
                    mark_declarator(c)
                    ident = _innermost_identifier(tree, c)
                    if ident is not None:
                        if is_typedef:
                            usage.types_declared.add(nodes[ident].text)
                        elif spec_type is not None:
                            var_types[nodes[ident].text] = spec_type
        elif node.kind == "enumerator":
            for c in node.children:
                if nodes[c].kind == "identifier":
                    declarator_ids.add(c)
                    usage.declared.add(nodes[c].text)

    for i, node in enumerate(nodes):
        if node.kind == "type_identifier":
            usage.types_used.add(node.text)
        elif node.kind == "call_expression":
            fn = node.children[0]
            if nodes[fn].kind == "identifier":
                usage.called.add(nodes[fn].text)
        elif node.kind == "field_expression":
            base, fld = node.children[0], node.children[1]
            if nodes[base].kind == "identifier":
                base_type = var_types.get(nodes[base].text)
                if base_type is not None:
                    usage.members.setdefault(base_type, set()).add(nodes[fld].text)
                    parent = parents[i]
                    if parent != -1 and nodes[parent].kind == "subscript_expression" \
                            and nodes[parent].children[0] == i:
                        usage.member_arrays.setdefault(base_type, set()).add(
                            nodes[fld].text)
            elif nodes[base].kind not in ("field_expression", "subscript_expression",
                                          "parenthesized_expression", "call_expression",
                                          "pointer_expression"):
                usage.notes.append(f"unresolved member base kind {nodes[base].kind}")

    call_targets = set()
    for i, node in enumerate(nodes):
        if node.kind == "call_expression" and nodes[node.children[0]].kind == "identifier":
            call_targets.add(node.children[0])

    for i, node in enumerate(nodes):
        if node.kind != "identifier" or not node.is_leaf:
            continue
        if i in declarator_ids or i in call_targets:
            continue
        parent = parents[i]
        if parent != -1 and nodes[parent].kind in (
                "function_declarator", "pointer_declarator", "array_declarator",
                "init_declarator", "parameter_declaration", "declaration"):
            continue
        name = node.text
        if name in usage.declared:
            continue
        usage.objects.add(name)
        if parent != -1 and nodes[parent].kind == "subscript_expression" \
                and nodes[parent].children[0] == i:
            usage.object_arrays.add(name)

    return usage


def synthesize_preamble(source: str, tree: SyntaxTree) -> HelperPreamble:
    """Emit the minimal declarations that make `source` stand alone.

    The original function body is appended untouched after the preamble.
    Idempotent: a source that already carries its preamble gains nothing.
    """
    usage = _collect_usage(tree)

    headers: set[str] = set()
    type_lines: list[str] = []
    func_lines: list[str] = []
    object_lines: list[str] = []

    for type_name in sorted(usage.types_used - usage.types_declared):
        known = KNOWN_TYPE_HEADERS.get(type_name)
        if known:
            headers.add(known)
            continue
        members = usage.members.get(type_name)
        if members:
            type_lines.append(f"typedef struct {type_name} {type_name};")
            arrays = usage.member_arrays.get(type_name, set())
            fields = "".join(
                f" int {m}[128];" if m in arrays else f" int {m};"
                for m in sorted(members))
            type_lines.append(f"struct {type_name} {{{fields} }};")
        else:
            type_lines.append(f"typedef int {type_name};")

    for fn in sorted(usage.called - usage.declared):
        known = KNOWN_FUNCTION_HEADERS.get(fn)
        if known:
            headers.add(known)
            continue
        func_lines.append(f"int {fn}();")

    for obj in sorted(usage.objects - usage.called):
        known = KNOWN_OBJECT_HEADERS.get(obj)
        if known:
            headers.add(known)
            continue
        if obj.isupper():
            object_lines.append(f"enum {{ {obj} = 1 }};")
        elif obj in usage.object_arrays:
            object_lines.append(f"int {obj}[128];")
        else:
            object_lines.append(f"int {obj};")

    lines = [f"#include <{h}>" for h in sorted(headers)]
    lines += type_lines + func_lines + object_lines
    body = source if source.endswith("\n") else source + "\n"
    text = ("\n".join(lines) + "\n\n" + body) if lines else body
    return HelperPreamble(declarations=lines, source_with_preamble=text,
                          notes=usage.notes)
