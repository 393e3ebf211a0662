"""Error-tolerant recursive-descent parser for isolated C/C++ functions.

Produces an ordered labeled tree with grammar-production kind names.
Parse errors inside the grammar become `error` leaf nodes and parsing
continues at the next statement boundary; only a source whose top level
is nothing but error nodes counts as a parse failure.

Counting convention: trivia (whitespace, comments) and pure punctuation
(braces, parens, semicolons, commas) produce no nodes; operators do
produce leaves, since operator changes are real edits.
"""

from __future__ import annotations

from ..errors import ParseFailure
from .lexer import CHAR, EOF, IDENT, NUMBER, PREPROC, PUNCT, STRING, Token, tokenize
from .tree import SyntaxNode, SyntaxTree

TYPE_KEYWORDS = {
    "void", "char", "short", "int", "long", "float", "double",
    "signed", "unsigned", "_Bool", "bool", "wchar_t",
}
STORAGE_KEYWORDS = {"static", "extern", "register", "auto", "inline", "typedef", "_Noreturn"}
QUALIFIER_KEYWORDS = {"const", "volatile", "restrict", "_Atomic", "constexpr"}
TAG_KEYWORDS = {"struct", "union", "enum", "class"}
STATEMENT_KEYWORDS = {
    "if", "else", "while", "do", "for", "switch", "case", "default",
    "return", "break", "continue", "goto",
}

ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="}
BINARY_PRECEDENCE = {
    "||": 1, "&&": 2, "|": 3, "^": 4, "&": 5,
    "==": 6, "!=": 6,
    "<": 7, ">": 7, "<=": 7, ">=": 7,
    "<<": 8, ">>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
}
UNARY_OPS = {"!", "~", "-", "+"}
POINTER_OPS = {"*", "&"}


class _Node:
    __slots__ = ("kind", "text", "children", "span")

    def __init__(self, kind, text="", children=None, span=(0, 0)):
        self.kind = kind
        self.text = text
        self.children = children if children is not None else []
        self.span = span


class _Stall(Exception):
    """Internal: current construct cannot be parsed at this position."""


class Parser:
    def __init__(self, source: str, language_hint: str = "c"):
        self.source = source
        self.language_hint = language_hint
        self.tokens = tokenize(source)
        self.pos = 0
        self.typedef_names: set[str] = set()
        self.had_error = False

    # -- token helpers ----------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def at_punct(self, value: str, offset: int = 0) -> bool:
        t = self.peek(offset)
        return t.type == PUNCT and t.value == value

    def at_ident(self, value: str, offset: int = 0) -> bool:
        t = self.peek(offset)
        return t.type == IDENT and t.value == value

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.type != EOF:
            self.pos += 1
        return t

    def expect_punct(self, value: str) -> Token:
        if not self.at_punct(value):
            raise _Stall(f"expected {value!r}")
        return self.advance()

    # -- entry points ------------------------------------------------------

    def parse_translation_unit(self) -> _Node:
        children = []
        while self.peek().type != EOF:
            start = self.pos
            item = self.parse_external_item()
            if item is not None:
                children.append(item)
            if self.pos == start:
                self.advance()  # guarantee progress on stray tokens
        span = (0, len(self.source))
        return _Node("translation_unit", children=children, span=span)

    def parse_external_item(self) -> _Node | None:
        t = self.peek()
        if t.type == PREPROC:
            self.advance()
            return _Node("preproc_directive", text=t.value, span=(t.start, t.end))
        if self.at_punct(";"):
            self.advance()
            return None
        start_pos = self.pos
        try:
            return self.parse_declaration_or_definition()
        except _Stall:
            self.pos = start_pos
            return self.error_node(top_level=True)

    # -- error recovery ----------------------------------------------------

    def error_node(self, top_level: bool = False) -> _Node:
        """Swallow tokens up to the next statement boundary into an error leaf."""
        self.had_error = True
        start_tok = self.peek()
        depth = 0
        consumed = 0
        while self.peek().type != EOF:
            t = self.peek()
            if t.type == PUNCT:
                if t.value in "([{":
                    depth += 1
                elif t.value in ")]}":
                    if depth == 0:
                        if t.value == "}" and not top_level:
                            break
                        if t.value == "}" and top_level:
                            self.advance()
                            consumed += 1
                            break
                        # unbalanced closer: swallow it
                    else:
                        depth -= 1
                elif t.value == ";" and depth == 0:
                    self.advance()
                    consumed += 1
                    break
            self.advance()
            consumed += 1
        end = self.tokens[self.pos - 1].end if consumed else start_tok.end
        if consumed == 0:
            self.advance()
        text = self.source[start_tok.start:end]
        return _Node("error", text=text, span=(start_tok.start, end))

    # -- declarations and definitions ---------------------------------------

    def looks_like_type(self, tok: Token) -> bool:
        if tok.type != IDENT:
            return False
        v = tok.value
        return (
            v in TYPE_KEYWORDS
            or v in QUALIFIER_KEYWORDS
            or v in STORAGE_KEYWORDS
            or v in TAG_KEYWORDS
            or v in self.typedef_names
            or v.endswith("_t")
            or v.endswith("_type")
        )

    def at_declaration_start(self) -> bool:
        t = self.peek()
        if t.type != IDENT:
            return False
        if t.value in TYPE_KEYWORDS or t.value in QUALIFIER_KEYWORDS \
                or t.value in STORAGE_KEYWORDS or t.value in TAG_KEYWORDS:
            return True
        if not self.looks_like_type(t):
            # `name name2` with unknown first name: still a declaration shape
            return self.peek(1).type == IDENT and not self.at_ident("sizeof") \
                and (self.at_punct(";", 2) or self.at_punct("=", 2)
                     or self.at_punct(",", 2) or self.at_punct("[", 2))
        # known/likely type name: ident, `*`, or `(`  after it reads as a declarator
        nxt = self.peek(1)
        return nxt.type == IDENT or (nxt.type == PUNCT and nxt.value in ("*", "("))

    def parse_declaration_or_definition(self) -> _Node:
        """Top-level item: function definition, declaration, or typedef."""
        start_tok = self.peek()
        is_typedef = self.at_ident("typedef")
        specifiers = self.parse_declaration_specifiers()
        if self.at_punct(";"):
            # bare struct/enum declaration
            self.advance()
            return _Node("declaration", children=specifiers,
                         span=(start_tok.start, self.tokens[self.pos - 1].end))
        declarator, name = self.parse_declarator()
        if self.at_punct("{"):
            body = self.parse_compound_statement()
            node = _Node("function_definition", children=specifiers + [declarator, body],
                         span=(start_tok.start, body.span[1]))
            return node
        declarators = [self.wrap_init_declarator(declarator)]
        names = [name]
        while self.at_punct(","):
            self.advance()
            d, nm = self.parse_declarator()
            declarators.append(self.wrap_init_declarator(d))
            names.append(nm)
        self.expect_punct(";")
        if is_typedef:
            self.typedef_names.update(n for n in names if n)
        return _Node("declaration", children=specifiers + declarators,
                     span=(start_tok.start, self.tokens[self.pos - 1].end))

    def _skip_attribute(self) -> None:
        """Consume __attribute__((...)) / __declspec(...); attributes are
        trivia for structural metrics."""
        self.advance()
        if self.at_punct("("):
            depth = 0
            while self.peek().type != EOF:
                if self.at_punct("("):
                    depth += 1
                elif self.at_punct(")"):
                    depth -= 1
                    if depth == 0:
                        self.advance()
                        return
                self.advance()

    def parse_declaration_specifiers(self) -> list[_Node]:
        parts: list[_Node] = []
        saw_type = False
        while True:
            t = self.peek()
            if t.type != IDENT:
                break
            v = t.value
            if v in ("__attribute__", "__declspec", "__extension__", "__restrict",
                     "__restrict__", "__forceinline"):
                self._skip_attribute()
            elif v in STORAGE_KEYWORDS:
                self.advance()
                parts.append(_Node("storage_class_specifier", text=v, span=(t.start, t.end)))
            elif v in QUALIFIER_KEYWORDS:
                self.advance()
                parts.append(_Node("type_qualifier", text=v, span=(t.start, t.end)))
            elif v in TAG_KEYWORDS:
                parts.append(self.parse_tag_specifier())
                saw_type = True
            elif v in TYPE_KEYWORDS:
                self.advance()
                parts.append(_Node("primitive_type", text=v, span=(t.start, t.end)))
                saw_type = True
                # long long / unsigned int chains continue looping
            elif not saw_type and (self.looks_like_type(t) or self.peek(1).type == IDENT):
                self.advance()
                parts.append(_Node("type_identifier", text=v, span=(t.start, t.end)))
                saw_type = True
            else:
                break
        if not parts:
            raise _Stall("expected declaration specifiers")
        if not saw_type:
            raise _Stall("missing type in declaration")
        return parts

    def parse_tag_specifier(self) -> _Node:
        kw = self.advance()  # struct/union/enum/class
        kind = {"struct": "struct_specifier", "union": "union_specifier",
                "enum": "enum_specifier", "class": "struct_specifier"}[kw.value]
        children: list[_Node] = []
        end = kw.end
        if self.peek().type == IDENT and not self.at_punct("{"):
            t = self.advance()
            children.append(_Node("type_identifier", text=t.value, span=(t.start, t.end)))
            end = t.end
        if self.at_punct("{"):
            self.advance()
            if kind == "enum_specifier":
                body = self.parse_enumerator_list()
            else:
                body = self.parse_field_declaration_list()
            children.append(body)
            end = body.span[1]
        return _Node(kind, children=children, span=(kw.start, end))

    def parse_enumerator_list(self) -> _Node:
        start = self.tokens[self.pos - 1].start
        items = []
        while not self.at_punct("}") and self.peek().type != EOF:
            if self.peek().type == IDENT:
                t = self.advance()
                kids = [_Node("identifier", text=t.value, span=(t.start, t.end))]
                if self.at_punct("="):
                    op = self.advance()
                    kids.append(_Node("operator", text="=", span=(op.start, op.end)))
                    kids.append(self.parse_assignment_expression())
                items.append(_Node("enumerator", children=kids,
                                   span=(t.start, kids[-1].span[1])))
            if self.at_punct(","):
                self.advance()
            elif not self.at_punct("}"):
                items.append(self.error_node())
        end_tok = self.peek()
        if self.at_punct("}"):
            self.advance()
        return _Node("enumerator_list", children=items, span=(start, end_tok.end))

    def parse_field_declaration_list(self) -> _Node:
        start = self.tokens[self.pos - 1].start
        fields = []
        while not self.at_punct("}") and self.peek().type != EOF:
            before = self.pos
            try:
                fields.append(self.parse_declaration_or_definition())
            except _Stall:
                self.pos = before
                fields.append(self.error_node())
            if self.pos == before:
                self.advance()
        end_tok = self.peek()
        if self.at_punct("}"):
            self.advance()
        return _Node("field_declaration_list", children=fields, span=(start, end_tok.end))

    def parse_declarator(self) -> tuple[_Node, str | None]:
        """Returns (node, declared name); pointer stars wrap the inner declarator."""
        t = self.peek()
        if self.at_punct("*"):
            self.advance()
            while self.peek().type == IDENT and self.peek().value in QUALIFIER_KEYWORDS:
                self.advance()
            inner, name = self.parse_declarator()
            return _Node("pointer_declarator", children=[inner],
                         span=(t.start, inner.span[1])), name
        if self.at_punct("(") :
            # grouped declarator, e.g. function pointers
            self.advance()
            inner, name = self.parse_declarator()
            self.expect_punct(")")
            node = inner
        elif t.type == IDENT and t.value not in STATEMENT_KEYWORDS:
            self.advance()
            node = _Node("identifier", text=t.value, span=(t.start, t.end))
            name = t.value
        else:
            raise _Stall("expected declarator")
        while True:
            if self.at_punct("("):
                params = self.parse_parameter_list()
                node = _Node("function_declarator", children=[node, params],
                             span=(node.span[0], params.span[1]))
            elif self.at_punct("["):
                self.advance()
                kids = [node]
                if not self.at_punct("]"):
                    kids.append(self.parse_assignment_expression())
                end_tok = self.expect_punct("]")
                node = _Node("array_declarator", children=kids,
                             span=(node.span[0], end_tok.end))
            else:
                break
        return node, name

    def parse_parameter_list(self) -> _Node:
        open_tok = self.expect_punct("(")
        params = []
        while not self.at_punct(")") and self.peek().type != EOF:
            if self.at_punct("...") :
                t = self.advance()
                params.append(_Node("variadic_parameter", span=(t.start, t.end)))
            else:
                before = self.pos
                try:
                    params.append(self.parse_parameter_declaration())
                except _Stall:
                    self.pos = before
                    params.append(self.param_error())
            if self.at_punct(","):
                self.advance()
            elif not self.at_punct(")"):
                break
        end_tok = self.peek()
        if self.at_punct(")"):
            self.advance()
        return _Node("parameter_list", children=params, span=(open_tok.start, end_tok.end))

    def param_error(self) -> _Node:
        self.had_error = True
        start_tok = self.peek()
        depth = 0
        while self.peek().type != EOF:
            t = self.peek()
            if t.type == PUNCT:
                if t.value == "(":
                    depth += 1
                elif t.value == ")":
                    if depth == 0:
                        break
                    depth -= 1
                elif t.value == "," and depth == 0:
                    break
            self.advance()
        end = self.tokens[self.pos - 1].end if self.pos else start_tok.end
        return _Node("error", text=self.source[start_tok.start:end],
                     span=(start_tok.start, end))

    def parse_parameter_declaration(self) -> _Node:
        start_tok = self.peek()
        # bare `void`
        if self.at_ident("void") and self.at_punct(")", 1):
            t = self.advance()
            return _Node("parameter_declaration",
                         children=[_Node("primitive_type", text="void", span=(t.start, t.end))],
                         span=(t.start, t.end))
        specifiers = self.parse_declaration_specifiers()
        children = list(specifiers)
        if self.at_punct("*") and self._abstract_pointer_ahead():
            first = self.peek()
            end = first.end
            while self.at_punct("*"):
                end = self.advance().end
            children.append(_Node("abstract_pointer_declarator",
                                  span=(first.start, end)))
        elif not (self.at_punct(",") or self.at_punct(")")):
            declarator, _ = self.parse_declarator()
            children.append(declarator)
        return _Node("parameter_declaration", children=children,
                     span=(start_tok.start, children[-1].span[1]))

    def _abstract_pointer_ahead(self) -> bool:
        i = 0
        while self.at_punct("*", i):
            i += 1
        return i > 0 and (self.at_punct(",", i) or self.at_punct(")", i))

    def wrap_init_declarator(self, declarator: _Node) -> _Node:
        if self.at_punct("="):
            op = self.advance()
            value = self.parse_initializer()
            return _Node("init_declarator",
                         children=[declarator,
                                   _Node("operator", text="=", span=(op.start, op.end)),
                                   value],
                         span=(declarator.span[0], value.span[1]))
        return declarator

    def parse_initializer(self) -> _Node:
        if self.at_punct("{"):
            open_tok = self.advance()
            items = []
            while not self.at_punct("}") and self.peek().type != EOF:
                items.append(self.parse_initializer())
                if self.at_punct(","):
                    self.advance()
                elif not self.at_punct("}"):
                    break
            end_tok = self.peek()
            if self.at_punct("}"):
                self.advance()
            return _Node("initializer_list", children=items,
                         span=(open_tok.start, end_tok.end))
        return self.parse_assignment_expression()

    # -- statements ----------------------------------------------------------

    def parse_compound_statement(self) -> _Node:
        open_tok = self.expect_punct("{")
        children = []
        while not self.at_punct("}") and self.peek().type != EOF:
            before = self.pos
            stmt = self.parse_statement()
            if stmt is not None:
                children.append(stmt)
            if self.pos == before:
                self.advance()
        end_tok = self.peek()
        if self.at_punct("}"):
            self.advance()
        return _Node("compound_statement", children=children,
                     span=(open_tok.start, end_tok.end))

    def parse_statement(self) -> _Node | None:
        t = self.peek()
        if t.type == PREPROC:
            self.advance()
            return _Node("preproc_directive", text=t.value, span=(t.start, t.end))
        if self.at_punct(";"):
            self.advance()
            return None
        if self.at_punct("{"):
            return self.parse_compound_statement()
        if t.type == IDENT:
            handler = {
                "if": self.parse_if, "while": self.parse_while, "do": self.parse_do,
                "for": self.parse_for, "switch": self.parse_switch,
                "case": self.parse_case, "default": self.parse_case,
                "return": self.parse_return, "break": self.parse_jump,
                "continue": self.parse_jump, "goto": self.parse_goto,
            }.get(t.value)
            if handler is not None:
                before = self.pos
                try:
                    return handler()
                except _Stall:
                    self.pos = before
                    return self.error_node()
            if self.peek(1).type == PUNCT and self.peek(1).value == ":" \
                    and not self.at_punct("::", 1):
                label = self.advance()
                self.advance()  # ':'
                kids = [_Node("statement_identifier", text=label.value,
                              span=(label.start, label.end))]
                if not self.at_punct("}"):
                    stmt = self.parse_statement()
                    if stmt is not None:
                        kids.append(stmt)
                return _Node("labeled_statement", children=kids,
                             span=(label.start, kids[-1].span[1]))
        before = self.pos
        if self.at_declaration_start():
            try:
                return self.parse_local_declaration()
            except _Stall:
                self.pos = before
        try:
            expr = self.parse_expression()
            self.expect_punct(";")
            return _Node("expression_statement", children=[expr],
                         span=(expr.span[0], self.tokens[self.pos - 1].end))
        except _Stall:
            self.pos = before
            return self.error_node()

    def parse_local_declaration(self) -> _Node:
        start_tok = self.peek()
        is_typedef = self.at_ident("typedef")
        specifiers = self.parse_declaration_specifiers()
        if self.at_punct(";"):
            self.advance()
            return _Node("declaration", children=specifiers,
                         span=(start_tok.start, self.tokens[self.pos - 1].end))
        declarator, name = self.parse_declarator()
        declarators = [self.wrap_init_declarator(declarator)]
        names = [name]
        while self.at_punct(","):
            self.advance()
            d, nm = self.parse_declarator()
            declarators.append(self.wrap_init_declarator(d))
            names.append(nm)
        self.expect_punct(";")
        if is_typedef:
            self.typedef_names.update(n for n in names if n)
        return _Node("declaration", children=specifiers + declarators,
                     span=(start_tok.start, self.tokens[self.pos - 1].end))

    def parse_condition(self) -> _Node:
        open_tok = self.expect_punct("(")
        expr = self.parse_expression()
        end_tok = self.expect_punct(")")
        return _Node("parenthesized_expression", children=[expr],
                     span=(open_tok.start, end_tok.end))

    def parse_if(self) -> _Node:
        kw = self.advance()
        cond = self.parse_condition()
        consequence = self.parse_statement()
        kids = [cond]
        if consequence is not None:
            kids.append(consequence)
        end = kids[-1].span[1]
        if self.at_ident("else"):
            else_kw = self.advance()
            alt = self.parse_statement()
            alt_kids = [alt] if alt is not None else []
            else_node = _Node("else_clause", children=alt_kids,
                              span=(else_kw.start, alt.span[1] if alt else else_kw.end))
            kids.append(else_node)
            end = else_node.span[1]
        return _Node("if_statement", children=kids, span=(kw.start, end))

    def parse_while(self) -> _Node:
        kw = self.advance()
        cond = self.parse_condition()
        body = self.parse_statement()
        kids = [cond] + ([body] if body is not None else [])
        return _Node("while_statement", children=kids, span=(kw.start, kids[-1].span[1]))

    def parse_do(self) -> _Node:
        kw = self.advance()
        body = self.parse_statement()
        kids = [body] if body is not None else []
        if self.at_ident("while"):
            self.advance()
            cond = self.parse_condition()
            kids.append(cond)
        if self.at_punct(";"):
            self.advance()
        return _Node("do_statement", children=kids,
                     span=(kw.start, self.tokens[self.pos - 1].end))

    def parse_for(self) -> _Node:
        kw = self.advance()
        self.expect_punct("(")
        kids: list[_Node] = []
        if not self.at_punct(";"):
            if self.at_declaration_start():
                kids.append(self.parse_local_declaration())
            else:
                kids.append(self.parse_expression())
                self.expect_punct(";")
        else:
            self.advance()
        if not self.at_punct(";"):
            kids.append(self.parse_expression())
        self.expect_punct(";")
        if not self.at_punct(")"):
            kids.append(self.parse_expression())
        self.expect_punct(")")
        body = self.parse_statement()
        if body is not None:
            kids.append(body)
        return _Node("for_statement", children=kids,
                     span=(kw.start, self.tokens[self.pos - 1].end))

    def parse_switch(self) -> _Node:
        kw = self.advance()
        cond = self.parse_condition()
        body = self.parse_statement()
        kids = [cond] + ([body] if body is not None else [])
        return _Node("switch_statement", children=kids, span=(kw.start, kids[-1].span[1]))

    def parse_case(self) -> _Node:
        kw = self.advance()
        kids: list[_Node] = []
        if kw.value == "case":
            kids.append(self.parse_expression())
        self.expect_punct(":")
        while not (self.at_ident("case") or self.at_ident("default")
                   or self.at_punct("}") or self.peek().type == EOF):
            before = self.pos
            stmt = self.parse_statement()
            if stmt is not None:
                kids.append(stmt)
            if self.pos == before:
                break
        end = kids[-1].span[1] if kids else self.tokens[self.pos - 1].end
        return _Node("case_statement", children=kids, span=(kw.start, end))

    def parse_return(self) -> _Node:
        kw = self.advance()
        kids = []
        if not self.at_punct(";"):
            kids.append(self.parse_expression())
        self.expect_punct(";")
        return _Node("return_statement", children=kids,
                     span=(kw.start, self.tokens[self.pos - 1].end))

    def parse_jump(self) -> _Node:
        kw = self.advance()
        kind = "break_statement" if kw.value == "break" else "continue_statement"
        if self.at_punct(";"):
            self.advance()
        return _Node(kind, span=(kw.start, self.tokens[self.pos - 1].end))

    def parse_goto(self) -> _Node:
        kw = self.advance()
        kids = []
        if self.peek().type == IDENT:
            t = self.advance()
            kids.append(_Node("statement_identifier", text=t.value, span=(t.start, t.end)))
        if self.at_punct(";"):
            self.advance()
        return _Node("goto_statement", children=kids,
                     span=(kw.start, self.tokens[self.pos - 1].end))

    # -- expressions -----------------------------------------------------------

    def parse_expression(self) -> _Node:
        first = self.parse_assignment_expression()
        if not self.at_punct(","):
            return first
        kids = [first]
        while self.at_punct(","):
            self.advance()
            kids.append(self.parse_assignment_expression())
        return _Node("comma_expression", children=kids,
                     span=(first.span[0], kids[-1].span[1]))

    def parse_assignment_expression(self) -> _Node:
        left = self.parse_conditional_expression()
        t = self.peek()
        if t.type == PUNCT and t.value in ASSIGN_OPS:
            self.advance()
            op = _Node("operator", text=t.value, span=(t.start, t.end))
            right = self.parse_assignment_expression()
            return _Node("assignment_expression", children=[left, op, right],
                         span=(left.span[0], right.span[1]))
        return left

    def parse_conditional_expression(self) -> _Node:
        cond = self.parse_binary_expression(1)
        if self.at_punct("?"):
            self.advance()
            consequence = self.parse_expression()
            self.expect_punct(":")
            alternative = self.parse_conditional_expression()
            return _Node("conditional_expression",
                         children=[cond, consequence, alternative],
                         span=(cond.span[0], alternative.span[1]))
        return cond

    def parse_binary_expression(self, min_prec: int) -> _Node:
        left = self.parse_unary_expression()
        while True:
            t = self.peek()
            prec = BINARY_PRECEDENCE.get(t.value) if t.type == PUNCT else None
            if prec is None or prec < min_prec:
                return left
            self.advance()
            op = _Node("operator", text=t.value, span=(t.start, t.end))
            right = self.parse_binary_expression(prec + 1)
            left = _Node("binary_expression", children=[left, op, right],
                         span=(left.span[0], right.span[1]))

    def at_cast_expression(self) -> bool:
        """Conservative lookahead for `(type [* ...]) <operand>`."""
        if not self.at_punct("("):
            return False
        i = 1
        t = self.peek(i)
        if t.type != IDENT:
            return False
        if not (t.value in TYPE_KEYWORDS or t.value in TAG_KEYWORDS
                or t.value in QUALIFIER_KEYWORDS or self.looks_like_type(t)):
            return False
        while self.peek(i).type == IDENT and (
                self.peek(i).value in TYPE_KEYWORDS
                or self.peek(i).value in QUALIFIER_KEYWORDS
                or self.peek(i).value in TAG_KEYWORDS
                or self.looks_like_type(self.peek(i))):
            i += 1
        while self.at_punct("*", i):
            i += 1
        if not self.at_punct(")", i):
            return False
        nxt = self.peek(i + 1)
        if nxt.type in (IDENT, NUMBER, STRING, CHAR):
            return nxt.type != IDENT or nxt.value not in BINARY_PRECEDENCE
        return nxt.type == PUNCT and nxt.value in ("(", "*", "&", "~", "!", "-", "+")

    def parse_unary_expression(self) -> _Node:
        t = self.peek()
        if t.type == PUNCT and t.value in ("++", "--"):
            self.advance()
            op = _Node("operator", text=t.value, span=(t.start, t.end))
            operand = self.parse_unary_expression()
            return _Node("update_expression", children=[op, operand],
                         span=(t.start, operand.span[1]))
        if t.type == PUNCT and t.value in UNARY_OPS:
            self.advance()
            op = _Node("operator", text=t.value, span=(t.start, t.end))
            operand = self.parse_unary_expression()
            return _Node("unary_expression", children=[op, operand],
                         span=(t.start, operand.span[1]))
        if t.type == PUNCT and t.value in POINTER_OPS:
            self.advance()
            op = _Node("operator", text=t.value, span=(t.start, t.end))
            operand = self.parse_unary_expression()
            return _Node("pointer_expression", children=[op, operand],
                         span=(t.start, operand.span[1]))
        if self.at_ident("sizeof"):
            kw = self.advance()
            if self.at_cast_expression() or (self.at_punct("(") and self._paren_is_type()):
                self.advance()
                type_node = self.parse_type_descriptor()
                end_tok = self.expect_punct(")")
                return _Node("sizeof_expression", children=[type_node],
                             span=(kw.start, end_tok.end))
            operand = self.parse_unary_expression()
            return _Node("sizeof_expression", children=[operand],
                         span=(kw.start, operand.span[1]))
        if self.at_cast_expression():
            open_tok = self.advance()
            type_node = self.parse_type_descriptor()
            self.expect_punct(")")
            operand = self.parse_unary_expression()
            return _Node("cast_expression", children=[type_node, operand],
                         span=(open_tok.start, operand.span[1]))
        return self.parse_postfix_expression()

    def _paren_is_type(self) -> bool:
        t = self.peek(1)
        if t.type != IDENT:
            return False
        if not (t.value in TYPE_KEYWORDS or t.value in TAG_KEYWORDS
                or self.looks_like_type(t)):
            return False
        i = 2
        while self.peek(i).type == IDENT or self.at_punct("*", i):
            i += 1
        return self.at_punct(")", i)

    def parse_type_descriptor(self) -> _Node:
        start_tok = self.peek()
        parts = self.parse_declaration_specifiers()
        end = parts[-1].span[1]
        while self.at_punct("*"):
            t = self.advance()
            parts.append(_Node("abstract_pointer_declarator", span=(t.start, t.end)))
            end = t.end
        return _Node("type_descriptor", children=parts, span=(start_tok.start, end))

    def parse_postfix_expression(self) -> _Node:
        node = self.parse_primary_expression()
        while True:
            t = self.peek()
            if self.at_punct("("):
                args = self.parse_argument_list()
                node = _Node("call_expression", children=[node, args],
                             span=(node.span[0], args.span[1]))
            elif self.at_punct("["):
                self.advance()
                index = self.parse_expression()
                end_tok = self.expect_punct("]")
                node = _Node("subscript_expression", children=[node, index],
                             span=(node.span[0], end_tok.end))
            elif self.at_punct(".") or self.at_punct("->"):
                self.advance()
                if self.peek().type != IDENT:
                    raise _Stall("expected field name")
                f = self.advance()
                field = _Node("field_identifier", text=f.value, span=(f.start, f.end))
                node = _Node("field_expression", children=[node, field],
                             span=(node.span[0], f.end))
            elif t.type == PUNCT and t.value in ("++", "--"):
                self.advance()
                op = _Node("operator", text=t.value, span=(t.start, t.end))
                node = _Node("update_expression", children=[node, op],
                             span=(node.span[0], t.end))
            else:
                return node

    def parse_argument_list(self) -> _Node:
        open_tok = self.expect_punct("(")
        args = []
        while not self.at_punct(")") and self.peek().type != EOF:
            args.append(self.parse_assignment_expression())
            if self.at_punct(","):
                self.advance()
            elif not self.at_punct(")"):
                raise _Stall("unterminated argument list")
        end_tok = self.expect_punct(")")
        return _Node("argument_list", children=args, span=(open_tok.start, end_tok.end))

    def parse_primary_expression(self) -> _Node:
        t = self.peek()
        if t.type == NUMBER:
            self.advance()
            return _Node("number_literal", text=t.value, span=(t.start, t.end))
        if t.type == STRING:
            self.advance()
            end = t.end
            text = t.value
            while self.peek().type == STRING:  # adjacent literal concatenation
                nxt = self.advance()
                text += nxt.value
                end = nxt.end
            return _Node("string_literal", text=text, span=(t.start, end))
        if t.type == CHAR:
            self.advance()
            return _Node("char_literal", text=t.value, span=(t.start, t.end))
        if t.type == IDENT and t.value not in STATEMENT_KEYWORDS:
            self.advance()
            return _Node("identifier", text=t.value, span=(t.start, t.end))
        if self.at_punct("("):
            open_tok = self.advance()
            expr = self.parse_expression()
            end_tok = self.expect_punct(")")
            return _Node("parenthesized_expression", children=[expr],
                         span=(open_tok.start, end_tok.end))
        if self.at_punct("{"):
            return self.parse_initializer()
        raise _Stall(f"unexpected token {t.value!r}")


def _flatten(root: _Node) -> SyntaxTree:
    nodes: list[SyntaxNode] = []

    def visit(n: _Node) -> int:
        idx = len(nodes)
        nodes.append(SyntaxNode(kind=n.kind, text=n.text, span=n.span))
        nodes[idx].children = [visit(c) for c in n.children]
        return idx

    visit(root)
    return SyntaxTree(nodes=nodes)


def parse_function(source: str, language_hint: str = "c") -> SyntaxTree:
    """Parse one function (or snippet) into a SyntaxTree.

    Raises ParseFailure when nothing but error nodes (or nothing at all)
    could be recognized at the top level.
    """
    if not source or not source.strip():
        raise ParseFailure("empty source")
    parser = Parser(source, language_hint)
    root = parser.parse_translation_unit()
    substantive = [c for c in root.children if c.kind not in ("error", "preproc_directive")]
    if not substantive:
        raise ParseFailure("no recognizable function structure")
    tree = _flatten(root)
    tree.has_errors = parser.had_error
    return tree
