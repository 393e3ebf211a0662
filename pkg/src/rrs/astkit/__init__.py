from .tree import SyntaxNode, SyntaxTree, build_tree, node_label, node_multiset, to_sexpr
from .parser import parse_function

__all__ = [
    "SyntaxNode",
    "SyntaxTree",
    "build_tree",
    "node_label",
    "node_multiset",
    "to_sexpr",
    "parse_function",
]
