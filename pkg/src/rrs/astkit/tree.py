"""Ordered labeled syntax trees.

Nodes are stored in a flat pre-order array; children are index lists.
Labels follow the convention used by every structural metric downstream:
internal nodes are labeled by their grammar kind alone, leaves by
(kind, token text), so identifier/literal renames count as label changes
while internal matching stays purely structural.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field


@dataclass
class SyntaxNode:
    kind: str
    text: str = ""
    children: list[int] = field(default_factory=list)
    span: tuple[int, int] = (0, 0)

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass
class SyntaxTree:
    nodes: list[SyntaxNode]
    root_index: int = 0
    has_errors: bool = False

    def __len__(self) -> int:
        return len(self.nodes)

    def node_count(self) -> int:
        return len(self.nodes)

    def root(self) -> SyntaxNode:
        return self.nodes[self.root_index]

    def preorder(self):
        """Yield (index, node) in pre-order; the storage order is pre-order."""
        for i, n in enumerate(self.nodes):
            yield i, n

    def subtree_indices(self, index: int) -> list[int]:
        """All node indices in the subtree rooted at `index`, pre-order."""
        out = []
        stack = [index]
        while stack:
            i = stack.pop()
            out.append(i)
            stack.extend(reversed(self.nodes[i].children))
        return out

    def subtree_size(self, index: int) -> int:
        return len(self.subtree_indices(index))

    def extract_subtree(self, index: int) -> SyntaxTree:
        """Copy the subtree rooted at `index` into a standalone tree."""
        order = self.subtree_indices(index)
        remap = {old: new for new, old in enumerate(order)}
        nodes = []
        for old in order:
            n = self.nodes[old]
            nodes.append(
                SyntaxNode(
                    kind=n.kind,
                    text=n.text,
                    children=[remap[c] for c in n.children],
                    span=n.span,
                )
            )
        return SyntaxTree(nodes=nodes, root_index=0, has_errors=self.has_errors)

    def parent_map(self) -> list[int]:
        """parent index for each node, -1 for the root."""
        parents = [-1] * len(self.nodes)
        for i, n in enumerate(self.nodes):
            for c in n.children:
                parents[c] = i
        return parents


def node_label(node: SyntaxNode):
    """Label used for structural equality: kind for internal, (kind, text) for leaves."""
    if node.is_leaf:
        return (node.kind, node.text)
    return node.kind


def node_multiset(tree: SyntaxTree) -> Counter:
    """Multiset of labels over all nodes, collected in pre-order."""
    return Counter(node_label(n) for _, n in tree.preorder())


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_sexpr(tree: SyntaxTree, index: int | None = None) -> str:
    """Deterministic S-expression serialization for fixtures and debugging."""
    if index is None:
        index = tree.root_index
    node = tree.nodes[index]
    if node.is_leaf:
        if node.text:
            return f"({node.kind} {_quote(node.text)})"
        return f"({node.kind})"
    inner = " ".join(to_sexpr(tree, c) for c in node.children)
    return f"({node.kind} {inner})"


def build_tree(spec) -> SyntaxTree:
    """Build a SyntaxTree from nested tuples: (kind, text) leaf or (kind, [children]).

    Test helper shape; spans are left at (0, 0).
    """
    nodes: list[SyntaxNode] = []

    def add(item) -> int:
        kind, rest = item
        idx = len(nodes)
        nodes.append(SyntaxNode(kind=kind))
        if isinstance(rest, str):
            nodes[idx].text = rest
        else:
            nodes[idx].children = [add(child) for child in rest]
        return idx

    add(spec)
    return SyntaxTree(nodes=nodes)
