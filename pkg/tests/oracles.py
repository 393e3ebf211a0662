"""Independent reference implementations used only to check the real ones.

Nothing here shares code with rrs.treediff or rrs.kernels: the edit
distance is computed by plain recursion over forests (and, for very small
trees, by explicit enumeration of every valid mapping), the LCS by
exhaustive subsequence search.
"""

from __future__ import annotations

import random
from functools import lru_cache

from rrs.astkit.tree import SyntaxTree, build_tree, node_label


# -- tuple-tree helpers ----------------------------------------------------


def tree_to_tuples(tree: SyntaxTree, index: int | None = None):
    """(label, (child, ...)) nested tuples; labels hashable."""
    if index is None:
        index = tree.root_index
    node = tree.nodes[index]
    return (node_label(node), tuple(tree_to_tuples(tree, c) for c in node.children))


def tuple_size(t) -> int:
    return 1 + sum(tuple_size(c) for c in t[1])


# -- oracle 1: memoized forest recursion ------------------------------------


@lru_cache(maxsize=None)
def _forest_dist(f1, f2) -> int:
    if not f1 and not f2:
        return 0
    if not f1:
        return sum(tuple_size(t) for t in f2)
    if not f2:
        return sum(tuple_size(t) for t in f1)
    t1, rest1 = f1[-1], f1[:-1]
    t2, rest2 = f2[-1], f2[:-1]
    delete = _forest_dist(rest1 + t1[1], f2) + 1
    insert = _forest_dist(f1, rest2 + t2[1]) + 1
    rename = 0 if t1[0] == t2[0] else 1
    match = _forest_dist(rest1, rest2) + _forest_dist(t1[1], t2[1]) + rename
    return min(delete, insert, match)


def ted_recursive(t1: SyntaxTree, t2: SyntaxTree) -> int:
    """Unit-cost ordered TED by direct recursion over forests."""
    return _forest_dist((tree_to_tuples(t1),), (tree_to_tuples(t2),))


# -- oracle 2: explicit enumeration of all valid mappings --------------------


def _flatten_preorder(t, out, parent_path):
    idx = len(out)
    out.append((t[0], set(parent_path)))
    for c in t[1]:
        _flatten_preorder(c, out, parent_path + [idx])


def ted_enumerated(t1: SyntaxTree, t2: SyntaxTree) -> int:
    """Unit-cost ordered TED by trying every order/ancestry-consistent mapping.

    Exponential; only usable for trees of a handful of nodes.
    """
    nodes1: list = []
    nodes2: list = []
    _flatten_preorder(tree_to_tuples(t1), nodes1, [])
    _flatten_preorder(tree_to_tuples(t2), nodes2, [])
    n1, n2 = len(nodes1), len(nodes2)

    def consistent(pairs, a, b):
        for c, d in pairs:
            anc_ac = c in nodes1[a][1]
            anc_ca = a in nodes1[c][1]
            anc_bd = d in nodes2[b][1]
            anc_db = b in nodes2[d][1]
            if anc_ac != anc_bd or anc_ca != anc_db:
                return False
            if not (anc_ac or anc_ca) and (a < c) != (b < d):
                return False
        return True

    best = [n1 + n2]

    def search(i, pairs, used2, renames):
        if i == n1:
            m = len(pairs)
            cost = renames + (n1 - m) + (n2 - m)
            best[0] = min(best[0], cost)
            return
        search(i + 1, pairs, used2, renames)  # leave node i unmapped
        for j in range(n2):
            if j in used2 or not consistent(pairs, i, j):
                continue
            rename = 0 if nodes1[i][0] == nodes2[j][0] else 1
            search(i + 1, pairs + [(i, j)], used2 | {j}, renames + rename)

    search(0, [], set(), 0)
    return best[0]


# -- LCS oracle ---------------------------------------------------------------


def lcs_naive(a, b) -> int:
    """LCS length by plain recursion (no table)."""

    @lru_cache(maxsize=None)
    def go(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + go(i + 1, j + 1)
        return max(go(i + 1, j), go(i, j + 1))

    return go(0, 0)


# -- random ordered labeled trees ----------------------------------------------


def random_tree(rng: random.Random, n_nodes: int,
                internal_kinds=("blk", "seq", "call", "bin", "loop"),
                leaf_texts=("a", "b", "c", "d")) -> SyntaxTree:
    """Random ordered tree via random parent attachment."""
    parents = [-1] + [rng.randrange(i) for i in range(1, n_nodes)]
    children: list[list[int]] = [[] for _ in range(n_nodes)]
    for i in range(1, n_nodes):
        children[parents[i]].append(i)

    def nested(i):
        if children[i]:
            return (rng.choice(internal_kinds), [nested(c) for c in children[i]])
        return ("leaf", rng.choice(leaf_texts))

    return build_tree(nested(0))


def random_tree_pair(rng: random.Random, max_nodes: int = 8) -> tuple[SyntaxTree, SyntaxTree]:
    n1 = rng.randint(1, max_nodes)
    n2 = rng.randint(1, max_nodes)
    return random_tree(rng, n1), random_tree(rng, n2)
