"""Tree differencing: exact ordered-tree edit distance, change-region
isolation, and the four structural similarity metrics.

The edit distance is Zhang-Shasha (keyroots + forest DP) over labels that
treat internal nodes structurally (kind only) and leaves lexically
(kind + text). Change regions come from a two-phase matcher: exact
subtree-hash anchoring (largest first, position-free) followed by
positional container recovery down the spine, so statement moves anchor
cheaply while the ordered edit model has to pay for them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .astkit.tree import SyntaxTree, node_label, node_multiset
from .errors import TreeBudgetExceeded
from .kernels import lcs_dp, ted_dp

DEFAULT_TED_BUDGET = 4_000_000  # max |t1| * |t2| before the DP is refused


@dataclass(frozen=True)
class EditCostModel:
    """Unit-cost edit model; rename of equal labels always costs 0."""

    insert_cost: int = 1
    delete_cost: int = 1
    rename_cost: int = 1


UNIT_COSTS = EditCostModel()


@dataclass
class ChangeRegion:
    vuln_subtree_root: int
    benign_subtree_root: int
    vuln_size: int
    benign_size: int


@dataclass
class StructuralScores:
    ted_ops: float
    nted_similarity: float
    lts_similarity: float
    jaccard: float
    align_sim: float


# -- label interning and postorder arrays -------------------------------------


class _Interner:
    def __init__(self):
        self.table: dict = {}

    def id_of(self, label) -> int:
        got = self.table.get(label)
        if got is None:
            got = len(self.table)
            self.table[label] = got
        return got


def _postorder(tree: SyntaxTree) -> list[int]:
    order: list[int] = []
    stack: list[tuple[int, bool]] = [(tree.root_index, False)]
    while stack:
        idx, expanded = stack.pop()
        if expanded:
            order.append(idx)
        else:
            stack.append((idx, True))
            for c in reversed(tree.nodes[idx].children):
                stack.append((c, False))
    return order


def _tree_arrays(tree: SyntaxTree, interner: _Interner):
    """Postorder label/lmd/keyroot arrays for the DP kernel."""
    order = _postorder(tree)
    pos = {node: p for p, node in enumerate(order)}
    n = len(order)
    labels = np.empty(n, dtype=np.int64)
    lmd = np.empty(n, dtype=np.int64)
    for p, node_idx in enumerate(order):
        node = tree.nodes[node_idx]
        labels[p] = interner.id_of(node_label(node))
        if node.children:
            lmd[p] = lmd[pos[node.children[0]]]
        else:
            lmd[p] = p
    keyroot_by_lmd: dict[int, int] = {}
    for p in range(n):
        keyroot_by_lmd[int(lmd[p])] = p  # postorder scan keeps the max
    keyroots = np.array(sorted(keyroot_by_lmd.values()), dtype=np.int64)
    return labels, lmd, keyroots


# -- edit distance -------------------------------------------------------------


def ted(t1: SyntaxTree, t2: SyntaxTree, cost: EditCostModel = UNIT_COSTS,
        budget: int = DEFAULT_TED_BUDGET) -> int:
    """Minimum-cost edit script value under the ordered-tree edit model."""
    n1, n2 = len(t1), len(t2)
    if n1 * n2 > budget:
        raise TreeBudgetExceeded(f"{n1} x {n2} nodes exceeds budget {budget}")
    interner = _Interner()
    lab1, lmd1, kr1 = _tree_arrays(t1, interner)
    lab2, lmd2, kr2 = _tree_arrays(t2, interner)
    return int(ted_dp(lab1, lmd1, kr1, lab2, lmd2, kr2,
                      cost.insert_cost, cost.delete_cost, cost.rename_cost))


def nted_similarity(t1: SyntaxTree, t2: SyntaxTree, cost: EditCostModel = UNIT_COSTS,
                    budget: int = DEFAULT_TED_BUDGET) -> float:
    """Global normalized TED similarity: 1 - TED / max(|t1|, |t2|), clamped."""
    value = 1.0 - ted(t1, t2, cost, budget) / max(len(t1), len(t2))
    return min(1.0, max(0.0, value))


# -- subtree matching and change regions ---------------------------------------


def _shape_ids(tree: SyntaxTree, canon: dict) -> list[int]:
    """Collision-free structural id per node: equal ids iff identical subtrees.

    `canon` must be shared between the two trees being compared so ids are
    comparable across them.
    """
    ids = [0] * len(tree)
    for p in _postorder(tree):
        node = tree.nodes[p]
        key = (node_label(node), tuple(ids[c] for c in node.children))
        got = canon.get(key)
        if got is None:
            got = len(canon)
            canon[key] = got
        ids[p] = got
    return ids


class _MatchState:
    """Anchor + container correspondences between two trees."""

    def __init__(self, t1: SyntaxTree, t2: SyntaxTree):
        self.t1 = t1
        self.t2 = t2
        self.map1: dict[int, int] = {}  # t1 node -> t2 node (anchors + containers)
        self.map2: dict[int, int] = {}
        self.anchored1: set[int] = set()
        self.anchored2: set[int] = set()


def _greedy_anchor(state: _MatchState) -> None:
    t1, t2 = state.t1, state.t2
    canon: dict = {}
    ids1 = _shape_ids(t1, canon)
    ids2 = _shape_ids(t2, canon)
    sizes1 = [t1.subtree_size(i) for i in range(len(t1))]
    buckets: dict[int, list[int]] = {}
    for j in range(len(t2)):
        buckets.setdefault(ids2[j], []).append(j)  # pre-order within bucket
    order = sorted(range(len(t1)), key=lambda i: (-sizes1[i], i))
    for i in order:
        if i in state.anchored1:
            continue
        candidates = buckets.get(ids1[i])
        if not candidates:
            continue
        sub1 = t1.subtree_indices(i)
        if any(k in state.anchored1 for k in sub1):
            continue
        for j in candidates:
            if j in state.anchored2:
                continue
            sub2 = t2.subtree_indices(j)
            if any(k in state.anchored2 for k in sub2):
                continue
            for a, b in zip(sub1, sub2):  # identical shape: same pre-order walk
                state.map1[a] = b
                state.map2[b] = a
                state.anchored1.add(a)
                state.anchored2.add(b)
            candidates.remove(j)
            break


def _lcs_align(seq1: list[int], seq2: list[int], compatible) -> list[tuple[int, int]]:
    """Deterministic LCS alignment over child index lists."""
    n, m = len(seq1), len(seq2)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            if compatible(seq1[i], seq2[j]):
                dp[i][j] = dp[i + 1][j + 1] + 1
            else:
                dp[i][j] = max(dp[i + 1][j], dp[i][j + 1])
    out = []
    i = j = 0
    while i < n and j < m:
        if compatible(seq1[i], seq2[j]) and dp[i][j] == dp[i + 1][j + 1] + 1:
            out.append((seq1[i], seq2[j]))
            i += 1
            j += 1
        elif dp[i + 1][j] >= dp[i][j + 1]:
            i += 1
        else:
            j += 1
    return out


def _recover_containers(state: _MatchState) -> None:
    t1, t2 = state.t1, state.t2

    def compatible(c1: int, c2: int) -> bool:
        if c1 in state.anchored1 or c2 in state.anchored2:
            return state.map1.get(c1) == c2
        return node_label(t1.nodes[c1]) == node_label(t2.nodes[c2])

    queue = []
    if t1.root_index not in state.anchored1 and t2.root_index not in state.anchored2:
        state.map1[t1.root_index] = t2.root_index
        state.map2[t2.root_index] = t1.root_index
        queue.append((t1.root_index, t2.root_index))
    while queue:
        p1, p2 = queue.pop()
        kids1 = t1.nodes[p1].children
        kids2 = t2.nodes[p2].children
        for c1, c2 in _lcs_align(kids1, kids2, compatible):
            if c1 in state.anchored1:
                continue
            state.map1[c1] = c2
            state.map2[c2] = c1
            queue.append((c1, c2))


def _match_trees(t1: SyntaxTree, t2: SyntaxTree) -> _MatchState:
    state = _MatchState(t1, t2)
    _greedy_anchor(state)
    _recover_containers(state)
    return state


def _unmatched_regions(tree: SyntaxTree, mapped: dict[int, int]) -> list[int]:
    """Tops of maximal connected unmatched regions, in pre-order."""
    parents = tree.parent_map()
    tops = []
    for i in range(len(tree)):
        if i in mapped:
            continue
        parent = parents[i]
        if parent == -1 or parent in mapped:
            tops.append(i)
    return tops


def isolate_change_regions(t1: SyntaxTree, t2: SyntaxTree) -> list[ChangeRegion]:
    """Paired subtree regions covering every node left unmatched by the matcher.

    Regions within the two trees are paired up under corresponding parents
    by child position; a region with no counterpart pairs with an empty tree
    (encoded as root index -1 and size 0).
    """
    state = _match_trees(t1, t2)
    tops1 = _unmatched_regions(t1, state.map1)
    tops2 = _unmatched_regions(t2, state.map2)
    if not tops1 and not tops2:
        return []
    parents1 = t1.parent_map()
    parents2 = t2.parent_map()

    grouped1: dict[int, list[int]] = {}
    for top in tops1:
        counterpart = state.map1.get(parents1[top], -1)
        grouped1.setdefault(counterpart, []).append(top)
    grouped2: dict[int, list[int]] = {}
    for top in tops2:
        grouped2.setdefault(parents2[top], []).append(top)

    regions: list[ChangeRegion] = []
    seen_parents = sorted(set(grouped1) | set(grouped2))
    for parent2 in seen_parents:
        lhs = grouped1.get(parent2, [])
        rhs = grouped2.get(parent2, [])
        for k in range(max(len(lhs), len(rhs))):
            r1 = lhs[k] if k < len(lhs) else -1
            r2 = rhs[k] if k < len(rhs) else -1
            regions.append(ChangeRegion(
                vuln_subtree_root=r1,
                benign_subtree_root=r2,
                vuln_size=t1.subtree_size(r1) if r1 >= 0 else 0,
                benign_size=t2.subtree_size(r2) if r2 >= 0 else 0,
            ))
    return regions


# -- similarity metrics ---------------------------------------------------------


def lts_similarity(t1: SyntaxTree, t2: SyntaxTree, cost: EditCostModel = UNIT_COSTS,
                   budget: int = DEFAULT_TED_BUDGET) -> float:
    """Localized TED similarity: edit cost of isolated change regions over
    the larger full-tree size.

    The summed region cost is capped at the global TED: the exact global
    script is itself an upper bound on how much really changed, so the
    localized view can never report more.
    """
    regions = isolate_change_regions(t1, t2)
    if not regions:
        return 1.0
    local = 0
    for region in regions:
        if region.vuln_subtree_root < 0:
            local += region.benign_size * cost.insert_cost
        elif region.benign_subtree_root < 0:
            local += region.vuln_size * cost.delete_cost
        else:
            sub1 = t1.extract_subtree(region.vuln_subtree_root)
            sub2 = t2.extract_subtree(region.benign_subtree_root)
            local += ted(sub1, sub2, cost, budget)
    local = min(local, ted(t1, t2, cost, budget))
    value = 1.0 - local / max(len(t1), len(t2))
    return min(1.0, max(0.0, value))


def multiset_jaccard(m1, m2) -> float:
    """|m1 ∩ m2| / |m1 ∪ m2| over multisets (Counter semantics)."""
    intersection = sum((m1 & m2).values())
    union = sum((m1 | m2).values())
    return intersection / union if union else 1.0


def jaccard_similarity(t1: SyntaxTree, t2: SyntaxTree) -> float:
    """Multiset Jaccard over node labels."""
    return multiset_jaccard(node_multiset(t1), node_multiset(t2))


def alignment_similarity(t1: SyntaxTree, t2: SyntaxTree,
                         budget: int = DEFAULT_TED_BUDGET) -> float:
    """LCS of the pre-order label sequences over the larger tree size."""
    n1, n2 = len(t1), len(t2)
    if n1 * n2 > budget:
        raise TreeBudgetExceeded(f"{n1} x {n2} nodes exceeds budget {budget}")
    interner = _Interner()
    seq1 = np.array([interner.id_of(node_label(n)) for _, n in t1.preorder()],
                    dtype=np.int64)
    seq2 = np.array([interner.id_of(node_label(n)) for _, n in t2.preorder()],
                    dtype=np.int64)
    matches = int(lcs_dp(seq1, seq2))
    return matches / max(n1, n2)


def structural_scores(t1: SyntaxTree, t2: SyntaxTree, cost: EditCostModel = UNIT_COSTS,
                      budget: int = DEFAULT_TED_BUDGET) -> StructuralScores:
    """All four Table-style structural metrics in one call."""
    ops = ted(t1, t2, cost, budget)
    nted = min(1.0, max(0.0, 1.0 - ops / max(len(t1), len(t2))))
    return StructuralScores(
        ted_ops=float(ops),
        nted_similarity=nted,
        lts_similarity=lts_similarity(t1, t2, cost, budget),
        jaccard=jaccard_similarity(t1, t2),
        align_sim=alignment_similarity(t1, t2, budget),
    )
