"""Directed trees, ancestor relations, closure/reduction and graph metrics.

Node indices are 0-based everywhere in this module. File formats (see
:mod:`chain_discovery.formats`) use 1-based indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np


class CycleError(ValueError):
    """Raised when an operation requires an acyclic relation."""


@dataclass(frozen=True)
class CausalTree:
    """A rooted directed tree given by its parent map.

    ``parent[j]`` is the unique trigger of node ``j`` or ``None`` for the root.
    """

    parent: tuple[Optional[int], ...]

    def __post_init__(self) -> None:
        parent = tuple(None if p is None else int(p) for p in self.parent)
        object.__setattr__(self, "parent", parent)
        n = len(parent)
        if n == 0:
            raise ValueError("a tree needs at least one node")
        roots = [j for j, p in enumerate(parent) if p is None]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        for j, p in enumerate(parent):
            if p is not None and not 0 <= p < n:
                raise IndexError(f"parent {p} of node {j} out of range")
            if p == j:
                raise ValueError(f"self-loop at node {j}")
        # every node must reach the root by following parents
        order = _bfs_order(parent, roots[0])
        if len(order) != n:
            raise CycleError("parent map contains a cycle or unreachable nodes")
        object.__setattr__(self, "_order", tuple(order))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "CausalTree":
        parent: list[Optional[int]] = [None] * n
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise IndexError(f"edge {(i, j)} out of range for n={n}")
            if parent[j] is not None:
                raise ValueError(f"node {j} has more than one parent")
            parent[j] = i
        return cls(tuple(parent))

    @classmethod
    def from_chains(cls, n: int, chains: Iterable[Iterable[int]], one_based: bool = True) -> "CausalTree":
        """Build from path listings such as ``[[3, 4, 1, 2]]``."""
        off = 1 if one_based else 0
        edges = []
        for chain in chains:
            chain = [c - off for c in chain]
            edges.extend(zip(chain[:-1], chain[1:]))
        return cls.from_edges(n, edges)

    @property
    def n(self) -> int:
        return len(self.parent)

    @property
    def root(self) -> int:
        return self._order[0]  # type: ignore[attr-defined]

    @property
    def order(self) -> tuple[int, ...]:
        """Topological (breadth-first from the root) node order."""
        return self._order  # type: ignore[attr-defined]

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return frozenset((p, j) for j, p in enumerate(self.parent) if p is not None)

    def children(self, i: int) -> list[int]:
        return [j for j, p in enumerate(self.parent) if p == i]

    def depth(self, j: int) -> int:
        """Number of nodes on the root-to-``j`` path, ``j`` included."""
        return len(ancestors(self, j)) + 1

    def to_digraph(self) -> "Digraph":
        return Digraph(self.n, self.edges)


def _bfs_order(parent: tuple[Optional[int], ...], root: int) -> list[int]:
    kids: list[list[int]] = [[] for _ in parent]
    for j, p in enumerate(parent):
        if p is not None:
            kids[p].append(j)
    order = [root]
    k = 0
    while k < len(order):
        order.extend(kids[order[k]])
        k += 1
    return order


@dataclass(frozen=True)
class Digraph:
    """A simple directed graph (no self-loops, cycles allowed)."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        edges = frozenset((int(i), int(j)) for i, j in self.edges)
        for i, j in edges:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise IndexError(f"edge {(i, j)} out of range for n={self.n}")
            if i == j:
                raise ValueError(f"self-loop at node {i}")
        object.__setattr__(self, "edges", edges)

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges:
            a[i, j] = True
        return a

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


class AncestorMatrix:
    """Boolean relation ``a[i, j] = 1`` iff ``j`` is (claimed) downstream of ``i``."""

    __slots__ = ("a",)

    def __init__(self, a: np.ndarray):
        a = np.array(a, dtype=bool)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"ancestor matrix must be square, got shape {a.shape}")
        np.fill_diagonal(a, False)
        a.setflags(write=False)
        self.a = a

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def pairs(self) -> set[tuple[int, int]]:
        return {(int(i), int(j)) for i, j in zip(*np.nonzero(self.a))}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AncestorMatrix) and np.array_equal(self.a, other.a)

    def __repr__(self) -> str:
        return f"AncestorMatrix(n={self.n}, pairs={sorted(self.pairs())})"


@dataclass(frozen=True)
class GraphMetrics:
    precision: float
    recall: float
    f1: float
    shd: int
    skeleton_shd: int


def _check_node(n: int, i: int) -> None:
    if not 0 <= i < n:
        raise IndexError(f"node {i} out of range for n={n}")


def descendants(tree: CausalTree, i: int) -> set[int]:
    _check_node(tree.n, i)
    kids: list[list[int]] = [[] for _ in range(tree.n)]
    for j, p in enumerate(tree.parent):
        if p is not None:
            kids[p].append(j)
    out: set[int] = set()
    stack = list(kids[i])
    while stack:
        j = stack.pop()
        out.add(j)
        stack.extend(kids[j])
    return out


def ancestors(tree: CausalTree, j: int) -> set[int]:
    _check_node(tree.n, j)
    out: set[int] = set()
    p = tree.parent[j]
    while p is not None:
        out.add(p)
        p = tree.parent[p]
    return out


def true_ancestor_matrix(tree: CausalTree) -> AncestorMatrix:
    a = np.zeros((tree.n, tree.n), dtype=bool)
    for j in range(tree.n):
        for i in ancestors(tree, j):
            a[i, j] = True
    return AncestorMatrix(a)


def transitive_closure(a: np.ndarray) -> np.ndarray:
    """Warshall closure of a boolean adjacency matrix (diagonal kept as computed)."""
    c = np.array(a, dtype=bool)
    for k in range(c.shape[0]):
        c |= np.outer(c[:, k], c[k, :])
    return c


def is_acyclic(a: np.ndarray) -> bool:
    return not transitive_closure(a).diagonal().any()


def transitive_reduction(rel: AncestorMatrix) -> Digraph:
    """Minimal edge set with the same transitive closure as ``rel``.

    Raises :class:`CycleError` if ``rel`` contains a directed cycle.
    """
    c = transitive_closure(rel.a)
    if c.diagonal().any():
        raise CycleError("relation is cyclic; break cycles before reducing")
    ci = c.astype(np.int64)
    redundant = (ci @ ci) > 0
    keep = c & ~redundant
    return Digraph(rel.n, frozenset((int(i), int(j)) for i, j in zip(*np.nonzero(keep))))


def _find_cycle(a: np.ndarray) -> Optional[list[int]]:
    """Return the node sequence of some directed cycle, scanning in index order."""
    n = a.shape[0]
    succ = [np.flatnonzero(a[u]).tolist() for u in range(n)]
    color = [0] * n  # 0 white, 1 on stack, 2 done
    for s in range(n):
        if color[s]:
            continue
        path = [s]
        iters = [iter(succ[s])]
        color[s] = 1
        while path:
            v = next(iters[-1], None)
            if v is None:
                color[path.pop()] = 2
                iters.pop()
            elif color[v] == 1:
                return path[path.index(v):]
            elif color[v] == 0:
                color[v] = 1
                path.append(v)
                iters.append(iter(succ[v]))
    return None


def break_cycles(
    rel: AncestorMatrix, obs_evidence: Optional[Iterable[tuple[int, int]]] = None
) -> AncestorMatrix:
    """Make ``rel`` acyclic.

    Pairs in ``obs_evidence`` (``X_i = 0`` seen together with ``X_j = 1``) are
    dropped first. Each remaining cycle loses the edge whose source has the
    highest index.
    """
    a = np.array(rel.a, dtype=bool)
    for i, j in obs_evidence or ():
        a[i, j] = False
    # 2-cycles are disjoint from one another, so resolve them in bulk
    both = a & a.T
    a &= ~np.triu(both).T
    while True:
        cyc = _find_cycle(a)
        if cyc is None:
            return AncestorMatrix(a)
        src = max(cyc)
        k = cyc.index(src)
        a[src, cyc[(k + 1) % len(cyc)]] = False


def compare_graphs(estimate: Digraph, truth: CausalTree | Digraph) -> GraphMetrics:
    """Directed precision/recall/F1, directed SHD and skeleton SHD.

    A reversed edge counts once in the directed SHD. Empty edge sets count
    as perfect precision (or recall) only when the other side is empty too.
    """
    true_edges = truth.edges
    if estimate.n != truth.n:
        raise ValueError(f"node count mismatch: {estimate.n} vs {truth.n}")
    est = estimate.edges
    tp = len(est & true_edges)
    if est:
        precision = tp / len(est)
    else:
        precision = 1.0 if not true_edges else 0.0
    if true_edges:
        recall = tp / len(true_edges)
    else:
        recall = 1.0 if not est else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0

    shd = 0
    for i, j in {(min(e), max(e)) for e in est | true_edges}:
        e_state = ((i, j) in est, (j, i) in est)
        t_state = ((i, j) in true_edges, (j, i) in true_edges)
        if e_state == t_state:
            continue
        if sum(e_state) == 1 and sum(t_state) == 1:
            shd += 1  # reversal
        else:
            shd += sum(a != b for a, b in zip(e_state, t_state))

    skel_e = {frozenset(e) for e in est}
    skel_t = {frozenset(e) for e in true_edges}
    return GraphMetrics(precision, recall, f1, shd, len(skel_e ^ skel_t))


def random_tree(n: int, rng_seed: int) -> CausalTree:
    """Random recursive tree: a random root, then each node picks an earlier one."""
    if n < 1:
        raise ValueError("random_tree needs n >= 1")
    rng = np.random.default_rng(rng_seed)
    perm = rng.permutation(n)
    parent: list[Optional[int]] = [None] * n
    for k in range(1, n):
        parent[int(perm[k])] = int(perm[rng.integers(k)])
    return CausalTree(tuple(parent))
