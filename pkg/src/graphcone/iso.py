"""Exact isomorphism test for small multigraphs by backtracking."""
from __future__ import annotations

from collections import Counter

from .errors import GraphError
from .graph import TrivalentGraph

DEFAULT_MAX_VERTICES = 16


def _adjacency(g: TrivalentGraph) -> dict[str, Counter]:
    adj: dict[str, Counter] = {v: Counter() for v in g.vertices}
    for u, v in g.edges.values():
        adj[u][v] += 1
        if u != v:
            adj[v][u] += 1
    return adj


def _signature(g: TrivalentGraph, adj: dict[str, Counter], v: str) -> tuple:
    loops = adj[v][v]
    nbr = sorted((g.valency(w), m) for w, m in adj[v].items() if w != v)
    return (g.valency(v), loops, tuple(nbr))


def find_isomorphism(
    g1: TrivalentGraph,
    g2: TrivalentGraph,
    *,
    max_vertices: int = DEFAULT_MAX_VERTICES,
    fix: dict[str, str] | None = None,
) -> dict[str, str] | None:
    """Return a vertex bijection ``g1 -> g2`` preserving edge multiplicities, or None.

    ``fix`` pins some vertices (e.g. leaves) to prescribed images.
    """
    if len(g1.vertices) > max_vertices or len(g2.vertices) > max_vertices:
        raise GraphError(f"isomorphism test limited to {max_vertices} vertices")
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    a1, a2 = _adjacency(g1), _adjacency(g2)
    s1 = {v: _signature(g1, a1, v) for v in g1.vertices}
    s2 = {v: _signature(g2, a2, v) for v in g2.vertices}
    if sorted(s1.values()) != sorted(s2.values()):
        return None

    # BFS order keeps consecutive vertices adjacent, which prunes early
    order: list[str] = []
    seen: set[str] = set()
    starts = sorted(g1.vertices, key=lambda v: (v not in (fix or {}), -g1.valency(v), v))
    for s in starts:
        if s in seen:
            continue
        seen.add(s)
        queue = [s]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(a1[v]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)

    mapping: dict[str, str] = {}
    used: set[str] = set()

    def consistent(v: str, w: str) -> bool:
        if s1[v] != s2[w]:
            return False
        if a1[v][v] != a2[w][w]:
            return False
        for x, img in mapping.items():
            if a1[v][x] != a2[w][img]:
                return False
        return True

    def rec(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        if fix and v in fix:
            candidates = [fix[v]]
        else:
            candidates = [w for w in g2.vertices if w not in used]
        for w in candidates:
            if w in used or not consistent(v, w):
                continue
            mapping[v] = w
            used.add(w)
            if rec(i + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return dict(mapping) if rec(0) else None


def is_isomorphic(g1: TrivalentGraph, g2: TrivalentGraph, *, max_vertices: int = DEFAULT_MAX_VERTICES) -> bool:
    return find_isomorphism(g1, g2, max_vertices=max_vertices) is not None
