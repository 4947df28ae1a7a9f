"""Exhaustive enumeration of cone points of a fixed degree.

This is the brute-force oracle behind every count in the package.  Edges
are assigned one at a time in an order that completes inner vertices as
early as possible; when the last half-edge at a vertex is assigned, its
value is confined to the range allowed by parity, the triangle
inequalities and the degree bound, so dead branches are never entered.

The main engine expands whole levels of the search tree at once with
numpy.  A plain recursive search over the same plan is kept as
:func:`reference_point_vectors`; the tests cross-check the two.

Work is measured in search nodes (partial assignments visited).  The cap
comes from the ``budget`` argument or the ``GRAPHCONE_BUDGET`` environment
variable.
"""
from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from typing import Iterator, Sequence

import numpy as np

from .cone import ConeElement
from .errors import BudgetExceeded, GraphConeError
from .graph import TrivalentGraph

DEFAULT_BUDGET = 10**8
# largest frontier materialised at once; bigger levels are split depth-first
CHUNK_ROWS = 1 << 20


def default_budget() -> int:
    raw = os.environ.get("GRAPHCONE_BUDGET")
    if raw is None:
        return DEFAULT_BUDGET
    try:
        return int(float(raw))
    except ValueError:
        raise GraphConeError(f"GRAPHCONE_BUDGET must be a number, got {raw!r}") from None


def _halves(g: TrivalentGraph, e: str, v: str) -> int:
    return sum(1 for f, _ in g.incidence[v] if f == e)


class _Plan:
    """Edge order plus, per position, the vertex constraints to apply.

    ``checks[i]`` lists what constrains the edge at position ``i``:
    ``("pair", (j, k))`` when it completes a vertex whose other half-edges
    belong to the edges at positions ``j`` and ``k``; ``("loop", j)`` when
    it is a loop completing a vertex whose third half-edge is at ``j``.
    """

    def __init__(self, g: TrivalentGraph):
        inner = set(g.inner_vertices)
        assigned: Counter = Counter()
        remaining = set(g.edge_ids)
        order: list[str] = []
        while remaining:
            def score(e: str):
                ends = [x for x in set(g.ends(e)) if x in inner]
                completes = sum(1 for x in ends if assigned[x] + _halves(g, e, x) == 3)
                return (-completes, -sum(assigned[x] for x in ends), e)

            e = min(remaining, key=score)
            remaining.discard(e)
            order.append(e)
            for x in set(g.ends(e)):
                if x in inner:
                    assigned[x] += _halves(g, e, x)
        self.order = order
        pos = {e: i for i, e in enumerate(order)}
        self.to_sorted = [pos[e] for e in g.edge_ids]
        self.checks: list[list[tuple[str, object]]] = []
        for i, e in enumerate(order):
            cs: list[tuple[str, object]] = []
            for x in sorted(set(g.ends(e))):
                if x not in inner:
                    continue
                others = [pos[f] for f, _ in g.incidence[x] if f != e]
                if any(j > i for j in others):
                    continue
                if _halves(g, e, x) == 2:
                    cs.append(("loop", others[0]))
                else:
                    cs.append(("pair", (others[0], others[1])))
            self.checks.append(cs)


# -- numpy engine -------------------------------------------------------------


def _level_ranges(plan: _Plan, i: int, frontier: np.ndarray, m: int):
    rows = frontier.shape[0]
    lo = np.zeros(rows, dtype=np.int64)
    hi = np.full(rows, m, dtype=np.int64)
    par = np.full(rows, -1, dtype=np.int64)
    ok = np.ones(rows, dtype=bool)
    for kind, data in plan.checks[i]:
        if kind == "pair":
            p = frontier[:, data[0]]
            q = frontier[:, data[1]]
            lo = np.maximum(lo, np.abs(p - q))
            hi = np.minimum(hi, np.minimum(p + q, 2 * m - p - q))
            pp = (p + q) & 1
            ok &= (par < 0) | (par == pp)
            par = pp
        else:
            c = frontier[:, data]
            ok &= (c & 1) == 0
            lo = np.maximum(lo, c // 2)
            hi = np.minimum(hi, m - c // 2)
    step = np.where(par < 0, 1, 2)
    lo = np.where((par >= 0) & ((lo & 1) != par), lo + 1, lo)
    counts = np.where(ok & (hi >= lo), (hi - lo) // step + 1, 0)
    return lo, step, counts


class _Counter:
    def __init__(self, budget: int, m: int):
        self.nodes = 1
        self.budget = budget
        self.m = m

    def add(self, k: int) -> None:
        self.nodes += k
        if self.nodes > self.budget:
            raise BudgetExceeded(
                f"enumeration of degree {self.m} exceeded the budget of {self.budget} search nodes "
                f"(set GRAPHCONE_BUDGET to raise it)"
            )


def _expand(plan: _Plan, frontier: np.ndarray, i: int, m: int, tally: _Counter) -> Iterator[np.ndarray]:
    n = len(plan.order)
    if i == n:
        yield frontier
        return
    lo, step, counts = _level_ranges(plan, i, frontier, m)
    total = int(counts.sum())
    if total > CHUNK_ROWS and frontier.shape[0] > 1:
        half = frontier.shape[0] // 2
        yield from _expand(plan, frontier[:half], i, m, tally)
        yield from _expand(plan, frontier[half:], i, m, tally)
        return
    tally.add(total)
    if total == 0:
        return
    starts = np.cumsum(counts) - counts
    offsets = np.arange(total, dtype=np.int64) - np.repeat(starts, counts)
    col = np.repeat(lo, counts) + np.repeat(step, counts) * offsets
    nxt = np.empty((total, i + 1), dtype=np.int64)
    nxt[:, :i] = np.repeat(frontier, counts, axis=0)
    nxt[:, i] = col
    yield from _expand(plan, nxt, i + 1, m, tally)


def _blocks(g: TrivalentGraph, m: int, budget: int, first: int | None) -> tuple[list[np.ndarray], int]:
    """Point arrays with columns in ``g.edge_ids`` order, plus nodes visited."""
    plan = _Plan(g)
    tally = _Counter(budget, m)
    root = np.zeros((1, 0), dtype=np.int64)
    out = []
    if first is not None:
        lo, step, counts = _level_ranges(plan, 0, root, m)
        vals = range(int(lo[0]), int(lo[0] + step[0] * counts[0]), int(step[0]))
        if first not in vals:
            return [], 1
        tally.add(1)
        root = np.array([[first]], dtype=np.int64)
        it = _expand(plan, root, 1, m, tally)
    else:
        it = _expand(plan, root, 0, m, tally)
    for block in it:
        out.append(block[:, plan.to_sorted])
    return out, tally.nodes


def _worker(args):
    g, m, budget, first = args
    return _blocks(g, m, budget, first)


def _gather(g: TrivalentGraph, m: int, budget: int | None, threads: int) -> list[np.ndarray]:
    if m < 0:
        raise GraphConeError("degree must be nonnegative")
    budget = default_budget() if budget is None else budget
    if not g.edges:
        return [np.zeros((1, 0), dtype=np.int64)]
    if threads <= 1:
        blocks, _ = _blocks(g, m, budget, None)
        return blocks
    jobs = [(g, m, budget, x) for x in range(m + 1)]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(_worker, jobs))
    # each worker counts the shared root once
    nodes = sum(n for _, n in results) - len(results) + 1
    if nodes > budget:
        raise BudgetExceeded(f"enumeration of degree {m} exceeded the budget of {budget} search nodes")
    return [b for blocks, _ in results for b in blocks]


def _sorted_rows(a: np.ndarray) -> np.ndarray:
    if a.shape[0] <= 1 or a.shape[1] == 0:
        return a
    return a[np.lexsort(a.T[::-1])]


def point_array(g: TrivalentGraph, m: int, *, budget: int | None = None, threads: int = 1) -> np.ndarray:
    """All degree-``m`` points as an ``(N, |E|)`` array over ``g.edge_ids``, rows sorted."""
    blocks = _gather(g, m, budget, threads)
    if not blocks:
        return np.zeros((0, len(g.edges)), dtype=np.int64)
    return _sorted_rows(np.concatenate(blocks, axis=0))


def point_vectors(g: TrivalentGraph, m: int, *, budget: int | None = None, threads: int = 1) -> list[tuple[int, ...]]:
    """Coefficient vectors (over ``g.edge_ids``) of all degree-``m`` cone points, sorted."""
    return [tuple(int(x) for x in row) for row in point_array(g, m, budget=budget, threads=threads)]


def points_of_degree(g: TrivalentGraph, m: int, *, budget: int | None = None, threads: int = 1) -> list[ConeElement]:
    """All cone points of degree ``m`` in lexicographic order of their edge vectors.

    ``threads > 1`` splits the search by the value of the first edge over a
    process pool; the merged output is identical.
    """
    eids = g.edge_ids
    return [ConeElement(m, zip(eids, v)) for v in point_vectors(g, m, budget=budget, threads=threads)]


def count_points(g: TrivalentGraph, m: int, *, budget: int | None = None, threads: int = 1) -> int:
    return sum(b.shape[0] for b in _gather(g, m, budget, threads))


def count_by_leaves(
    g: TrivalentGraph, m: int, axes: Sequence[str] = (), *, budget: int | None = None, threads: int = 1
) -> Counter:
    """Number of degree-``m`` points bucketed by the petiole values at ``axes``."""
    index = {e: i for i, e in enumerate(g.edge_ids)}
    cols = [index[g.petiole_of(leaf)] for leaf in axes]
    out: Counter = Counter()
    for block in _gather(g, m, budget, threads):
        if not cols:
            out[()] += block.shape[0]
            continue
        keys, counts = np.unique(block[:, cols], axis=0, return_counts=True)
        for k, c in zip(keys, counts):
            out[tuple(int(x) for x in k)] += int(c)
    return out


def search_nodes(g: TrivalentGraph, m: int) -> int:
    """Search nodes a full degree-``m`` enumeration visits."""
    if not g.edges:
        return 1
    _, nodes = _blocks(g, m, 10**18, None)
    return nodes


# -- recursive reference ------------------------------------------------------


def reference_point_vectors(g: TrivalentGraph, m: int) -> list[tuple[int, ...]]:
    """Same output as :func:`point_vectors`, by plain depth-first search over the box.

    No pruning beyond checking each vertex once all its half-edges are set;
    intended for small inputs only.
    """
    eids = g.edge_ids
    inner = g.inner_vertices
    index = {e: i for i, e in enumerate(eids)}
    due: dict[int, list[tuple[int, int, int]]] = {}
    for v in inner:
        cols = [index[e] for e, _ in g.incidence[v]]
        due.setdefault(max(cols), []).append(tuple(cols))
    vals = [0] * len(eids)
    out: list[tuple[int, ...]] = []

    def ok(i: int) -> bool:
        for a, b, c in due.get(i, ()):
            x, y, z = vals[a], vals[b], vals[c]
            s = x + y + z
            if s % 2 or x > y + z or y > x + z or z > x + y or s > 2 * m:
                return False
        return True

    def rec(i: int) -> None:
        if i == len(eids):
            out.append(tuple(vals))
            return
        for x in range(m + 1):
            vals[i] = x
            if ok(i):
                rec(i + 1)
        vals[i] = 0

    rec(0)
    return out
