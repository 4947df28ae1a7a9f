"""Mutations along internal edges and the caterpillar-with-loops normal form.

A mutation along ``e = (u, w)`` exchanges one of the two other half-edges at
``u`` with one of the two other half-edges at ``w``.  Leaves and edge ids are
never renamed, so a sequence of mutations induces the identity on leaves.

Variant numbering: order the non-``e`` half-edges at each end by
``(edge id, side)``.  Variant 1 exchanges the first at ``u`` with the first
at ``w``; variant 2 exchanges the first at ``u`` with the second at ``w``.
Here ``u`` is ``e``'s end 0.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import GraphError
from .graph import HalfEdge, TrivalentGraph, cycle_edges, invariants


@dataclass(frozen=True)
class MutationStep:
    edge: str
    variant: int

    def __post_init__(self):
        if self.variant not in (1, 2):
            raise GraphError(f"mutation variant must be 1 or 2, got {self.variant}")

    def __str__(self) -> str:
        return f"mutate {self.edge} {self.variant}"

    @classmethod
    def parse(cls, text: str) -> "MutationStep":
        parts = text.split()
        if len(parts) != 3 or parts[0] != "mutate":
            raise GraphError(f"cannot parse mutation step {text!r}")
        return cls(parts[1], int(parts[2]))


def _sides(g: TrivalentGraph, e: str) -> tuple[str, str, list[HalfEdge], list[HalfEdge]]:
    u, w = g.ends(e)
    if u == w:
        raise GraphError(f"cannot mutate along loop {e!r}")
    if g.is_petiole(e):
        raise GraphError(f"cannot mutate along petiole {e!r}")
    hu = [h for h in g.incidence[u] if h[0] != e]
    hw = [h for h in g.incidence[w] if h[0] != e]
    return u, w, hu, hw


def _swap(g: TrivalentGraph, u: str, w: str, a: HalfEdge, b: HalfEdge) -> TrivalentGraph:
    edges = {k: list(v) for k, v in g.edges.items()}
    edges[a[0]][a[1]] = w
    edges[b[0]][b[1]] = u
    return TrivalentGraph({k: (v[0], v[1]) for k, v in edges.items()})


def mutate(g: TrivalentGraph, step: MutationStep) -> TrivalentGraph:
    u, w, hu, hw = _sides(g, step.edge)
    return _swap(g, u, w, hu[0], hw[step.variant - 1])


def variant_for_split(g: TrivalentGraph, e: str, keep_at_u: set[HalfEdge]) -> MutationStep:
    """The step after which one end of ``e`` holds exactly ``keep_at_u``.

    ``keep_at_u`` is a pair drawn from the four non-``e`` half-edges.  The two
    ends may come out exchanged; the resulting graph is the same up to
    renaming ``u`` and ``w``.
    """
    _, _, hu, hw = _sides(g, e)
    four = set(hu) | set(hw)
    keep = set(keep_at_u)
    if len(keep) != 2 or not keep <= four:
        raise GraphError("split must name two of the four neighbouring half-edges")
    side = keep if hu[1] in keep else four - keep
    if side == set(hu):
        raise GraphError("requested split is the current tree, not a mutation")
    return MutationStep(e, 1 if hw[0] in side else 2)


def inverse_step(g: TrivalentGraph, step: MutationStep) -> MutationStep:
    """A step on ``mutate(g, step)`` whose result is isomorphic to ``g``."""
    _, _, hu, _ = _sides(g, step.edge)
    return variant_for_split(mutate(g, step), step.edge, set(hu))


def replay(g: TrivalentGraph, steps) -> TrivalentGraph:
    for s in steps:
        g = mutate(g, s)
    return g


# -- normal form --------------------------------------------------------------


def _loop_vertices(g: TrivalentGraph) -> set[str]:
    return {u for u, v in g.edges.values() if u == v}


def _shortest_cycle(g: TrivalentGraph) -> list[tuple[str, str]] | None:
    """Shortest cycle of length >= 2 as ``[(vertex, edge to next vertex), ...]``."""
    best = None
    for e in sorted(cycle_edges(g)):
        u, w = g.ends(e)
        if u == w:
            continue
        prev: dict[str, tuple[str, str]] = {u: ("", "")}
        queue = deque([u])
        while queue and w not in prev:
            x = queue.popleft()
            for f, y in g.neighbours(x):
                if f != e and y not in prev:
                    prev[y] = (x, f)
                    queue.append(y)
        path = []
        y = w
        while y != u:
            x, f = prev[y]
            path.append((x, f))
            y = x
        path.reverse()
        cyc = path + [(w, e)]
        if best is None or len(cyc) < len(best):
            best = cyc
    return best


def _half_at(g: TrivalentGraph, e: str, v: str) -> HalfEdge:
    return next(h for h in g.incidence[v] if h[0] == e)


def _shorten(g: TrivalentGraph, cyc: list[tuple[str, str]]) -> MutationStep:
    """Mutation along the cycle's first edge that drops that edge from the cycle."""
    (c0, e0), (c1, e1) = cyc[0], cyc[1]
    e_prev = cyc[-1][1]
    # c0 keeps its incoming cycle edge and takes over e1's end at c1; for a
    # 2-cycle e_prev == e1 and the result is a loop at c0
    return variant_for_split(g, e0, {_half_at(g, e_prev, c0), _half_at(g, e1, c1)})


def _reduce_cycles(g: TrivalentGraph, steps: list[MutationStep]) -> TrivalentGraph:
    while True:
        cyc = _shortest_cycle(g)
        if cyc is None:
            return g
        loops = len(_loop_vertices(g))
        step = _shorten(g, cyc)
        g = mutate(g, step)
        steps.append(step)
        # progress: a new loop, or a strictly shorter shortest cycle
        after = _shortest_cycle(g)
        assert len(_loop_vertices(g)) > loops or (after is not None and len(after) < len(cyc))


def _inner_tree(g: TrivalentGraph) -> set[str]:
    loops = _loop_vertices(g)
    return {v for v in g.inner_vertices if v not in loops}


def _spine_vertices(g: TrivalentGraph, spine_edges: list[str]) -> list[str]:
    a0, a1 = g.ends(spine_edges[0])
    b = set(g.ends(spine_edges[1]))
    start = a0 if a1 in b else a1
    verts = [start]
    for e in spine_edges:
        verts.append(g.other_end(e, verts[-1]))
    return verts


def _edge_between(g: TrivalentGraph, x: str, y: str) -> str:
    return next(e for e, z in g.neighbours(x) if z == y)


def _caterpillarize(g: TrivalentGraph, steps: list[MutationStep]) -> tuple[TrivalentGraph, list[str]]:
    inner = _inner_tree(g)
    if not inner:
        return g, []
    start = min(inner)

    def far(src: str) -> str:
        dist = {src: 0}
        queue = deque([src])
        last = src
        while queue:
            x = queue.popleft()
            last = x
            for _, y in sorted(g.neighbours(x)):
                if y in inner and y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return last

    a = far(start)
    b = far(a)
    # path a..b inside the inner tree
    prev = {a: None}
    queue = deque([a])
    while queue:
        x = queue.popleft()
        for _, y in sorted(g.neighbours(x)):
            if y in inner and y not in prev:
                prev[y] = x
                queue.append(y)
    verts = [b]
    while prev[verts[-1]] is not None:
        verts.append(prev[verts[-1]])
    verts.reverse()

    while True:
        inner = _inner_tree(g)
        changed = True
        while changed:
            changed = False
            for end in (0, -1):
                v = verts[end]
                for _, y in sorted(g.neighbours(v)):
                    if y in inner and y not in verts:
                        if end == 0:
                            verts.insert(0, y)
                        else:
                            verts.append(y)
                        changed = True
                        break
        target = None
        for i in range(1, len(verts) - 1):
            for f, y in sorted(g.neighbours(verts[i])):
                if y in inner and y not in verts:
                    target = (i, f, y)
                    break
            if target:
                break
        if target is None:
            return g, [_edge_between(g, verts[i], verts[i + 1]) for i in range(len(verts) - 1)]
        i, f, x = target
        s = verts[i]
        toward_prev = next(h for h in g.incidence[s] if g.end_of(h) == s and h[0] == _edge_between(g, s, verts[i - 1]))
        x_others = sorted(h for h in g.incidence[x] if h[0] != f)
        spine_edges = [_edge_between(g, verts[j], verts[j + 1]) for j in range(len(verts) - 1)]
        step = variant_for_split(g, f, {toward_prev, x_others[0]})
        g = mutate(g, step)
        steps.append(step)
        spine_edges.insert(i, f)
        verts = _spine_vertices(g, spine_edges)


def _slot_half_edges(g: TrivalentGraph, verts: list[str]) -> list[list[HalfEdge]]:
    spine = set(verts)
    out = []
    for v in verts:
        out.append([h for h in g.incidence[v] if g.other_end(h[0], v) not in spine])
    return out


def _is_balloon_slot(g: TrivalentGraph, h: HalfEdge) -> bool:
    far_end = g.edges[h[0]][1 - h[1]]
    return far_end in _loop_vertices(g)


def _ordered_slots(g: TrivalentGraph, verts: list[str]) -> list[tuple[int, HalfEdge]]:
    """Flattened ``(spine index, slot half-edge)``, balloons first within a vertex."""
    out = []
    for i, hs in enumerate(_slot_half_edges(g, verts)):
        for h in sorted(hs, key=lambda h: (not _is_balloon_slot(g, h), h)):
            out.append((i, h))
    return out


def _place_loops(g: TrivalentGraph, spine_edges: list[str], steps: list[MutationStep]) -> TrivalentGraph:
    if len(spine_edges) < 1:
        return g
    if len(spine_edges) > 1:
        # read the spine in the direction that already has balloons in front
        def order_key(es):
            return [not _is_balloon_slot(g, h) for _, h in _ordered_slots(g, _spine_vertices(g, es))]

        spine_edges = min(spine_edges, spine_edges[::-1], key=order_key)
    while True:
        if len(spine_edges) > 1:
            verts = _spine_vertices(g, spine_edges)
        else:
            # no neighbouring spine edge to anchor the orientation: put the
            # end with more balloons first
            verts = min(
                (list(g.ends(spine_edges[0])), list(reversed(g.ends(spine_edges[0])))),
                key=lambda vs: [not _is_balloon_slot(g, h) for _, h in _ordered_slots(g, vs)],
            )
        slots = _ordered_slots(g, verts)
        move = None
        for p in range(len(slots) - 1):
            (i, a), (j, b) = slots[p], slots[p + 1]
            if i != j and not _is_balloon_slot(g, a) and _is_balloon_slot(g, b):
                move = (i, a, b)
                break
        if move is None:
            return g
        i, a, b = move
        e = spine_edges[i]
        holder = verts[i]
        others = {h for h in g.incidence[holder] if h[0] != e and h != a}
        step = variant_for_split(g, e, others | {b})
        g = mutate(g, step)
        steps.append(step)


def caterpillar_normal_form(g: TrivalentGraph) -> tuple[TrivalentGraph, list[MutationStep]]:
    """Mutate a connected graph to a caterpillar tree carrying its loops.

    Returns the normal form and the mutation sequence; replaying the
    sequence on ``g`` gives exactly the returned graph.
    """
    if not g.is_connected():
        raise GraphError("normal form requires a connected graph; normalise each component")
    steps: list[MutationStep] = []
    h = _reduce_cycles(g, steps)
    h, spine_edges = _caterpillarize(h, steps)
    h = _place_loops(h, spine_edges, steps)
    assert invariants(h) == invariants(g)
    return h, steps


@dataclass(frozen=True)
class CaterpillarShape:
    """Slots of a caterpillar-with-loops, left to right.

    ``slots[i]`` is either a leaf id or ``None`` for a balloon.  Slots 0, 1
    hang off the first spine vertex, the last two off the last one.
    """

    slots: tuple[str | None, ...]

    @property
    def num_balloons(self) -> int:
        return sum(s is None for s in self.slots)


def caterpillar_shape(g: TrivalentGraph) -> CaterpillarShape:
    """Read off the slot sequence of a connected caterpillar with loops."""
    if not g.is_connected():
        raise GraphError("caterpillar shape requires a connected graph")
    loops = _loop_vertices(g)
    inner = _inner_tree(g)

    def slot_of(h: HalfEdge) -> str | None:
        far_end = g.edges[h[0]][1 - h[1]]
        return None if far_end in loops else far_end

    if not inner:
        # bare stem: balloon + leaf, or two balloons (dumbbell)
        if len(g.edges) == 0:
            return CaterpillarShape(())
        slots = []
        for v in sorted(loops):
            slots.append(None)
        slots.extend(sorted(g.leaves))
        return CaterpillarShape(tuple(slots))
    ends = [v for v in inner if sum(1 for _, y in g.neighbours(v) if y in inner) <= 1]
    for v in inner:
        if sum(1 for _, y in g.neighbours(v) if y in inner) > 2:
            raise GraphError("graph is not a caterpillar")
    if len(inner) == 1:
        orders = [[next(iter(inner))]]
    else:
        orders = []
        for a in ends:
            verts = [a]
            while True:
                nxt = [y for _, y in g.neighbours(verts[-1]) if y in inner and y not in verts]
                if not nxt:
                    break
                verts.append(nxt[0])
            if len(verts) != len(inner):
                raise GraphError("graph is not a caterpillar")
            orders.append(verts)
    best = None
    for verts in orders:
        spine = set(verts)
        seq: list[str | None] = []
        for v in verts:
            hs = [h for h in g.incidence[v] if g.edges[h[0]][1 - h[1]] not in spine]
            seq.extend(sorted((slot_of(h) for h in hs), key=lambda s: (s is not None, s or "")))
        key = tuple((s is not None, s or "") for s in seq)
        if best is None or key < best[0]:
            best = (key, seq)
    return CaterpillarShape(tuple(best[1]))


def is_caterpillar(g: TrivalentGraph) -> bool:
    """True when the non-loop inner vertices form a path and every cycle is a loop."""
    inv = invariants(g)
    if len(_loop_vertices(g)) != inv.betti:
        return False
    inner = _inner_tree(g)
    return all(sum(1 for _, y in g.neighbours(v) if y in inner) <= 2 for v in inner)
