"""Trivalent multigraphs with loops and parallel edges.

A graph is stored as a mapping ``edge id -> (end0, end1)``.  Every edge has
two half-edges ``(edge id, 0)`` and ``(edge id, 1)`` sitting at ``end0`` and
``end1``; a loop puts both of its half-edges at the same vertex, so it
contributes two to that vertex's valency.  Vertex and edge ids are plain
strings.  Values are immutable: every surgery returns a new graph.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .errors import GraphError, GraphParseError

HalfEdge = tuple[str, int]


class TrivalentGraph:
    """An immutable graph whose vertices all have valency 1 or 3."""

    __slots__ = ("_edges", "_incidence", "_hash")

    def __init__(self, edges: Mapping[str, tuple[str, str]] | Iterable[tuple[str, str, str]]):
        if isinstance(edges, Mapping):
            items = [(str(e), (str(u), str(v))) for e, (u, v) in edges.items()]
        else:
            items = []
            seen = set()
            for e, u, v in edges:
                if e in seen:
                    raise GraphError(f"duplicate edge id {e!r}")
                seen.add(e)
                items.append((str(e), (str(u), str(v))))
        items.sort()
        self._edges = MappingProxyType(dict(items))
        incidence: dict[str, list[HalfEdge]] = {}
        for e, (u, v) in self._edges.items():
            incidence.setdefault(u, []).append((e, 0))
            incidence.setdefault(v, []).append((e, 1))
        for v, hs in incidence.items():
            if len(hs) not in (1, 3):
                raise GraphError(f"vertex {v!r} has valency {len(hs)}; expected 1 or 3")
            hs.sort()
        self._incidence = MappingProxyType({v: tuple(hs) for v, hs in sorted(incidence.items())})
        self._hash = None

    # -- basic accessors -------------------------------------------------

    @property
    def edges(self) -> Mapping[str, tuple[str, str]]:
        return self._edges

    @property
    def incidence(self) -> Mapping[str, tuple[HalfEdge, ...]]:
        """Vertex -> sorted tuple of incident half-edges."""
        return self._incidence

    @property
    def vertices(self) -> tuple[str, ...]:
        return tuple(self._incidence)

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(self._edges)

    def ends(self, e: str) -> tuple[str, str]:
        try:
            return self._edges[e]
        except KeyError:
            raise GraphError(f"unknown edge {e!r}") from None

    def end_of(self, h: HalfEdge) -> str:
        return self._edges[h[0]][h[1]]

    def other_end(self, e: str, v: str) -> str:
        u, w = self.ends(e)
        return w if u == v else u

    def valency(self, v: str) -> int:
        return len(self._incidence[v])

    def is_leaf(self, v: str) -> bool:
        return v in self._incidence and len(self._incidence[v]) == 1

    @property
    def leaves(self) -> tuple[str, ...]:
        return tuple(v for v, hs in self._incidence.items() if len(hs) == 1)

    @property
    def inner_vertices(self) -> tuple[str, ...]:
        return tuple(v for v, hs in self._incidence.items() if len(hs) == 3)

    def is_loop(self, e: str) -> bool:
        u, v = self.ends(e)
        return u == v

    def is_petiole(self, e: str) -> bool:
        u, v = self.ends(e)
        return self.is_leaf(u) or self.is_leaf(v)

    def petiole_of(self, leaf: str) -> str:
        if not self.is_leaf(leaf):
            raise GraphError(f"{leaf!r} is not a leaf")
        return self._incidence[leaf][0][0]

    def neighbours(self, v: str) -> Iterator[tuple[str, str]]:
        """Yield ``(edge, other end)`` for each half-edge at ``v``."""
        for e, side in self._incidence[v]:
            yield e, self._edges[e][1 - side]

    def components(self) -> list[frozenset[str]]:
        seen: set[str] = set()
        comps = []
        for start in self._incidence:
            if start in seen:
                continue
            comp = {start}
            queue = deque([start])
            while queue:
                v = queue.popleft()
                for _, w in self.neighbours(v):
                    if w not in comp:
                        comp.add(w)
                        queue.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def subgraph(self, vertices: Iterable[str]) -> "TrivalentGraph":
        vs = set(vertices)
        return TrivalentGraph({e: uv for e, uv in self._edges.items() if uv[0] in vs})

    # -- value semantics -------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrivalentGraph):
            return NotImplemented
        return dict(self._edges) == dict(other._edges)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._edges.items()))
        return self._hash

    def __len__(self) -> int:
        return len(self._edges)

    def __reduce__(self):
        return (TrivalentGraph, (dict(self._edges),))

    def __repr__(self) -> str:
        inv = invariants(self)
        return f"<TrivalentGraph V={inv.num_vertices} E={inv.num_edges} n={inv.num_leaves} g={inv.betti}>"

    def to_text(self) -> str:
        return format_graph(self)


# -- parsing ----------------------------------------------------------------


def parse_graph(text: str, *, strict: bool = True) -> TrivalentGraph:
    """Parse the line format ``edge <id> <vertex> <vertex>``.

    Blank lines and ``#`` comments are ignored.  With ``strict`` (the
    default) components consisting of a single bare edge are rejected,
    since they carry no inner vertex.

    >>> g = parse_graph("edge e1 c a\\nedge e2 c b\\nedge e3 c d")
    >>> invariants(g).num_leaves
    3
    """
    edges: dict[str, tuple[str, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "edge" or len(parts) != 4:
            raise GraphParseError(f"line {lineno}: expected 'edge <id> <vertex> <vertex>', got {raw.strip()!r}")
        _, e, u, v = parts
        if e in edges:
            raise GraphParseError(f"line {lineno}: duplicate edge id {e!r}")
        edges[e] = (u, v)
    try:
        g = TrivalentGraph(edges)
    except GraphError as exc:
        raise GraphParseError(str(exc)) from None
    if strict:
        for e, (u, v) in g.edges.items():
            if u != v and g.is_leaf(u) and g.is_leaf(v):
                raise GraphParseError(
                    f"edge {e!r} joins two leaves {u!r}, {v!r}: component has no inner vertex"
                )
    return g


def format_graph(g: TrivalentGraph) -> str:
    """Canonical text: one ``edge`` line per edge, sorted by edge id."""
    return "".join(f"edge {e} {u} {v}\n" for e, (u, v) in g.edges.items())


def load_graph(path) -> TrivalentGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


# -- invariants ---------------------------------------------------------------


@dataclass(frozen=True)
class GraphInvariants:
    num_vertices: int
    num_edges: int
    num_leaves: int
    betti: int
    num_components: int

    @property
    def dim_model(self) -> int:
        return self.num_edges

    def __str__(self) -> str:
        return (
            f"V={self.num_vertices} E={self.num_edges} n={self.num_leaves} "
            f"g={self.betti} comp={self.num_components} dim={self.dim_model}"
        )


def invariants(g: TrivalentGraph) -> GraphInvariants:
    nv = len(g.vertices)
    ne = len(g.edges)
    comp = len(g.components())
    return GraphInvariants(nv, ne, len(g.leaves), ne - nv + comp, comp)


# -- edge classification ------------------------------------------------------

PETIOLE = "petiole"
CYCLE_EDGE = "cycle_edge"
CYCLE_LEG = "cycle_leg"
PLAIN_INNER = "plain_inner"


@dataclass(frozen=True)
class EdgeInfo:
    tag: str
    petiole: bool


def _connected_without(g: TrivalentGraph, e: str) -> bool:
    u, v = g.ends(e)
    if u == v:
        return True
    seen = {u}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for f, y in g.neighbours(x):
            if f == e or y in seen:
                continue
            if y == v:
                return True
            seen.add(y)
            queue.append(y)
    return False


def cycle_edges(g: TrivalentGraph) -> frozenset[str]:
    return frozenset(e for e in g.edges if not g.is_petiole(e) and _connected_without(g, e))


def classify_edges(g: TrivalentGraph) -> dict[str, EdgeInfo]:
    """Tag every edge as cycle edge, cycle leg, petiole or plain inner edge.

    An edge may be a petiole and a cycle leg at once (the stem of a
    balloon); ``petiole`` is kept as a separate flag and the cycle tag wins.
    """
    cyc = cycle_edges(g)
    cycle_vertices = {x for e in cyc for x in g.ends(e)}
    out = {}
    for e, (u, v) in g.edges.items():
        pet = g.is_petiole(e)
        if e in cyc:
            tag = CYCLE_EDGE
        elif u in cycle_vertices or v in cycle_vertices:
            tag = CYCLE_LEG
        elif pet:
            tag = PETIOLE
        else:
            tag = PLAIN_INNER
        out[e] = EdgeInfo(tag, pet)
    return out


# -- fresh names --------------------------------------------------------------


def fresh_name(base: str, taken) -> str:
    if base not in taken:
        return base
    i = 2
    while f"{base}~{i}" in taken:
        i += 1
    return f"{base}~{i}"


def _taken(*graphs: TrivalentGraph) -> set[str]:
    names: set[str] = set()
    for g in graphs:
        names.update(g.edges)
        names.update(g.vertices)
    return names


# -- surgery ------------------------------------------------------------------


def cut_edge_ids(g: TrivalentGraph, e: str) -> tuple[str, str, str, str]:
    """Names ``(e1, e2, leaf1, leaf2)`` that :func:`cut_edge` will use."""
    taken = _taken(g)
    e1 = fresh_name(f"{e}.1", taken)
    taken.add(e1)
    e2 = fresh_name(f"{e}.2", taken)
    taken.add(e2)
    l1 = fresh_name(f"{e}.l1", taken)
    taken.add(l1)
    l2 = fresh_name(f"{e}.l2", taken)
    return e1, e2, l1, l2


def cut_edge(g: TrivalentGraph, e: str) -> TrivalentGraph:
    """Replace the internal edge ``e = (u, w)`` by ``(u, leaf1)`` and ``(w, leaf2)``."""
    u, w = g.ends(e)
    if g.is_petiole(e):
        raise GraphError(f"edge {e!r} is a petiole and cannot be cut")
    e1, e2, l1, l2 = cut_edge_ids(g, e)
    edges = dict(g.edges)
    del edges[e]
    edges[e1] = (u, l1)
    edges[e2] = (w, l2)
    return TrivalentGraph(edges)


def glue_leaves(g: TrivalentGraph, l1: str, l2: str) -> TrivalentGraph:
    """Remove leaves ``l1``, ``l2`` and merge their petioles into one edge.

    The merged edge keeps the first petiole's id, except that the two halves
    ``X.1`` / ``X.2`` produced by :func:`cut_edge` are merged back into ``X``.
    """
    if l1 == l2:
        raise GraphError("cannot glue a leaf to itself")
    for leaf in (l1, l2):
        if not g.is_leaf(leaf):
            raise GraphError(f"{leaf!r} is not a leaf")
    p1, p2 = g.petiole_of(l1), g.petiole_of(l2)
    if p1 == p2:
        raise GraphError(f"leaves {l1!r} and {l2!r} bound the same bare edge")
    x1, x2 = g.other_end(p1, l1), g.other_end(p2, l2)
    edges = dict(g.edges)
    del edges[p1], edges[p2]
    name = p1
    if p1.endswith(".1") and p2 == p1[:-2] + ".2" and p1[:-2] not in edges:
        name = p1[:-2]
    edges[name] = (x1, x2)
    return TrivalentGraph(edges)


def relabel(g: TrivalentGraph, vertex_map: Mapping[str, str], edge_map: Mapping[str, str]) -> TrivalentGraph:
    return TrivalentGraph(
        {edge_map.get(e, e): (vertex_map.get(u, u), vertex_map.get(v, v)) for e, (u, v) in g.edges.items()}
    )


def _separate(g1: TrivalentGraph, g2: TrivalentGraph) -> tuple[TrivalentGraph, dict[str, str]]:
    """Rename ids of ``g2`` that clash with ``g1``; return the renamed graph and vertex map."""
    taken = _taken(g1, g2)
    vmap, emap = {}, {}
    for v in g2.vertices:
        if v in g1.incidence or v in g1.edges:
            vmap[v] = fresh_name(v, taken)
            taken.add(vmap[v])
    for e in g2.edges:
        if e in g1.edges or e in g1.incidence:
            emap[e] = fresh_name(e, taken)
            taken.add(emap[e])
    return relabel(g2, vmap, emap), vmap


def disjoint_union(g1: TrivalentGraph, g2: TrivalentGraph) -> TrivalentGraph:
    """Disjoint sum; clashing ids of ``g2`` get fresh names."""
    g2r, _ = _separate(g1, g2)
    edges = dict(g1.edges)
    edges.update(g2r.edges)
    return TrivalentGraph(edges)


def graft(g1: TrivalentGraph, l1: str, g2: TrivalentGraph, l2: str, *, new_leaf: str | None = None) -> TrivalentGraph:
    """Join the petioles of ``l1`` and ``l2`` at a new tripod with one free leaf."""
    if not g1.is_leaf(l1):
        raise GraphError(f"{l1!r} is not a leaf of the first graph")
    if not g2.is_leaf(l2):
        raise GraphError(f"{l2!r} is not a leaf of the second graph")
    g2r, vmap = _separate(g1, g2)
    l2 = vmap.get(l2, l2)
    edges = dict(g1.edges)
    edges.update(g2r.edges)
    taken = set(edges) | {x for uv in edges.values() for x in uv}
    centre = fresh_name("t", taken)
    taken.add(centre)
    leaf = new_leaf if new_leaf is not None and new_leaf not in taken else fresh_name("leaf", taken)
    taken.add(leaf)
    stem = fresh_name(f"p{leaf}", taken)
    for lf in (l1, l2):
        p = next(e for e, uv in edges.items() if lf in uv)
        u, v = edges[p]
        edges[p] = (u, centre) if v == lf else (centre, v)
    edges[stem] = (centre, leaf)
    return TrivalentGraph(edges)


# -- networks -----------------------------------------------------------------


@dataclass(frozen=True)
class Network:
    """A set of edges meeting every inner vertex in 0 or 2 half-edges."""

    support: frozenset[str]

    def pieces(self, g: TrivalentGraph) -> list[tuple[str, ...]]:
        """Split the support into its maximal paths and cycles (edge sequences)."""
        remaining = set(self.support)
        out = []

        def walk(start_v: str, first: str) -> list[str]:
            seq = [first]
            remaining.discard(first)
            v = g.other_end(first, start_v)
            while True:
                nxt = [e for e, _ in g.incidence[v] if e in remaining]
                if not nxt:
                    return seq
                e = nxt[0]
                remaining.discard(e)
                seq.append(e)
                v = g.other_end(e, v)

        for leaf in g.leaves:
            p = g.petiole_of(leaf)
            if p in remaining:
                out.append(tuple(walk(leaf, p)))
        while remaining:
            e = min(remaining)
            out.append(tuple(walk(g.ends(e)[0], e)))
        return out


def enumerate_networks(g: TrivalentGraph) -> list[Network]:
    """All networks, ordered lexicographically as 0/1 vectors over sorted edge ids."""
    eids = g.edge_ids
    index = {e: i for i, e in enumerate(eids)}
    # the last edge index at which each inner vertex becomes fully assigned
    checks: dict[int, list[str]] = {}
    for v in g.inner_vertices:
        last = max(index[e] for e, _ in g.incidence[v])
        checks.setdefault(last, []).append(v)
    bits = [0] * len(eids)
    out: list[Network] = []

    def ok(i: int) -> bool:
        for v in checks.get(i, ()):
            if sum(bits[index[e]] for e, _ in g.incidence[v]) not in (0, 2):
                return False
        return True

    def rec(i: int) -> None:
        if i == len(eids):
            out.append(Network(frozenset(e for e, b in zip(eids, bits) if b)))
            return
        for b in (0, 1):
            bits[i] = b
            if ok(i):
                rec(i + 1)
        bits[i] = 0

    rec(0)
    return out
