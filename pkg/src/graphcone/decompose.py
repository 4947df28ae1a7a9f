"""Decomposition of cone points into generators, for graphs with at most one cycle.

Trees.  A degree-``m`` point is a sum of ``m`` networks.  Give the ``m``
networks slot numbers ``0..m-1`` and record, for each edge, the set of
slots whose network uses it (a bit mask with as many bits as the edge
value).  Walking the tree from a root, the local paths at each vertex say
how many slots of the parent edge continue into each child edge and how
many new slots join the two children; any consistent choice works, and we
always take the lowest available bits.

One cycle.  Cut the legs of the cycle.  The part on the cycle and its legs
(a polygon) is peeled one summand at a time: a network whenever some
network leaves a remainder in the cone, otherwise a degree-2 point.  If no
network can be peeled, every degree-2 summand is indecomposable, so the
peeled points are generators.  The cyclic search for a summand is a small
dynamic programme around the cycle.  When a cycle edge of the remainder is
zero the polygon is a tree and the slot walk finishes it.  Finally the slot
masks of the legs seed slot walks into the pendant trees, and each slot
(or pair of slots, for a degree-2 summand) collects its share.

Everything runs on batches of points at once; :func:`decompose` is the
one-point wrapper.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cone import ConeElement, cone_mask, cone_violations, local_ok, local_ok_array
from .errors import ConeError, GraphError
from .graph import TrivalentGraph, cycle_edges

MAX_MASK_BITS = 62
CHUNK_ROWS = 1 << 17


@dataclass(frozen=True)
class Decomposition:
    """Summands of a cone point; each part's degree is its generator degree."""

    parts: tuple[ConeElement, ...]

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(p.degree for p in self.parts)

    def total(self) -> ConeElement:
        out = ConeElement.zero()
        for p in self.parts:
            out = out + p
        return out

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)


# -- traversal plans ----------------------------------------------------------


@dataclass
class _TreePlan:
    roots: list[int]  # columns whose mask starts as the lowest bits
    steps: list[tuple[int, int, int]]  # (parent column, child column, child column)


def _tree_plan(g, col, vertices, *, dead=(), seeds=(), blocked=()) -> _TreePlan:
    inner = set(g.inner_vertices)
    dead = set(dead)
    assigned = set(dead) | {e for _, e in seeds}
    visited = set(blocked)
    roots: list[int] = []
    steps: list[tuple[int, int, int]] = []
    queue: deque = deque()

    def drain():
        while queue:
            v, hp = queue.popleft()
            if v in visited:
                continue
            visited.add(v)
            h1, h2 = [h for h in g.incidence[v] if h != hp]
            steps.append((col[hp[0]], col[h1[0]], col[h2[0]]))
            for f, side in (h1, h2):
                if f in assigned:
                    continue
                assigned.add(f)
                far = g.edges[f][1 - side]
                if far in inner and far not in visited:
                    queue.append((far, (f, 1 - side)))

    for v, e in seeds:
        queue.append((v, next(h for h in g.incidence[v] if h[0] == e)))
    drain()
    for r in sorted(vertices):
        if r not in inner or r in visited:
            continue
        hs = g.incidence[r]
        h0 = next((h for h in hs if h[0] not in dead), hs[0])
        queue.append((r, h0))
        if h0[0] not in assigned:
            assigned.add(h0[0])
            roots.append(col[h0[0]])
            far = g.edges[h0[0]][1 - h0[1]]
            if far in inner and far != r:
                queue.append((far, (h0[0], 1 - h0[1])))
        drain()
    return _TreePlan(roots, steps)


@dataclass
class _Cycle:
    k: int
    ecol: list[int]  # column of E_i, the edge from c_i to c_(i+1)
    lcol: list[int]  # column of the leg at c_i
    poly_plans: list[_TreePlan]  # slot walk on the polygon with E_j removed
    pendant: _TreePlan
    pcols: list[int]
    other_cols: list[int]


def _cycle_data(g: TrivalentGraph, col, comp) -> _Cycle:
    cyc = sorted(e for e in cycle_edges(g) if g.ends(e)[0] in comp)
    cverts = sorted({x for e in cyc for x in g.ends(e)})
    c0 = cverts[0]
    edges_seq: list[str] = []
    verts = [c0]
    if len(cyc) == 1:
        edges_seq = cyc
    else:
        cur, prev = c0, None
        while True:
            e = min(f for f, _ in g.incidence[cur] if f in cyc and f != prev)
            edges_seq.append(e)
            cur = g.other_end(e, cur)
            prev = e
            if cur == c0:
                break
            verts.append(cur)
    legs = [next(f for f, _ in g.incidence[v] if f not in cyc) for v in verts]
    far = [g.other_end(l, v) for l, v in zip(legs, verts)]
    off_cycle = set(comp) - set(verts)
    poly_plans = [
        _tree_plan(g, col, verts, dead={edges_seq[j]}, blocked=off_cycle) for j in range(len(verts))
    ]
    seeds = [(f, l) for f, l in zip(far, legs) if not g.is_leaf(f)]
    pendant = _tree_plan(g, col, comp, seeds=seeds, blocked=set(verts))
    pcols = [col[e] for e in edges_seq] + [col[e] for e in legs]
    comp_cols = [col[e] for e, (u, _) in g.edges.items() if u in comp]
    return _Cycle(
        k=len(verts),
        ecol=[col[e] for e in edges_seq],
        lcol=[col[e] for e in legs],
        poly_plans=poly_plans,
        pendant=pendant,
        pcols=pcols,
        other_cols=[c for c in comp_cols if c not in pcols],
    )


class _Structure:
    def __init__(self, g: TrivalentGraph):
        self.g = g
        self.eids = g.edge_ids
        self.col = {e: i for i, e in enumerate(self.eids)}
        self.trees: list[_TreePlan] = []
        self.cycle: _Cycle | None = None
        self.betti = 0
        for comp in sorted(g.components(), key=min):
            ne = sum(1 for u, _ in g.edges.values() if u in comp)
            b = ne - len(comp) + 1
            self.betti += b
            if b == 0:
                self.trees.append(_tree_plan(g, self.col, comp))
            elif b == 1:
                self.cycle = _cycle_data(g, self.col, comp)


@lru_cache(maxsize=64)
def _structure(g: TrivalentGraph) -> _Structure:
    return _Structure(g)


# -- bit-mask kernels ---------------------------------------------------------


def _ones(n, dtype):
    """Masks with the lowest ``n`` bits set."""
    if np.dtype(dtype) == object:
        return np.array([(1 << int(x)) - 1 for x in n], dtype=object)
    return np.left_shift(np.int64(1), n.astype(np.int64)) - 1


def _lowest(mask, k, nbits):
    """The lowest ``k`` set bits of each mask."""
    take = np.zeros_like(mask)
    cnt = np.zeros(mask.shape[0], dtype=np.int64)
    for b in range(nbits):
        bit = ((mask >> b) & 1).astype(np.int64)
        sel = bit * (cnt < k)
        take |= sel.astype(mask.dtype) << b
        cnt += sel
    return take


def _run_plan(plan: _TreePlan, vals, masks, full, nbits) -> None:
    for c in plan.roots:
        masks[:, c] = _ones(vals[:, c], masks.dtype)
    for p, c1, c2 in plan.steps:
        a, b, c = vals[:, p], vals[:, c1], vals[:, c2]
        z = (a + b - c) // 2
        x = (b + c - a) // 2
        s = masks[:, p]
        zs = _lowest(s, z, nbits)
        xs = _lowest(~s & full, x, nbits)
        masks[:, c1] = zs | xs
        masks[:, c2] = (s & ~zs) | xs


def _bits(mask_col, s):
    return ((mask_col >> s) & 1).astype(np.int64)


# -- polygon peeling ----------------------------------------------------------


def _cycle_search(cy: _Cycle, rem, left, d):
    """Find a degree-``d`` polygon point ``mu`` (d = 1 or 2) with ``rem - mu`` in the cone.

    Returns ``(ok, mu)``; ``mu`` has the polygon columns filled.
    """
    n = rem.shape[0]
    k = cy.k
    states = d + 1
    ev = rem[:, cy.ecol]
    lv = rem[:, cy.lcol]
    feas = np.zeros((k, n, states, states), dtype=bool)
    legs = np.zeros((k, n, states, states), dtype=np.int64)
    for i in range(k):
        e_in, e_out, leg = ev[:, (i - 1) % k], ev[:, i], lv[:, i]
        for p in range(states):
            for q in range(states):
                found = np.zeros(n, dtype=bool)
                chosen = np.zeros(n, dtype=np.int64)
                for r in range(d + 1):
                    if k == 1 and p != q:
                        continue
                    if not local_ok(p, q, r, d):
                        continue
                    ok = local_ok_array(e_in - p, e_out - q, leg - r, left - d) & ~found
                    chosen[ok] = r
                    found |= ok
                feas[i, :, p, q] = found
                legs[i, :, p, q] = chosen
    reach = np.zeros((states, k, n, states), dtype=bool)
    for s in range(states):
        reach[s, 0] = feas[0, :, s, :]
        for i in range(1, k):
            reach[s, i] = (reach[s, i - 1][:, :, None] & feas[i]).any(axis=1)
    closes = np.stack([reach[s, k - 1][:, s] for s in range(states)], axis=1)
    ok = closes.any(axis=1)
    start = np.argmax(closes, axis=1)
    rows = np.arange(n)
    b = np.zeros((n, k), dtype=np.int64)
    b[:, k - 1] = start
    for i in range(k - 1, 0, -1):
        cand = reach[start, i - 1, rows] & feas[i, rows, :, b[:, i]]
        b[:, i - 1] = np.argmax(cand, axis=1)
    mu = np.zeros_like(rem)
    for i in range(k):
        mu[:, cy.ecol[i]] = b[:, i]
        mu[:, cy.lcol[i]] = legs[i, rows, b[:, (i - 1) % k], b[:, i]]
    return ok, mu


def _polygon_parts(cy: _Cycle, vals, m, dtype):
    n, ncols = vals.shape
    rem = vals.copy()
    parts = np.zeros((n, m, ncols), dtype=np.int64)
    deg = np.zeros((n, m), dtype=np.int64)
    left = np.full(n, m, dtype=np.int64)
    ptr = np.zeros(n, dtype=np.int64)
    pmask = np.zeros(ncols, dtype=np.int64)
    pmask[cy.pcols] = 1
    while True:
        act = left > 0
        if not act.any():
            break
        zero_e = (rem[:, cy.ecol] == 0)
        zero = act & zero_e.any(axis=1)
        if zero.any():
            first = np.argmax(zero_e, axis=1)
            for j in range(cy.k):
                sel = np.nonzero(zero & (first == j))[0]
                if sel.size == 0:
                    continue
                sub = rem[sel]
                masks = np.zeros(sub.shape, dtype=dtype)
                _run_plan(cy.poly_plans[j], sub, masks, _ones(left[sel], dtype), m)
                for s in range(m):
                    live = s < left[sel]
                    rows, slot = sel[live], ptr[sel][live] + s
                    for c in cy.pcols:
                        parts[rows, slot, c] = _bits(masks[live, c], s)
                    deg[rows, slot] = 1
            left[zero] = 0
        last = act & ~zero & (left == 1)
        if last.any():
            idx = np.nonzero(last)[0]
            parts[idx, ptr[idx]] = rem[idx] * pmask
            deg[idx, ptr[idx]] = 1
            left[idx] = 0
        big = np.nonzero(act & ~zero & (left >= 2))[0]
        if big.size == 0:
            continue
        ok, mu = _cycle_search(cy, rem[big], left[big], 1)
        for d, idx, piece in ((1, big[ok], mu[ok]), (2, big[~ok], None)):
            if idx.size == 0:
                continue
            if piece is None:
                ok2, piece = _cycle_search(cy, rem[idx], left[idx], 2)
                if not ok2.all():
                    raise ConeError("no summand of degree at most 2 found; input outside the cone?")
            parts[idx, ptr[idx]] = piece
            deg[idx, ptr[idx]] = d
            rem[idx] -= piece
            left[idx] -= d
            ptr[idx] += d
    return parts, deg


# -- driver -------------------------------------------------------------------


def _mask_dtype(m: int):
    return np.int64 if m <= MAX_MASK_BITS else object


def _decompose_chunk(st: _Structure, m: int, vals):
    n, ncols = vals.shape
    dtype = _mask_dtype(m)
    full = _ones(np.full(n, m), dtype)
    if st.cycle is not None:
        cy = st.cycle
        parts, deg = _polygon_parts(cy, vals, m, dtype)
        masks = np.zeros((n, ncols), dtype=dtype)
        for c in cy.lcol:
            for s in range(m):
                v = parts[:, s, c]
                masks[:, c] |= (v >= 1).astype(dtype) << s
                if s + 1 < m:
                    masks[:, c] |= ((deg[:, s] == 2) & (v == 2)).astype(dtype) << (s + 1)
        _run_plan(cy.pendant, vals, masks, full, m)
        target = _targets(deg)
        rows = np.arange(n)
        for s in range(m):
            for c in cy.other_cols:
                parts[rows, target[:, s], c] += _bits(masks[:, c], s)
    else:
        parts = np.zeros((n, m, ncols), dtype=np.int64)
        deg = np.ones((n, m), dtype=np.int64)
        target = _targets(deg)
    for plan in st.trees:
        masks = np.zeros((n, ncols), dtype=dtype)
        _run_plan(plan, vals, masks, full, m)
        cols = sorted({c for step in plan.steps for c in step} | set(plan.roots))
        rows = np.arange(n)
        for s in range(m):
            for c in cols:
                parts[rows, target[:, s], c] += _bits(masks[:, c], s)
    return parts, deg


def _targets(deg):
    """Slot that receives slot ``s``: itself, or its predecessor for the second half of a degree-2 part."""
    m = deg.shape[1]
    target = np.tile(np.arange(m), (deg.shape[0], 1))
    cont = deg == 0
    target[cont] -= 1
    return target


def decompose_array(g: TrivalentGraph, m: int, vectors) -> tuple[np.ndarray, np.ndarray]:
    """Decompose many degree-``m`` points at once.

    ``vectors`` is an ``(N, |E|)`` array over ``g.edge_ids``.  Returns
    ``(parts, degrees)`` of shapes ``(N, m, |E|)`` and ``(N, m)``: slot ``s``
    of a row holds a part of degree ``degrees[row, s]``; a degree-2 part
    occupies its slot and the next, which is left empty with degree 0.
    """
    st = _structure(g)
    if st.betti > 1:
        raise GraphError("decomposition is implemented for first Betti number at most 1")
    vals = np.asarray(vectors, dtype=np.int64).reshape(-1, len(st.eids))
    if m < 0:
        raise ConeError("degree must be nonnegative")
    bad = ~cone_mask(g, vals, m)
    if bad.any():
        row = int(np.argmax(bad))
        w = ConeElement(m, zip(st.eids, (int(x) for x in vals[row])))
        raise ConeError(f"point {w} is not in the cone: " + "; ".join(cone_violations(g, w)))
    n = vals.shape[0]
    if n <= CHUNK_ROWS:
        return _decompose_chunk(st, m, vals)
    out_p, out_d = [], []
    for lo in range(0, n, CHUNK_ROWS):
        p, d = _decompose_chunk(st, m, vals[lo : lo + CHUNK_ROWS])
        out_p.append(p)
        out_d.append(d)
    return np.concatenate(out_p), np.concatenate(out_d)


def decompose(g: TrivalentGraph, w: ConeElement) -> Decomposition:
    """Write ``w`` as a sum of generators (degree 1, or 2 when there is a cycle).

    >>> from graphcone.fixtures import load_fixture
    >>> from graphcone.cone import parse_element
    >>> lm = load_fixture("littleman")
    >>> decompose(lm, parse_element("deg=2;bar=2,loop=1,p3=1,p4=1")).degrees
    (2,)
    """
    bad = cone_violations(g, w)
    if bad:
        raise ConeError(f"point {w} is not in the cone: " + "; ".join(bad))
    st = _structure(g)
    parts, deg = decompose_array(g, w.degree, np.array([w.vector(st.eids)]))
    out = []
    for s in range(w.degree):
        d = int(deg[0, s])
        if d:
            out.append(ConeElement(d, zip(st.eids, (int(x) for x in parts[0, s]))))
    return Decomposition(tuple(out))


# -- degree-2 points on a polygon ---------------------------------------------


def polygon_cycle(g: TrivalentGraph) -> tuple[list[str], list[str]]:
    """Cycle edges ``E_0..E_(k-1)`` in walking order and the leg at each cycle vertex.

    ``E_i`` runs from cycle vertex ``c_i`` to ``c_(i+1)`` and the leg listed
    at position ``i`` sits at ``c_i``.  Raises unless ``g`` is a polygon
    graph: connected, one cycle, every leg a petiole.
    """
    if not g.is_connected() or _structure(g).betti != 1:
        raise GraphError("a polygon graph is connected with exactly one cycle")
    st = _structure(g)
    cy = st.cycle
    if cy.other_cols:
        raise GraphError("not a polygon graph: some cycle leg is not a petiole")
    return [st.eids[c] for c in cy.ecol], [st.eids[c] for c in cy.lcol]


def split_degree2(g: TrivalentGraph, w: ConeElement) -> tuple[ConeElement, ConeElement] | None:
    """Split a degree-2 point of a polygon graph into two networks, or return None.

    None means the point is indecomposable: every cycle edge carries 1 and
    an odd number of legs carry 2.  The cases:

    * every cycle edge is 2: twice the cycle;
    * every cycle edge is 1: the legs of value 2 cut the cycle into arcs and
      the two networks take alternate arcs, which needs an even count;
    * some cycle edge is 0, or values 1 and 2 are mixed: both networks take
      every 2-edge; along each run of 1-edges one network carries the path
      and hands it over to the other at every leg of value 2.
    """
    if w.degree != 2:
        raise ConeError(f"expected a degree-2 point, got degree {w.degree}")
    bad = cone_violations(g, w)
    if bad:
        raise ConeError("; ".join(bad))
    ev_ids, leg_ids = polygon_cycle(g)
    k = len(ev_ids)
    e = [w[x] for x in ev_ids]
    legs = [w[x] for x in leg_ids]

    def net(edges) -> ConeElement:
        return ConeElement(1, {x: 1 for x in edges})

    if all(v == 2 for v in e):
        return net(ev_ids), net(ev_ids)
    if all(v == 1 for v in e):
        twos = [i for i in range(k) if legs[i] == 2]
        if len(twos) % 2:
            return None
        if not twos:
            return net(ev_ids), ConeElement(1, {})
        first, second = [], []
        for a in range(len(twos)):
            lo, hi = twos[a], twos[(a + 1) % len(twos)]
            arc = []
            i = lo
            while True:
                arc.append(ev_ids[i])
                i = (i + 1) % k
                if i == hi:
                    break
            (first if a % 2 == 0 else second).extend(arc)
        tl = [leg_ids[i] for i in twos]
        return net(first + tl), net(second + tl)
    # a 0 or 2 on the cycle: start just after one, where both networks agree,
    # and carry the 1-edges along; this covers the zero-edge and mixed cases
    nets: tuple[list[str], list[str]] = ([], [])
    start = next(i for i in range(k) if e[i - 1] != 1)
    carrier = 0
    for t in range(k):
        i = (start + t) % k
        prev, cur, leg = e[i - 1], e[i], legs[i]
        if leg == 2:
            nets[0].append(leg_ids[i])
            nets[1].append(leg_ids[i])
        if prev == 1:
            if leg == 1:
                # the carrier leaves by the leg if the cycle stops, else the other joins
                nets[carrier if cur == 0 else 1 - carrier].append(leg_ids[i])
            elif leg == 2 and cur == 1:
                carrier = 1 - carrier
        elif leg == 1:
            # a run of 1-edges starts here; network 1 takes the leg unless it is a lone path
            carrier = 0
            nets[0 if prev == 0 else 1].append(leg_ids[i])
        if cur == 2:
            nets[0].append(ev_ids[i])
            nets[1].append(ev_ids[i])
        elif cur == 1:
            nets[carrier].append(ev_ids[i])
    return net(nets[0]), net(nets[1])
