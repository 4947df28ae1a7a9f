"""The graded lattice and the cone of edge labelings of a trivalent graph.

An element is a degree together with a nonnegative integer on every edge.
At an inner vertex the three incident half-edges carry values ``a, b, c``
(a loop supplies two of them, both equal to its value).  The element lies
in the lattice when ``a + b + c`` is even at every inner vertex, and in the
cone when moreover the triangle inequalities hold there and the degree is
at least half of every such vertex sum.  Leaves impose nothing.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .errors import ConeError, GraphError, GraphParseError
from .graph import TrivalentGraph, cut_edge, cut_edge_ids, cycle_edges


class ConeElement:
    """Degree plus edge coefficients; zero coefficients are not stored.

    Arithmetic is componentwise.  Coefficients may go negative under
    subtraction; membership is a separate question answered by :func:`in_cone`.
    """

    __slots__ = ("_degree", "_coeffs", "_key")

    def __init__(self, degree: int, coeffs: Mapping[str, int] | Iterable[tuple[str, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        clean = {}
        for e, v in items:
            v = int(v)
            if v:
                clean[str(e)] = clean.get(str(e), 0) + v
        self._degree = int(degree)
        self._coeffs = MappingProxyType(dict(sorted((e, v) for e, v in clean.items() if v)))
        self._key = (self._degree, tuple(self._coeffs.items()))

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def coeffs(self) -> Mapping[str, int]:
        return self._coeffs

    def __getitem__(self, e: str) -> int:
        return self._coeffs.get(e, 0)

    def vector(self, edge_ids: Iterable[str]) -> tuple[int, ...]:
        return tuple(self._coeffs.get(e, 0) for e in edge_ids)

    def __add__(self, other: "ConeElement") -> "ConeElement":
        c = dict(self._coeffs)
        for e, v in other._coeffs.items():
            c[e] = c.get(e, 0) + v
        return ConeElement(self._degree + other._degree, c)

    def __sub__(self, other: "ConeElement") -> "ConeElement":
        c = dict(self._coeffs)
        for e, v in other._coeffs.items():
            c[e] = c.get(e, 0) - v
        return ConeElement(self._degree - other._degree, c)

    def __mul__(self, k: int) -> "ConeElement":
        return ConeElement(self._degree * k, {e: v * k for e, v in self._coeffs.items()})

    __rmul__ = __mul__

    def restrict(self, edges: Iterable[str]) -> "ConeElement":
        keep = set(edges)
        return ConeElement(self._degree, {e: v for e, v in self._coeffs.items() if e in keep})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConeElement):
            return NotImplemented
        return self._key == other._key

    def __lt__(self, other: "ConeElement") -> bool:
        return self._key < other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"ConeElement({format_element(self)!r})"

    def __str__(self) -> str:
        return format_element(self)

    @classmethod
    def zero(cls, degree: int = 0) -> "ConeElement":
        return cls(degree, {})


def sum_elements(elements: Iterable[ConeElement]) -> ConeElement:
    total = ConeElement.zero()
    for x in elements:
        total = total + x
    return total


def format_element(w: ConeElement) -> str:
    """Text form ``deg=<m>;<edge>=<value>,...`` with edges sorted by id."""
    return f"deg={w.degree};" + ",".join(f"{e}={v}" for e, v in w.coeffs.items())


def parse_element(text: str) -> ConeElement:
    """Inverse of :func:`format_element`; omitted edges are zero.

    >>> parse_element("deg=2;loop=1,bar=2").coeffs["bar"]
    2
    """
    s = text.strip()
    head, sep, rest = s.partition(";")
    if not head.startswith("deg="):
        raise GraphParseError(f"element must start with 'deg=<m>;': {text!r}")
    try:
        degree = int(head[4:])
    except ValueError:
        raise GraphParseError(f"bad degree in {text!r}") from None
    coeffs: dict[str, int] = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        e, eq, v = item.partition("=")
        if not eq or not e:
            raise GraphParseError(f"bad coefficient {item!r} in {text!r}")
        if e in coeffs:
            raise GraphParseError(f"edge {e!r} listed twice in {text!r}")
        try:
            coeffs[e] = int(v)
        except ValueError:
            raise GraphParseError(f"bad value for {e!r} in {text!r}") from None
    return ConeElement(degree, coeffs)


# -- local data at a vertex ---------------------------------------------------


@dataclass(frozen=True)
class LocalTriple:
    """Values ``a, b, c`` of the half-edges at an inner vertex.

    ``x``, ``y``, ``z`` count the local paths joining the pairs (b, c),
    (a, c) and (a, b) respectively.
    """

    a: int
    b: int
    c: int

    @property
    def x(self) -> int:
        return (-self.a + self.b + self.c) // 2

    @property
    def y(self) -> int:
        return (self.a - self.b + self.c) // 2

    @property
    def z(self) -> int:
        return (self.a + self.b - self.c) // 2

    @property
    def degree(self) -> int:
        return (self.a + self.b + self.c) // 2


def local_ok(a: int, b: int, c: int, degree: int) -> bool:
    """Cone conditions at one vertex with half-edge values ``a, b, c``."""
    s = a + b + c
    return (
        a >= 0 and b >= 0 and c >= 0
        and s % 2 == 0
        and a <= b + c and b <= a + c and c <= a + b
        and s <= 2 * degree
    )


def _check_keys(g: TrivalentGraph, w: ConeElement) -> None:
    for e in w.coeffs:
        if e not in g.edges:
            raise ConeError(f"element names unknown edge {e!r}")


def _inner(g: TrivalentGraph, v: str) -> None:
    if v not in g.incidence:
        raise GraphError(f"unknown vertex {v!r}")
    if g.is_leaf(v):
        raise ConeError(f"vertex {v!r} is a leaf; vertex functionals live on inner vertices")


def local_values(g: TrivalentGraph, w: ConeElement, v: str) -> tuple[int, int, int]:
    """Coefficients of the three half-edges at ``v`` in incidence order."""
    _inner(g, v)
    a, b, c = (w[e] for e, _ in g.incidence[v])
    return a, b, c


def vertex_sum(g: TrivalentGraph, w: ConeElement, v: str) -> int:
    return sum(local_values(g, w, v))


def deg_v(g: TrivalentGraph, w: ConeElement, v: str):
    """Half the vertex sum at ``v``; an ``int`` when even, else a ``Fraction``."""
    s = vertex_sum(g, w, v)
    return s // 2 if s % 2 == 0 else Fraction(s, 2)


def deg_min(g: TrivalentGraph, w: ConeElement) -> int:
    """Least degree at which the edge part of ``w`` lies in the cone (0 if no inner vertex)."""
    _check_keys(g, w)
    best = 0
    for v in g.inner_vertices:
        s = vertex_sum(g, w, v)
        best = max(best, (s + 1) // 2)
    return best


def lattice_violations(g: TrivalentGraph, w: ConeElement) -> list[str]:
    _check_keys(g, w)
    out = []
    for v in g.inner_vertices:
        s = vertex_sum(g, w, v)
        if s % 2:
            out.append(f"parity fails at vertex {v}: half-edge sum {s} is odd")
    return out


def in_lattice(g: TrivalentGraph, w: ConeElement) -> bool:
    return not lattice_violations(g, w)


def cone_violations(g: TrivalentGraph, w: ConeElement) -> list[str]:
    """Human-readable list of every failed cone condition; empty iff in the cone."""
    out = []
    _check_keys(g, w)
    for e, val in w.coeffs.items():
        if val < 0:
            out.append(f"coefficient of edge {e} is negative ({val})")
    if w.degree < 0:
        out.append(f"degree {w.degree} is negative")
    for v in g.inner_vertices:
        a, b, c = local_values(g, w, v)
        s = a + b + c
        if s % 2:
            out.append(f"parity fails at vertex {v}: half-edge sum {s} is odd")
        for big, rest in ((a, b + c), (b, a + c), (c, a + b)):
            if big > rest:
                out.append(f"triangle inequality fails at vertex {v}: {big} > {rest}")
                break
        if s > 2 * w.degree:
            out.append(f"degree {w.degree} is below the degree {s / 2:g} at vertex {v}")
    return out


def in_cone(g: TrivalentGraph, w: ConeElement) -> bool:
    if w.degree < 0:
        return False
    _check_keys(g, w)
    for e, val in w.coeffs.items():
        if val < 0:
            return False
    for v in g.inner_vertices:
        if not local_ok(*local_values(g, w, v), w.degree):
            return False
    return True


def require_cone(g: TrivalentGraph, w: ConeElement) -> None:
    bad = cone_violations(g, w)
    if bad:
        raise ConeError("; ".join(bad))


def local_paths(g: TrivalentGraph, w: ConeElement, v: str) -> LocalTriple:
    a, b, c = local_values(g, w, v)
    s = a + b + c
    if s % 2:
        raise ConeError(f"parity fails at vertex {v}: half-edge sum {s} is odd")
    if min(a, b, c) < 0 or a > b + c or b > a + c or c > a + b:
        raise ConeError(f"triangle inequality fails at vertex {v}: ({a}, {b}, {c})")
    return LocalTriple(a, b, c)


# -- cutting ------------------------------------------------------------------


def lift_cut(g: TrivalentGraph, w: ConeElement, e: str) -> tuple[TrivalentGraph, ConeElement]:
    """Carry ``w`` to the graph with ``e`` cut; both halves get ``w[e]``."""
    gc = cut_edge(g, e)
    e1, e2, _, _ = cut_edge_ids(g, e)
    c = {k: v for k, v in w.coeffs.items() if k != e}
    c[e1] = c[e2] = w[e]
    return gc, ConeElement(w.degree, c)


def project(
    g: TrivalentGraph, w: ConeElement, e: str
) -> tuple[tuple[TrivalentGraph, ConeElement], tuple[TrivalentGraph, ConeElement]]:
    """Split ``w`` across a non-cycle internal edge into the two sides.

    The first piece contains ``e``'s end 0; other components of ``g`` are
    dropped.  Both pieces keep the degree.
    """
    if e in cycle_edges(g):
        raise ConeError(f"edge {e!r} is a cycle edge; cutting it does not separate the graph")
    gc, lifted = lift_cut(g, w, e)
    out = []
    for end in g.ends(e):
        comp = next(c for c in gc.components() if end in c)
        sub = gc.subgraph(comp)
        out.append((sub, lifted.restrict(sub.edges)))
    return out[0], out[1]


# -- batch membership ---------------------------------------------------------


def local_ok_array(a, b, c, degree):
    """Vectorised :func:`local_ok` over numpy arrays."""
    s = a + b + c
    return (
        (a >= 0) & (b >= 0) & (c >= 0)
        & (s % 2 == 0)
        & (a <= b + c) & (b <= a + c) & (c <= a + b)
        & (s <= 2 * degree)
    )


def cone_mask(g: TrivalentGraph, vectors, degree):
    """Row-wise cone membership for an ``(N, |E|)`` array over ``g.edge_ids``.

    ``degree`` is a scalar or a length-``N`` array.
    """
    v = np.asarray(vectors)
    deg = np.asarray(degree)
    col = {e: i for i, e in enumerate(g.edge_ids)}
    ok = (v >= 0).all(axis=1) & (deg >= 0)
    for x in g.inner_vertices:
        i, j, k = (col[e] for e, _ in g.incidence[x])
        ok &= local_ok_array(v[:, i], v[:, j], v[:, k], deg)
    return ok
