"""Multigraded Hilbert tables.

A table counts cone points by degree ``m`` and by the petiole values at a
chosen list of leaves (the axes).  Three independent routes produce one:

* brute force, counting enumerated points;
* composition: normalise the graph to a caterpillar with loops and build
  the table from leaf and balloon tables by grafting, with one final gluing
  when there are no leaves;
* series: expand the rational function of a complete-intersection
  presentation.

All arithmetic is on exact integers.
"""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import GraphConeError, GraphError, SeriesError
from .graph import TrivalentGraph, invariants
from .iso import find_isomorphism
from .lattice_points import count_by_leaves
from .mutation import caterpillar_normal_form, caterpillar_shape

Key = tuple[int, ...]

PAPER_LITERAL_NOTE = (
    "paper-literal balloon series 1/((1-t)(1-s^2 t^2)) is inconsistent with lattice-point counts; "
    "the counted table is 1/((1-t)^2 (1-s^2 t^2))"
)


class HilbertTable:
    """Counts ``H(m; k)`` for ``0 <= m <= D``; absent entries are zero."""

    __slots__ = ("D", "axes", "_data")

    def __init__(self, D: int, axes: Sequence[str], counts: Mapping[tuple[int, Key], int] | None = None):
        if D < 0:
            raise GraphConeError("truncation degree must be nonnegative")
        if len(set(axes)) != len(axes):
            raise GraphConeError(f"repeated axis in {list(axes)}")
        self.D = D
        self.axes = tuple(axes)
        data: dict[int, dict[Key, int]] = {m: {} for m in range(D + 1)}
        for (m, k), c in (counts or {}).items():
            if len(k) != len(self.axes):
                raise GraphConeError(f"entry {k} does not match axes {self.axes}")
            if 0 <= m <= D and c:
                row = data[m]
                row[tuple(k)] = row.get(tuple(k), 0) + c
        self._data = {m: {k: c for k, c in row.items() if c} for m, row in data.items()}

    @classmethod
    def _from_rows(cls, D, axes, rows: Mapping[int, Mapping[Key, int]]) -> "HilbertTable":
        return cls(D, axes, {(m, k): c for m, row in rows.items() for k, c in row.items()})

    # -- access ---------------------------------------------------------------

    def row(self, m: int) -> Mapping[Key, int]:
        return self._data.get(m, {})

    def get(self, m: int, k: Sequence[int] = ()) -> int:
        return self._data.get(m, {}).get(tuple(k), 0)

    def total(self, m: int) -> int:
        return sum(self._data.get(m, {}).values())

    def totals(self) -> list[int]:
        return [self.total(m) for m in range(self.D + 1)]

    def entries(self) -> list[tuple[int, Key, int]]:
        return [(m, k, c) for m in range(self.D + 1) for k, c in sorted(self._data[m].items())]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HilbertTable):
            return NotImplemented
        return self.D == other.D and self.axes == other.axes and self._data == other._data

    def __repr__(self) -> str:
        return f"HilbertTable(D={self.D}, axes={self.axes}, totals={self.totals()})"

    def first_difference(self, other: "HilbertTable") -> str | None:
        """Describe the first entry (in (m, k) order) where the tables differ, ignoring axis names."""
        if self.D != other.D or len(self.axes) != len(other.axes):
            return f"shapes differ: D={self.D}/{other.D}, {len(self.axes)}/{len(other.axes)} axes"
        for m in range(self.D + 1):
            keys = sorted(set(self._data[m]) | set(other._data[m]))
            for k in keys:
                a, b = self.get(m, k), other.get(m, k)
                if a != b:
                    return f"m={m} k={list(k)}: {a} != {b}"
        return None

    # -- reshaping ------------------------------------------------------------

    def _index(self, axis: str) -> int:
        try:
            return self.axes.index(axis)
        except ValueError:
            raise GraphConeError(f"axis {axis!r} not among {list(self.axes)}") from None

    def marginalize(self, axis: str) -> "HilbertTable":
        i = self._index(axis)
        rows = {m: defaultdict(int) for m in range(self.D + 1)}
        for m, row in self._data.items():
            for k, c in row.items():
                rows[m][k[:i] + k[i + 1 :]] += c
        return HilbertTable._from_rows(self.D, self.axes[:i] + self.axes[i + 1 :], rows)

    def select(self, axes: Sequence[str]) -> "HilbertTable":
        """Keep ``axes`` in the given order, summing out every other axis."""
        t = self
        for a in self.axes:
            if a not in axes:
                t = t.marginalize(a)
        idx = [t._index(a) for a in axes]
        rows = {m: {tuple(k[i] for i in idx): c for k, c in row.items()} for m, row in t._data.items()}
        return HilbertTable._from_rows(t.D, tuple(axes), rows)

    def rename(self, mapping: Mapping[str, str]) -> "HilbertTable":
        return HilbertTable._from_rows(self.D, tuple(mapping.get(a, a) for a in self.axes), self._data)

    def truncate(self, D: int) -> "HilbertTable":
        return HilbertTable._from_rows(D, self.axes, {m: r for m, r in self._data.items() if m <= D})

    # -- output ---------------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {"D": self.D, "axes": list(self.axes), "entries": [[m, list(k), c] for m, k, c in self.entries()]}
        )

    @classmethod
    def from_json(cls, text: str) -> "HilbertTable":
        obj = json.loads(text)
        return cls(obj["D"], obj["axes"], {(m, tuple(k)): c for m, k, c in obj["entries"]})

    def to_text(self) -> str:
        lines = []
        if not self.axes:
            for m in range(self.D + 1):
                lines.append(f"m={m}: {self.total(m)}")
        else:
            for m, k, c in self.entries():
                coords = " ".join(f"{a}={v}" for a, v in zip(self.axes, k))
                lines.append(f"m={m} {coords}: {c}")
        return "\n".join(lines) + "\n"


# -- base tables ----------------------------------------------------------------


def _tripod_ok(m: int, a: int, b: int, c: int) -> bool:
    s = a + b + c
    return s % 2 == 0 and a <= b + c and b <= a + c and c <= a + b and s <= 2 * m


def tripod_table(D: int, axes: Sequence[str] = ("a", "b", "c")) -> HilbertTable:
    """One point for each admissible triple: even sum, triangle inequalities, half-sum at most m."""
    counts = {}
    for m in range(D + 1):
        for a in range(m + 1):
            for b in range(m + 1):
                for c in range(abs(a - b), min(a + b, 2 * m - a - b) + 1, 2):
                    counts[(m, (a, b, c))] = 1
    return HilbertTable(D, axes, counts)


def bare_edge_table(D: int, outer: str, inner: str) -> HilbertTable:
    """A single edge between two leaves: both ends carry the same value, at most m."""
    return HilbertTable(D, (outer, inner), {(m, (k, k)): 1 for m in range(D + 1) for k in range(m + 1)})


def free_leaf_table(D: int, axis: str) -> HilbertTable:
    """A bare edge whose outer leaf is not tracked: every value up to m once."""
    return HilbertTable(D, (axis,), {(m, (k,)): 1 for m in range(D + 1) for k in range(m + 1)})


def balloon_table(D: int, axis: str = "l", *, paper_literal: bool = False) -> HilbertTable:
    """Loop with one petiole, graded by the petiole value ``k``.

    The loop value ``x`` ranges over ``k/2 <= x <= m - k/2`` for even
    ``k``, giving ``m - k + 1`` points.  ``paper_literal`` instead expands
    the one-factor series ``1/((1-t)(1-s^2 t^2))``, one point per even
    ``k <= m``; see :data:`PAPER_LITERAL_NOTE`.
    """
    counts = {}
    for m in range(D + 1):
        for k in range(0, m + 1, 2):
            counts[(m, (k,))] = 1 if paper_literal else m - k + 1
    return HilbertTable(D, (axis,), counts)


# -- operations ---------------------------------------------------------------


def _split_axis(t: HilbertTable, axis: str) -> tuple[int, tuple[str, ...]]:
    i = t._index(axis)
    return i, t.axes[:i] + t.axes[i + 1 :]


def hilbert_graft(t1: HilbertTable, l1: str, t2: HilbertTable, l2: str, new_axis: str) -> HilbertTable:
    """Table of the graft of two graphs at leaves ``l1``, ``l2``.

    ``H(m; rest1, rest2, k) = sum over j1, j2 of H1(m; rest1, j1) T(m; j1, j2, k) H2(m; rest2, j2)``
    with ``T`` the tripod table.  The new leaf's axis comes last.
    """
    if t1.D != t2.D:
        raise GraphConeError(f"truncation mismatch: {t1.D} vs {t2.D}")
    i1, rest1 = _split_axis(t1, l1)
    i2, rest2 = _split_axis(t2, l2)
    axes = rest1 + rest2 + (new_axis,)
    if len(set(axes)) != len(axes):
        raise GraphConeError(f"grafted tables share axis names: {axes}")
    rows = {}
    for m in range(t1.D + 1):
        left: dict[int, dict[Key, int]] = defaultdict(dict)
        for k, c in t1.row(m).items():
            left[k[i1]][k[:i1] + k[i1 + 1 :]] = c
        right: dict[int, dict[Key, int]] = defaultdict(dict)
        for k, c in t2.row(m).items():
            right[k[i2]][k[:i2] + k[i2 + 1 :]] = c
        out: dict[Key, int] = defaultdict(int)
        for j1, r1 in left.items():
            for j2, r2 in right.items():
                for knew in range(abs(j1 - j2), min(j1 + j2, 2 * m - j1 - j2) + 1, 2):
                    for a, c1 in r1.items():
                        for b, c2 in r2.items():
                            out[a + b + (knew,)] += c1 * c2
        rows[m] = out
    return HilbertTable._from_rows(t1.D, axes, rows)


def hilbert_glue(t: HilbertTable, l1: str, l2: str) -> HilbertTable:
    """Table after gluing leaves ``l1`` and ``l2``: keep entries where their values agree."""
    if l1 == l2:
        raise GraphConeError("cannot glue an axis to itself")
    i, j = t._index(l1), t._index(l2)
    keep = [x for x in range(len(t.axes)) if x not in (i, j)]
    rows = {}
    for m in range(t.D + 1):
        out: dict[Key, int] = defaultdict(int)
        for k, c in t.row(m).items():
            if k[i] == k[j]:
                out[tuple(k[x] for x in keep)] += c
        rows[m] = out
    return HilbertTable._from_rows(t.D, tuple(t.axes[x] for x in keep), rows)


def hilbert_product(t1: HilbertTable, t2: HilbertTable) -> HilbertTable:
    """Table of a disjoint union: points pair up degree by degree."""
    if t1.D != t2.D:
        raise GraphConeError(f"truncation mismatch: {t1.D} vs {t2.D}")
    if set(t1.axes) & set(t2.axes):
        raise GraphConeError("tables share axis names")
    rows = {}
    for m in range(t1.D + 1):
        rows[m] = {a + b: c1 * c2 for a, c1 in t1.row(m).items() for b, c2 in t2.row(m).items()}
    return HilbertTable._from_rows(t1.D, t1.axes + t2.axes, rows)


def balloon_star_kernel(m: int, j: int, k: int) -> int:
    """Points of a balloon grafted at a leaf with value ``j``, new leaf value ``k``.

    Sums ``m - j1 + 1`` over the balloon petiole values ``j1``: even,
    ``|j - k| <= j1 <= min(j + k, 2m - j - k, m)``.  An arithmetic series.
    """
    if (j + k) % 2:
        return 0
    lo = abs(j - k)
    hi = min(j + k, 2 * m - j - k, m)
    hi -= hi % 2
    if hi < lo:
        return 0
    n = (hi - lo) // 2 + 1
    return n * (m + 1) - n * (lo + hi) // 2


def balloon_star(t: HilbertTable, axis: str, new_axis: str) -> HilbertTable:
    """Closed form for ``hilbert_graft(balloon_table, l, t, axis, new_axis)``."""
    i, rest = _split_axis(t, axis)
    rows = {}
    for m in range(t.D + 1):
        out: dict[Key, int] = defaultdict(int)
        for key, c in t.row(m).items():
            j = key[i]
            r = key[:i] + key[i + 1 :]
            for k in range(m + 1):
                w = balloon_star_kernel(m, j, k)
                if w:
                    out[r + (k,)] += c * w
        rows[m] = out
    return HilbertTable._from_rows(t.D, rest + (new_axis,), rows)


# -- the three routes -------------------------------------------------------------


def _check_axes(g: TrivalentGraph, axes: Sequence[str]) -> tuple[str, ...]:
    axes = tuple(axes)
    if len(set(axes)) != len(axes):
        raise GraphError(f"repeated leaf in {list(axes)}")
    for a in axes:
        if not g.is_leaf(a):
            raise GraphError(f"{a!r} is not a leaf of the graph")
    return axes


def hilbert_brute(
    g: TrivalentGraph, D: int, axes: Sequence[str] = (), *, budget: int | None = None, threads: int = 1
) -> HilbertTable:
    """Count enumerated cone points of each degree, bucketed by petiole values."""
    axes = _check_axes(g, axes)
    counts = {}
    for m in range(D + 1):
        for k, c in count_by_leaves(g, m, axes, budget=budget, threads=threads).items():
            counts[(m, k)] = c
    return HilbertTable(D, axes, counts)


def _caterpillar_table(shape: Sequence[str | None], D: int, axes: tuple[str, ...], paper_literal: bool) -> HilbertTable:
    def piece(slot: str | None, inner: str) -> HilbertTable:
        if slot is None:
            return balloon_table(D, inner, paper_literal=paper_literal)
        if slot in axes:
            return bare_edge_table(D, slot, inner)
        return free_leaf_table(D, inner)

    # '#' cannot occur in ids read from graph files, so these never clash
    grow = "#0"
    table = piece(shape[0], grow)
    for i, slot in enumerate(shape[1:-1], 1):
        nxt = f"#{i}"
        table = hilbert_graft(table, grow, piece(slot, f"#in{i}"), f"#in{i}", nxt)
        grow = nxt
    last = shape[-1]
    if last is None:
        table = hilbert_glue(hilbert_product(table, balloon_table(D, "#end", paper_literal=paper_literal)), grow, "#end")
    elif last in axes:
        table = table.rename({grow: last})
    else:
        table = table.marginalize(grow)
    return table.select(axes)


def hilbert_compose(
    g: TrivalentGraph, D: int, axes: Sequence[str] = (), *, paper_literal: bool = False
) -> HilbertTable:
    """Table assembled from leaf and balloon tables along the caterpillar normal form.

    Mutations never rename leaves, so the normal form's leaves are the
    graph's own and the multigraded table transfers unchanged.  A
    disconnected graph is handled one component at a time.
    """
    axes = _check_axes(g, axes)
    comps = g.components()
    if len(comps) != 1:
        table = HilbertTable(D, (), {(m, ()): 1 for m in range(D + 1)})
        for comp in sorted(comps, key=min):
            sub = g.subgraph(comp)
            table = hilbert_product(table, hilbert_compose(sub, D, [a for a in axes if a in comp], paper_literal=paper_literal))
        return table.select(axes)
    normal, _ = caterpillar_normal_form(g)
    shape = caterpillar_shape(normal).slots
    if len(shape) < 2:
        raise GraphError("graph has no inner vertex")
    return _caterpillar_table(shape, D, axes, paper_literal)


# -- rational series --------------------------------------------------------------


Monomial = tuple[int, Key]


def ci_series(
    gen_degrees: Iterable[Monomial], relation_degrees: Iterable[Monomial], D: int, axes: Sequence[str] = ()
) -> HilbertTable:
    """Expand ``prod(1 - t^a s^v over relations) / prod(1 - t^a s^v over generators)`` to degree ``D``.

    The input is taken as given: nothing checks that it really is a
    complete intersection.  Negative coefficients in the expansion mean the
    presentation is inconsistent and raise :class:`SeriesError`.
    """
    axes = tuple(axes)
    gens, rels = list(gen_degrees), list(relation_degrees)
    for a, v in gens + rels:
        if len(v) != len(axes):
            raise SeriesError(f"exponent {v} does not match axes {axes}")
        if a < 1 or min(v, default=0) < 0:
            raise SeriesError(f"degree {a} with exponent {v} is not admissible")
    rows: dict[int, dict[Key, int]] = {m: defaultdict(int) for m in range(D + 1)}
    rows[0][(0,) * len(axes)] = 1
    for a, v in rels:
        new = {m: defaultdict(int, rows[m]) for m in rows}
        for m in range(a, D + 1):
            for k, c in rows[m - a].items():
                new[m][tuple(x + y for x, y in zip(k, v))] -= c
        rows = new
    for a, v in gens:
        for m in range(a, D + 1):
            for k, c in list(rows[m - a].items()):
                rows[m][tuple(x + y for x, y in zip(k, v))] += c
    for m, row in rows.items():
        for k, c in row.items():
            if c < 0:
                raise SeriesError(f"negative coefficient {c} at m={m} k={list(k)}: presentation is inconsistent")
    return HilbertTable._from_rows(D, axes, rows)


@dataclass(frozen=True)
class CIPresentation:
    """Generator and relation multidegrees of a complete-intersection presentation."""

    fixture: str
    axes: tuple[str, ...]
    gens: tuple[Monomial, ...]
    rels: tuple[Monomial, ...]

    def series(self, D: int) -> HilbertTable:
        return ci_series(self.gens, self.rels, D, self.axes)


_LM_GENS = ((1, (0, 0)), (1, (0, 0)), (1, (1, 1)), (1, (1, 1)), (2, (2, 0)), (2, (0, 2)))

CI_PRESENTATIONS: dict[str, CIPresentation] = {
    # four networks, y, z1, z2; relations: networks in degree 2 and y^2 = z1 z2
    "littleman": CIPresentation("littleman", ("a", "b"), _LM_GENS + ((2, (1, 1)),), ((2, (1, 1)), (4, (2, 2)))),
    # four networks, z1, z2; relation: the four networks sum to z1 + z2
    "hammock": CIPresentation("hammock", ("a", "b"), _LM_GENS, ((4, (2, 2)),)),
    "dumbbell": CIPresentation("dumbbell", (), ((1, ()),) * 4, ()),
    "theta": CIPresentation("theta", (), ((1, ()),) * 4, ()),
    "tripod": CIPresentation(
        "tripod", ("a", "b", "d"), ((1, (0, 0, 0)), (1, (1, 1, 0)), (1, (1, 0, 1)), (1, (0, 1, 1))), ()
    ),
}


def match_presentation(g: TrivalentGraph) -> tuple[CIPresentation, dict[str, str]] | None:
    """A bundled presentation for a graph isomorphic to its fixture, with the leaf map."""
    from .fixtures import load_fixture

    for name, pres in CI_PRESENTATIONS.items():
        fx = load_fixture(name)
        if invariants(fx) != invariants(g):
            continue
        iso = find_isomorphism(fx, g)
        if iso is not None:
            return pres, {a: iso[a] for a in pres.axes}
    return None


def hilbert_series_table(g: TrivalentGraph, D: int, axes: Sequence[str] = ()) -> HilbertTable:
    axes = _check_axes(g, axes)
    found = match_presentation(g)
    if found is None:
        raise GraphConeError(
            "no complete-intersection presentation is bundled for this graph; "
            f"known: {', '.join(CI_PRESENTATIONS)}"
        )
    pres, leaf_map = found
    return pres.series(D).rename(leaf_map).select(axes)


# -- mutation invariance ----------------------------------------------------------


def leaf_correspondence(g1: TrivalentGraph, g2: TrivalentGraph) -> dict[str, str] | None:
    """Leaf bijection induced by normal forms: leaves keep their ids along mutations."""
    h1, _ = caterpillar_normal_form(g1)
    h2, _ = caterpillar_normal_form(g2)
    iso = find_isomorphism(h1, h2)
    if iso is None:
        return None
    return {l: iso[l] for l in g1.leaves}


def verify_mutation_invariance(
    g1: TrivalentGraph,
    g2: TrivalentGraph,
    D: int,
    S1: Sequence[str] = (),
    S2: Sequence[str] | None = None,
    *,
    budget: int | None = None,
) -> tuple[bool, str]:
    """Compare brute-force tables of two graphs; returns ``(agree, report)``.

    ``S2`` defaults to the image of ``S1`` under :func:`leaf_correspondence`.
    """
    i1, i2 = invariants(g1), invariants(g2)
    key1 = (i1.num_leaves, i1.betti, i1.num_components)
    key2 = (i2.num_leaves, i2.betti, i2.num_components)
    if key1 != key2:
        return False, f"invariants differ: (n, g, comp) = {key1} vs {key2}"
    S1 = tuple(S1)
    if S2 is None:
        if not S1:
            S2 = ()
        else:
            if not (g1.is_connected() and g2.is_connected()):
                raise GraphError("give both leaf lists for disconnected graphs")
            corr = leaf_correspondence(g1, g2)
            if corr is None:
                return False, "normal forms are not isomorphic"
            S2 = tuple(corr[l] for l in S1)
    if len(S1) != len(S2):
        raise GraphError("leaf lists must have the same length")
    t1 = hilbert_brute(g1, D, S1, budget=budget)
    t2 = hilbert_brute(g2, D, S2, budget=budget)
    diff = t1.first_difference(t2)
    if diff is None:
        return True, f"tables agree up to D={D} on axes {list(S1)} -> {list(S2)}"
    return False, f"first discrepancy at {diff}"
