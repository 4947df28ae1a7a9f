"""Minimal generators of the cone and semigroup relations among them.

Trees are generated by their networks.  With one cycle the generators are
the networks plus the degree-2 points whose cycle edges all carry 1 and
whose cycle legs carry 0 or 2, with an odd number of 2s.  Beyond that no
closed form is known, and we saturate: a point of degree ``d`` is a
generator iff subtracting no generator of smaller degree leaves a cone
point.  That test is exact up to the degree cap; generators above the cap
are simply not looked for, and a warning is raised when the cap itself
still produced new ones.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from .cone import ConeElement, cone_mask, cone_violations, sum_elements
from .errors import ConeError, GraphConeError
from .graph import TrivalentGraph, classify_edges, CYCLE_EDGE, CYCLE_LEG, enumerate_networks, invariants
from .lattice_points import point_array

TREE_DEGREE1 = "tree_degree1"
CLOSED_FORM_G1 = "closed_form_g1"
BRUTE_SATURATION = "brute_saturation"
METHODS = (TREE_DEGREE1, CLOSED_FORM_G1, BRUTE_SATURATION)


class GeneratorCapWarning(UserWarning):
    """Saturation found generators at the degree cap; higher ones may exist."""


@dataclass(frozen=True)
class GeneratorSet:
    generators: tuple[ConeElement, ...]
    method: str
    degree_cap: int | None
    may_be_truncated: bool = field(default=False)

    def by_degree(self) -> dict[int, list[ConeElement]]:
        out: dict[int, list[ConeElement]] = {}
        for x in self.generators:
            out.setdefault(x.degree, []).append(x)
        return out

    def counts(self) -> dict[int, int]:
        return {d: len(xs) for d, xs in self.by_degree().items()}

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self) -> Iterator[ConeElement]:
        return iter(self.generators)

    def __contains__(self, w: object) -> bool:
        return w in self.generators


def _ordered(g: TrivalentGraph, xs: Iterable[ConeElement]) -> tuple[ConeElement, ...]:
    eids = g.edge_ids
    return tuple(sorted(xs, key=lambda w: (w.degree, w.vector(eids))))


def network_elements(g: TrivalentGraph) -> list[ConeElement]:
    """The networks of ``g`` as degree-1 cone points."""
    return [ConeElement(1, {e: 1 for e in n.support}) for n in enumerate_networks(g)]


def has_g1_generator_profile(g: TrivalentGraph, w: ConeElement) -> bool:
    """Degree 2, every cycle edge 1, cycle legs in {0, 2} with an odd number of 2s."""
    if w.degree != 2:
        return False
    tags = classify_edges(g)
    twos = 0
    for e, info in tags.items():
        if info.tag == CYCLE_EDGE and w[e] != 1:
            return False
        if info.tag == CYCLE_LEG:
            if w[e] not in (0, 2):
                return False
            twos += w[e] == 2
    return twos % 2 == 1


def _closed_form_g1(g: TrivalentGraph, budget, threads) -> list[ConeElement]:
    eids = g.edge_ids
    deg2 = [ConeElement(2, zip(eids, (int(x) for x in row))) for row in point_array(g, 2, budget=budget, threads=threads)]
    return network_elements(g) + [w for w in deg2 if has_g1_generator_profile(g, w)]


def saturate(
    g: TrivalentGraph, degree_cap: int, *, budget: int | None = None, threads: int = 1
) -> tuple[list[ConeElement], bool]:
    """Generators of degree at most ``degree_cap`` by exhaustive search.

    Returns the generators and whether any appeared at the cap.
    """
    eids = g.edge_ids
    found: list[tuple[int, np.ndarray]] = []
    out: list[ConeElement] = []
    at_cap = False
    for d in range(1, degree_cap + 1):
        pts = point_array(g, d, budget=budget, threads=threads)
        split = np.zeros(pts.shape[0], dtype=bool)
        for dg, vec in found:
            todo = ~split
            if not todo.any():
                break
            split[todo] |= cone_mask(g, pts[todo] - vec, d - dg)
        new = pts[~split]
        for row in new:
            found.append((d, row))
            out.append(ConeElement(d, zip(eids, (int(x) for x in row))))
        if d == degree_cap and new.shape[0]:
            at_cap = True
    return out, at_cap


def minimal_generators(
    g: TrivalentGraph,
    degree_cap: int = 4,
    *,
    method: str = "auto",
    budget: int | None = None,
    threads: int = 1,
) -> GeneratorSet:
    """Minimal generating set of the cone, ordered by degree then coefficients.

    ``method="auto"`` picks the networks for forests, the closed form for a
    connected graph with one cycle, and saturation otherwise.
    """
    if degree_cap < 1:
        raise GraphConeError("degree cap must be at least 1")
    inv = invariants(g)
    if method == "auto":
        if inv.betti == 0:
            method = TREE_DEGREE1
        elif inv.betti == 1 and inv.num_components == 1:
            method = CLOSED_FORM_G1
        else:
            method = BRUTE_SATURATION
    if method == TREE_DEGREE1:
        if inv.betti != 0:
            raise GraphConeError("the network generating set needs a forest")
        return GeneratorSet(_ordered(g, network_elements(g)), method, degree_cap)
    if method == CLOSED_FORM_G1:
        if inv.betti != 1 or inv.num_components != 1:
            raise GraphConeError("the closed form needs a connected graph with exactly one cycle")
        return GeneratorSet(_ordered(g, _closed_form_g1(g, budget, threads)), method, degree_cap)
    if method == BRUTE_SATURATION:
        gens, at_cap = saturate(g, degree_cap, budget=budget, threads=threads)
        if at_cap:
            warnings.warn(
                f"generators found at the degree cap {degree_cap}; higher-degree generators may exist",
                GeneratorCapWarning,
                stacklevel=2,
            )
        return GeneratorSet(_ordered(g, gens), method, degree_cap, at_cap)
    raise GraphConeError(f"unknown generator method {method!r}; choose auto or one of {', '.join(METHODS)}")


def verify_relation(g: TrivalentGraph, lhs: Iterable[ConeElement], rhs: Iterable[ConeElement]) -> bool:
    """True iff both multisets of cone points have the same sum.

    Every element must be a cone point of ``g``; anything else (for instance
    an element written for a different graph) raises :class:`ConeError`.
    """
    lhs, rhs = list(lhs), list(rhs)
    for w in lhs + rhs:
        bad = cone_violations(g, w)
        if bad:
            raise ConeError(f"{w} is not a cone point of this graph: " + "; ".join(bad))
    return sum_elements(lhs) == sum_elements(rhs)
