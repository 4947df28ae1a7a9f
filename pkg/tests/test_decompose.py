import importlib

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphcone import (
    ConeElement,
    ConeError,
    GraphError,
    decompose,
    in_cone,
    load_fixture,
    parse_element,
    split_degree2,
)
from graphcone.cone import cone_mask
from graphcone.decompose import decompose_array, polygon_cycle
from graphcone.generators import has_g1_generator_profile
from graphcone.lattice_points import point_array
from helpers import polygon_graph

G_LE_1 = ["tripod", "quartet", "caterpillar6", "balloon", "littleman", "hammock", "hexagon"]


def check_batch(g, m):
    pts = point_array(g, m)
    parts, deg = decompose_array(g, m, pts)
    assert np.array_equal(parts.sum(axis=1), pts)
    assert np.array_equal(deg.sum(axis=1), np.full(len(pts), m))
    flat_p = parts.reshape(-1, pts.shape[1])
    flat_d = deg.reshape(-1)
    used = flat_d > 0
    assert cone_mask(g, flat_p[used], flat_d[used]).all()
    assert set(np.unique(flat_d[used])) <= {1, 2}
    return flat_p[flat_d == 2]


@pytest.mark.parametrize("name", G_LE_1)
def test_batch_decomposition(name):
    g = load_fixture(name)
    top = 3 if name in ("hexagon", "caterpillar6") else 4
    for m in range(top + 1):
        twos = check_batch(g, m)
        if not g.edges or name in ("tripod", "quartet", "caterpillar6"):
            assert len(twos) == 0
        for row in twos[:200]:
            assert has_g1_generator_profile(g, ConeElement(2, zip(g.edge_ids, row.tolist())))


def test_chunked_decomposition(monkeypatch):
    dec = importlib.import_module("graphcone.decompose")

    g = load_fixture("littleman")
    pts = point_array(g, 4)
    want = decompose_array(g, 4, pts)
    monkeypatch.setattr(dec, "CHUNK_ROWS", 7)
    got = decompose_array(g, 4, pts)
    assert np.array_equal(want[0], got[0]) and np.array_equal(want[1], got[1])


def test_wide_masks_use_objects():
    g = load_fixture("tripod")
    w = parse_element("deg=70;e1=40,e2=40,e3=20")
    d = decompose(g, w)
    assert d.total() == w and set(d.degrees) == {1} and len(d) == 70


def test_examples():
    lm = load_fixture("littleman")
    assert decompose(lm, parse_element("deg=2;bar=2,loop=1,p3=1,p4=1")).degrees == (2,)
    hexagon = load_fixture("hexagon")
    cyc = {f"c{i}": 2 for i in range(6)}
    d = decompose(hexagon, ConeElement(2, cyc))
    assert d.parts == (ConeElement(1, {f"c{i}": 1 for i in range(6)}),) * 2
    gen = ConeElement(2, {**{f"c{i}": 1 for i in range(6)}, "l0": 2})
    assert decompose(hexagon, gen).parts == (gen,)
    tree = load_fixture("caterpillar6")
    w = parse_element("deg=3;p1=1,p2=2,b1=1,b2=1,b3=1,p5=1")
    d = decompose(tree, w)
    assert d.degrees == (1, 1, 1) and d.total() == w


def test_errors():
    lm = load_fixture("littleman")
    with pytest.raises(ConeError, match="parity fails at vertex u"):
        decompose(lm, parse_element("deg=1;loop=1,bar=1"))
    with pytest.raises(GraphError):
        decompose(load_fixture("dumbbell"), ConeElement.zero(1))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_random_points_decompose(data):
    g = load_fixture(data.draw(st.sampled_from(G_LE_1)))
    m = data.draw(st.integers(0, 8))
    vals = data.draw(st.lists(st.integers(0, m), min_size=len(g.edges), max_size=len(g.edges)))
    w = ConeElement(m, zip(g.edge_ids, vals))
    if not in_cone(g, w):
        with pytest.raises(ConeError):
            decompose(g, w)
        return
    d = decompose(g, w)
    assert d.total() == w
    assert all(in_cone(g, p) and p.degree in (1, 2) for p in d)


def test_polygon_cycle():
    g = polygon_graph(5)
    edges, legs = polygon_cycle(g)
    assert sorted(edges) == [f"c{i}" for i in range(5)]
    for i, e in enumerate(edges):
        nxt = edges[(i + 1) % 5]
        shared = set(g.ends(e)) & set(g.ends(nxt))
        assert legs[(i + 1) % 5] in {x for v in shared for x, _ in g.incidence[v]}
    with pytest.raises(GraphError):
        polygon_cycle(load_fixture("littleman").__class__({**load_fixture("hexagon").edges, "extra": ("x0", "x0")}))


@pytest.mark.parametrize("k", [3, 4, 5])
def test_split_degree2_exhaustive(k):
    g = polygon_graph(k)
    eids = g.edge_ids
    one = point_array(g, 1)
    sums = {tuple(r) for r in (one[:, None, :] + one[None, :, :]).reshape(-1, len(eids)).tolist()}
    for row in point_array(g, 2).tolist():
        w = ConeElement(2, zip(eids, row))
        r = split_degree2(g, w)
        assert (r is not None) == (tuple(row) in sums)
        assert (r is None) == has_g1_generator_profile(g, w)
        if r is not None:
            assert r[0] + r[1] == w and in_cone(g, r[0]) and in_cone(g, r[1])


def test_split_degree2_cases():
    g = load_fixture("hexagon")
    ones = {f"c{i}": 1 for i in range(6)}
    a, b = split_degree2(g, ConeElement(2, {**ones, "l0": 2, "l3": 2}))
    assert a.degree == b.degree == 1
    assert split_degree2(g, ConeElement(2, {**ones, "l0": 2, "l2": 2, "l4": 2})) is None
    a, b = split_degree2(g, ConeElement(2, {f"c{i}": 2 for i in range(6)}))
    assert a == b
    with pytest.raises(ConeError):
        split_degree2(g, ConeElement(1, ones))
