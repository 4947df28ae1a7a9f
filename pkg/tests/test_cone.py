from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from graphcone import (
    ConeElement,
    ConeError,
    GraphError,
    GraphParseError,
    FIXTURES,
    cone_violations,
    deg_min,
    deg_v,
    enumerate_networks,
    in_cone,
    in_lattice,
    lift_cut,
    load_fixture,
    local_paths,
    parse_element,
    project,
)
from graphcone.cone import cone_mask, format_element, sum_elements
from graphcone.lattice_points import point_array


def el(text):
    return parse_element(text)


def test_element_text_roundtrip():
    w = el("deg=2;p4=0,loop=1,bar=2")
    assert format_element(w) == "deg=2;bar=2,loop=1"
    assert parse_element(str(w)) == w
    assert str(ConeElement.zero(3)) == "deg=3;"


@pytest.mark.parametrize("text", ["loop=1", "deg=x;", "deg=1;a", "deg=1;a=1,a=2", "deg=1;a=b"])
def test_element_parse_errors(text):
    with pytest.raises(GraphParseError):
        parse_element(text)


def test_element_arithmetic():
    a, b = el("deg=1;x=1,y=1"), el("deg=2;x=1,z=2")
    assert a + b == el("deg=3;x=2,y=1,z=2")
    assert (a + b) - b == a
    assert 3 * a == el("deg=3;x=3,y=3")
    assert sum_elements([a, a, b]) == el("deg=4;x=3,y=2,z=2")
    assert (a - a) == ConeElement.zero()


def test_deg_v(lm):
    w = el("deg=2;loop=1,bar=2,p3=1,p4=1")
    assert deg_v(lm, w, "u") == 2
    assert deg_v(lm, ConeElement.zero(), "w") == 0
    d = load_fixture("dumbbell")
    assert deg_v(d, el("deg=1;loopL=1,loopR=1"), "u") == 1
    assert deg_v(lm, el("deg=1;bar=1"), "u") == Fraction(1, 2)
    with pytest.raises(ConeError):
        deg_v(lm, w, "a")


def test_deg_min(lm):
    assert deg_min(lm, el("deg=0;p3=1,p4=1")) == 1
    hexagon = load_fixture("hexagon")
    twice = ConeElement(0, {f"c{i}": 2 for i in range(6)})
    assert deg_min(hexagon, twice) == 2
    assert deg_min(lm, ConeElement.zero()) == 0


def test_membership_examples(lm):
    assert in_cone(lm, el("deg=2;loop=1,bar=2,p3=2"))
    bad = el("deg=1;loop=1,bar=1")
    assert not in_lattice(lm, bad) and not in_cone(lm, bad)
    assert any("parity fails at vertex u" in m for m in cone_violations(lm, bad))
    assert in_cone(lm, ConeElement.zero())
    low = el("deg=1;loop=1,bar=2,p3=1,p4=1")
    assert any("degree 1 is below" in m for m in cone_violations(lm, low))
    with pytest.raises(ConeError, match="unknown edge"):
        in_cone(lm, el("deg=1;nope=1"))


def test_local_paths():
    t = load_fixture("tripod")
    lp = local_paths(t, el("deg=1;e1=1,e2=1"), "c")
    assert (lp.x, lp.y, lp.z) == (0, 0, 1)
    lp = local_paths(t, el("deg=2;e1=2,e2=2,e3=2"), "c")
    assert (lp.x, lp.y, lp.z) == (1, 1, 1)
    with pytest.raises(ConeError):
        local_paths(t, el("deg=1;e1=1"), "c")


@pytest.mark.parametrize("name", FIXTURES)
def test_networks_have_one_local_path(name):
    g = load_fixture(name)
    for n in enumerate_networks(g):
        w = ConeElement(1, {e: 1 for e in n.support})
        for v in g.inner_vertices:
            lp = local_paths(g, w, v)
            assert sorted((lp.x, lp.y, lp.z)) in ([0, 0, 0], [0, 0, 1])
            assert lp.x + lp.y + lp.z == lp.degree


def test_lift_and_project_littleman(lm):
    w = el("deg=1;loop=1,p3=1,p4=1")
    (g1, w1), (g2, w2) = project(lm, w, "bar")
    assert w1.degree == w2.degree == 1
    assert in_cone(g1, w1) and in_cone(g2, w2)
    assert w1["loop"] == 1 and w2["p3"] == w2["p4"] == 1
    with pytest.raises(ConeError):
        project(lm, w, "loop")


def test_lift_cut_cycle_edge(hammock):
    w = el("deg=2;c1=1,c2=1,p2=2")
    gc, lifted = lift_cut(hammock, w, "c1")
    assert lifted["c1.1"] == lifted["c1.2"] == 1
    assert in_cone(gc, lifted)
    with pytest.raises(GraphError):
        lift_cut(hammock, w, "p2")


def test_cone_mask_matches_in_cone(lm):
    rng = np.random.default_rng(0)
    vecs = rng.integers(0, 4, size=(400, 4))
    eids = lm.edge_ids
    mask = cone_mask(lm, vecs, 3)
    for row, ok in zip(vecs, mask):
        assert bool(ok) == in_cone(lm, ConeElement(3, zip(eids, row.tolist())))


@pytest.mark.parametrize("name", ["littleman", "hammock", "quartet", "dumbbell", "twoloops"])
def test_cone_properties(name):
    g = load_fixture(name)
    eids = g.edge_ids
    pts = {m: [ConeElement(m, zip(eids, r)) for r in point_array(g, m).tolist()] for m in range(4)}
    # degree 1 points are exactly the networks
    assert {frozenset(w.coeffs) for w in pts[1]} == {n.support for n in enumerate_networks(g)}
    for m in (1, 2, 3):
        for w in pts[m]:
            # coefficient bound used for the search box
            assert max(w.coeffs.values(), default=0) <= m
            assert deg_min(g, w) <= m
    # closure under addition and subadditivity of deg_min
    for a in pts[1]:
        for b in pts[2]:
            assert in_cone(g, a + b)
            assert deg_min(g, a + b) <= deg_min(g, a) + deg_min(g, b)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 3), st.lists(st.integers(0, 3), min_size=5, max_size=5))
def test_lift_roundtrip(m, vals):
    q = load_fixture("quartet")
    w = ConeElement(m, zip(q.edge_ids, vals))
    gc, lifted = lift_cut(q, w, "mid")
    assert lifted["mid.1"] == lifted["mid.2"] == w["mid"]
    back = lifted.restrict(set(gc.edges) - {"mid.1", "mid.2"}) + ConeElement(0, {"mid": lifted["mid.1"]})
    assert back == w
    assert in_cone(gc, lifted) == in_cone(q, w)
