"""Bundled example graphs, one file per worked example."""
from __future__ import annotations

from importlib import resources

from .errors import GraphError
from .graph import TrivalentGraph, parse_graph

FIXTURES = (
    "tripod",
    "quartet",
    "caterpillar6",
    "balloon",
    "littleman",
    "hammock",
    "theta",
    "dumbbell",
    "hexagon",
    "twoloops",
)


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise GraphError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    return resources.files("graphcone").joinpath("data").joinpath(f"{name}.graph").read_text(encoding="utf-8")


def load_fixture(name: str) -> TrivalentGraph:
    return parse_graph(fixture_text(name))
