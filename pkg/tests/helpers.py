"""Graph builders shared by the tests."""
import random

from graphcone import TrivalentGraph, parse_graph


def polygon_graph(k: int) -> TrivalentGraph:
    """k-cycle c0..c(k-1) on v0..v(k-1), leg l_i from v_i to leaf x_i."""
    lines = [f"edge c{i} v{i} v{(i + 1) % k}" for i in range(k)]
    lines += [f"edge l{i} v{i} x{i}" for i in range(k)]
    return parse_graph("\n".join(lines))


def random_trivalent(rng: random.Random, max_vertices: int = 10) -> TrivalentGraph:
    """Random half-edge pairing; leaves are never paired with each other."""
    while True:
        inner = rng.randint(1, max_vertices - 1)
        leaves = [n for n in range(0, max_vertices - inner + 1) if (3 * inner + n) % 2 == 0]
        if not leaves:
            continue
        n = rng.choice(leaves)
        halves = [f"u{i}" for i in range(inner) for _ in range(3)] + [f"x{j}" for j in range(n)]
        rng.shuffle(halves)
        pairs = [(halves[i], halves[i + 1]) for i in range(0, len(halves), 2)]
        if any(a.startswith("x") and b.startswith("x") for a, b in pairs):
            continue
        return TrivalentGraph({f"e{i}": p for i, p in enumerate(pairs)})


# acceptance verdicts, echoed in the terminal summary by conftest
ACCEPTANCE: list[str] = []
