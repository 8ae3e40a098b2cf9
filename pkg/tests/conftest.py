"""Shared fixtures: canonical tiny instances and cached solver runs."""

from __future__ import annotations

import itertools

import pytest

from lochroma import Hypergraph, RankedColoring


@pytest.fixture(scope="session")
def single_edge() -> Hypergraph:
    return Hypergraph(3, [(0, 1, 2)])


@pytest.fixture(scope="session")
def k4_triples() -> Hypergraph:
    """All four triples on four vertices; admits no 2-color LO coloring."""
    return Hypergraph(4, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


@pytest.fixture(scope="session")
def star_three() -> Hypergraph:
    """Three edges through a hub vertex 0."""
    return Hypergraph(7, [(0, 1, 2), (0, 3, 4), (0, 5, 6)])


def all_lo_colorings(H: Hypergraph, k: int):
    """Exhaustive reference: every LO coloring of H with colors 1..k."""
    for assignment in itertools.product(range(1, k + 1), repeat=H.n):
        ok = True
        for e in H.edges:
            ranks = [assignment[v] for v in e]
            if ranks.count(max(ranks)) != 1:
                ok = False
                break
        if ok:
            yield RankedColoring({v: assignment[v] for v in range(H.n)})
