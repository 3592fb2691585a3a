from __future__ import annotations

import pytest

from blockrank import parse_blocks, parse_edge_list

from helpers import G4_BLOCKS, G4_EDGES


@pytest.fixture
def g4():
    """Four-node reference graph: a->b, b->a, b->c, c->d, d->a."""
    return parse_edge_list(G4_EDGES)


@pytest.fixture
def g4_decomp(g4):
    """Reference partition of g4: B1 = {a, b}, B2 = {c, d}."""
    return parse_blocks(G4_BLOCKS, g4)
