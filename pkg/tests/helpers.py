"""Seeded instance generators and independent dense oracles for the tests.

The oracles build dense matrices straight from their definitions with plain
loops; they deliberately share no code with the factored implementations
they are used to check.
"""

from __future__ import annotations

import numpy as np

from blockrank import DanglingPolicy, Decomposition, Graph

G4_EDGES = "a b\nb a\nb c\nc d\nd a\n"
G4_BLOCKS = "a B1\nb B1\nc B2\nd B2\n"

G4_H = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [0.5, 0.0, 0.5, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [1.0, 0.0, 0.0, 0.0],
])
G4_M = np.array([
    [0.50, 0.50, 0.00, 0.00],
    [0.25, 0.25, 0.25, 0.25],
    [0.00, 0.00, 0.50, 0.50],
    [0.25, 0.25, 0.25, 0.25],
])
G4_W = np.array([[0.75, 0.25], [0.25, 0.75]])


def random_graph(rng: np.random.Generator, n: int, edge_prob: float = 0.3) -> Graph:
    """Graph on n nodes; each ordered pair (u, v), u != v, is an edge w.p. edge_prob."""
    labels = [f"n{i}" for i in range(n)]
    edges = [
        (u, v)
        for u in range(n)
        for v in range(n)
        if u != v and rng.random() < edge_prob
    ]
    return Graph.from_edges(labels, edges)


def random_partition(rng: np.random.Generator, n: int, k_max: int = 4) -> Decomposition:
    """Partition assigning each node a uniform random block; empty blocks dropped."""
    k = int(rng.integers(1, k_max + 1))
    assign = rng.integers(0, k, size=n)
    members = [np.flatnonzero(assign == b) for b in range(k)]
    return Decomposition.from_members([m for m in members if m.size], n=n)


def random_cover(
    rng: np.random.Generator, n: int, k_max: int = 4, member_prob: float = 0.5
) -> Decomposition:
    """Covering family where nodes may join several blocks; coverage enforced."""
    k = int(rng.integers(1, k_max + 1))
    picks = rng.random((n, k)) < member_prob
    for u in range(n):
        if not picks[u].any():
            picks[u, int(rng.integers(0, k))] = True
    members = [np.flatnonzero(picks[:, b]) for b in range(k)]
    return Decomposition.from_members([m for m in members if m.size], n=n)


def random_instance(
    rng: np.random.Generator,
    n_lo: int = 2,
    n_hi: int = 10,
    k_max: int = 4,
    edge_prob: float = 0.3,
) -> tuple[Graph, Decomposition]:
    n = int(rng.integers(n_lo, n_hi + 1))
    return random_graph(rng, n, edge_prob), random_partition(rng, n, k_max)


def dense_hyperlink(
    g: Graph,
    policy: DanglingPolicy = DanglingPolicy.OWN_BLOCK,
    decomp: Decomposition | None = None,
) -> np.ndarray:
    """Dense stochastic H by direct definition (oracle)."""
    H = np.zeros((g.n, g.n))
    for u in range(g.n):
        nbrs = g.out_neighbors(u)
        if nbrs.size:
            H[u, nbrs] = 1.0 / nbrs.size
        elif policy is DanglingPolicy.UNIFORM_ALL:
            H[u, :] = 1.0 / g.n
        else:
            support = sorted(
                {v for b in decomp.node_blocks[u] for v in decomp.members[b].tolist()}
            )
            H[u, support] = 1.0 / len(support)
    return H


def direct_proximity(g: Graph, d: Decomposition) -> np.ndarray:
    """Dense proximity matrix straight from its definition (oracle).

    Row u spreads 1/N_u over each block adjacent to u ({u} plus its
    out-neighbors), then 1/|D_k| inside block k, summing contributions
    when blocks overlap.
    """
    M = np.zeros((g.n, g.n))
    for u in range(g.n):
        blocks = set(d.node_blocks[u])
        for w in g.out_neighbors(u):
            blocks.update(d.node_blocks[int(w)])
        n_u = len(blocks)
        for k in blocks:
            size = int(d.members[k].size)
            for v in d.members[k].tolist():
                M[u, v] += 1.0 / (n_u * size)
    return M
