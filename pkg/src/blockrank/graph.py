"""Directed graphs in CSR form and the row-stochastic hyperlink operator."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np
from scipy import sparse

from .errors import ConfigurationError, DimensionError, ParseError

if TYPE_CHECKING:
    from .decomp import Decomposition

__all__ = [
    "DanglingPolicy",
    "Graph",
    "HyperlinkOperator",
    "build_hyperlink",
    "hyperlink_apply",
    "parse_edge_list",
]


class DanglingPolicy(Enum):
    """How rows of nodes without outgoing edges are made stochastic."""

    OWN_BLOCK = "block"      # uniform over the union of the node's own blocks
    UNIFORM_ALL = "uniform"  # uniform over all nodes, PageRank style


@dataclass(frozen=True)
class Graph:
    """Immutable directed graph in compressed sparse row form.

    Node ids are dense integers in ``[0, n)`` assigned at construction;
    ``labels[i]`` is the original label of node ``i`` and ``label_ids``
    the inverse mapping.  Duplicate edges are collapsed, self-loops kept.
    """

    n: int
    labels: tuple[str, ...]
    label_ids: dict[str, int]
    indptr: np.ndarray
    indices: np.ndarray
    out_degree: np.ndarray
    dangling: frozenset[int]

    @classmethod
    def from_edges(cls, labels: Sequence[str], edges: Iterable[tuple[int, int]]) -> Graph:
        """Build a graph from node labels and (src_id, dst_id) pairs."""
        labels = tuple(str(lab) for lab in labels)
        n = len(labels)
        if n == 0:
            raise ParseError("empty graph")
        label_ids = {lab: i for i, lab in enumerate(labels)}
        if len(label_ids) != n:
            raise ParseError("duplicate node labels")

        adjacency: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise DimensionError(f"edge ({u}, {v}) outside node range [0, {n})")
            adjacency[u].add(v)

        out_degree = np.array([len(nbrs) for nbrs in adjacency], dtype=np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(out_degree, out=indptr[1:])
        indices = np.empty(int(indptr[-1]), dtype=np.int64)
        for u, nbrs in enumerate(adjacency):
            indices[indptr[u]:indptr[u + 1]] = sorted(nbrs)

        dangling = frozenset(int(u) for u in np.flatnonzero(out_degree == 0))
        return cls(
            n=n,
            labels=labels,
            label_ids=label_ids,
            indptr=indptr,
            indices=indices,
            out_degree=out_degree,
            dangling=dangling,
        )

    def out_neighbors(self, u: int) -> np.ndarray:
        """Node ids reachable from ``u`` in one step (sorted)."""
        return self.indices[self.indptr[u]:self.indptr[u + 1]]


def parse_edge_list(text: str | Iterable[str]) -> Graph:
    """Parse edge-list text into a :class:`Graph`.

    One edge per line, ``src dst`` separated by whitespace; blank lines and
    lines starting with ``#`` are skipped.  Internal ids follow first
    appearance (src before dst within a line).  Duplicate edges collapse.

    Raises :class:`ParseError` on malformed lines (naming the line number)
    and on input without any edge ("empty graph").
    """
    lines = text.splitlines() if isinstance(text, str) else text

    labels: list[str] = []
    label_ids: dict[str, int] = {}

    def intern(label: str) -> int:
        node = label_ids.get(label)
        if node is None:
            node = len(labels)
            label_ids[label] = node
            labels.append(label)
        return node

    edges: list[tuple[int, int]] = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(
                f"line {line_no}: expected 'src dst', got {len(tokens)} token(s)",
                line=line_no,
            )
        edges.append((intern(tokens[0]), intern(tokens[1])))

    if not labels:
        raise ParseError("empty graph")
    return Graph.from_edges(labels, edges)


@dataclass(frozen=True)
class HyperlinkOperator:
    """Row-stochastic surfing operator, applied as ``x -> x @ H``.

    ``base`` holds the normalized link rows (``1/d_u`` entries; dangling
    rows are zero).  The substituted dangling rows are kept apart:
    explicit sparse rows under ``OWN_BLOCK``, or the stored dangling set
    plus an implicit uniform rank-one correction under ``UNIFORM_ALL``.
    """

    n: int
    policy: DanglingPolicy
    base: sparse.csr_array
    dangling: np.ndarray
    dangling_rows: sparse.csr_array | None

    def to_dense(self) -> np.ndarray:
        """Materialize the full stochastic matrix (test/debug aid)."""
        dense = self.base.toarray()
        if self.policy is DanglingPolicy.OWN_BLOCK:
            dense += self.dangling_rows.toarray()
        elif self.dangling.size:
            dense[self.dangling, :] = 1.0 / self.n
        return dense


def build_hyperlink(
    g: Graph,
    policy: DanglingPolicy = DanglingPolicy.OWN_BLOCK,
    decomp: Decomposition | None = None,
) -> HyperlinkOperator:
    """Build the hyperlink operator for ``g`` under the given dangling policy.

    Non-dangling rows carry ``1/d_u`` on the out-neighbors.  A dangling
    row is uniform over the union of the node's own blocks (``OWN_BLOCK``,
    which requires ``decomp``) or uniform over all nodes (``UNIFORM_ALL``).
    """
    if policy is DanglingPolicy.OWN_BLOCK:
        if decomp is None:
            raise ConfigurationError("OWN_BLOCK dangling policy requires a decomposition")
        if decomp.n != g.n:
            raise ConfigurationError(
                f"decomposition covers {decomp.n} nodes but the graph has {g.n}"
            )

    n = g.n
    data = np.empty(g.indices.size, dtype=np.float64)
    for u in range(n):
        lo, hi = g.indptr[u], g.indptr[u + 1]
        if hi > lo:
            data[lo:hi] = 1.0 / (hi - lo)
    base = sparse.csr_array((data, g.indices.copy(), g.indptr.copy()), shape=(n, n))

    dangling = np.array(sorted(g.dangling), dtype=np.int64)
    dangling_rows = None
    if policy is DanglingPolicy.OWN_BLOCK:
        rows: list[int] = []
        cols: list[int] = []
        vals: list[float] = []
        for u in dangling:
            support = sorted(
                {v for b in decomp.node_blocks[u] for v in decomp.members[b].tolist()}
            )
            weight = 1.0 / len(support)
            rows.extend([int(u)] * len(support))
            cols.extend(support)
            vals.extend([weight] * len(support))
        dangling_rows = sparse.csr_array(
            (np.array(vals), (np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64))),
            shape=(n, n),
        )

    return HyperlinkOperator(
        n=n, policy=policy, base=base, dangling=dangling, dangling_rows=dangling_rows
    )


def hyperlink_apply(h: HyperlinkOperator, x: np.ndarray) -> np.ndarray:
    """Compute ``x @ H`` without materializing the dense matrix.

    ``x`` must have length ``n`` with non-negative entries; the result is
    exactly what the dense row-stochastic matrix would produce.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (h.n,):
        raise DimensionError(f"vector of length {x.shape} against operator of order {h.n}")
    y = x @ h.base
    if h.policy is DanglingPolicy.OWN_BLOCK:
        y += x @ h.dangling_rows
    elif h.dangling.size:
        y += x[h.dangling].sum() / h.n
    return y
