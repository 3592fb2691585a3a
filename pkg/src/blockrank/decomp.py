"""Block decompositions, sparse proximity factors, and the block indicator matrix.

A decomposition groups the nodes into non-empty blocks that jointly cover
the graph; it may be a partition or an overlapping cover.  From it we build
two sparse factors R (n x K) and A (K x n) whose product is the block
proximity matrix M: row u of M spreads mass evenly over the blocks adjacent
to u (its own plus those of its out-neighbors), then uniformly inside each
block.  The small K x K product W = A @ R records which blocks can reach
which in one proximity step.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np
from scipy import sparse

from .errors import CapExceededError, ConfigurationError, CoverageError, ParseError
from .graph import Graph

__all__ = [
    "DecompKind",
    "Decomposition",
    "FactorForm",
    "IndicatorMatrix",
    "ProximityFactors",
    "build_factors",
    "indicator",
    "materialize_m",
    "parse_blocks",
    "proximal_set",
]

MATERIALIZE_CAP = 2000


class DecompKind(Enum):
    PARTITION = "partition"
    COVER = "cover"


class FactorForm(Enum):
    PARTITION = "partition"
    COVER = "cover"


@dataclass(frozen=True)
class Decomposition:
    """Indexed family of non-empty node blocks covering all ``n`` nodes.

    ``members[k]`` lists block k's node ids sorted ascending;
    ``node_blocks[u]`` lists the blocks containing node u, sorted.
    ``kind`` is PARTITION exactly when every node lies in one block.
    """

    n: int
    K: int
    block_labels: tuple[str, ...]
    members: tuple[np.ndarray, ...]
    node_blocks: tuple[tuple[int, ...], ...]
    kind: DecompKind

    @classmethod
    def from_members(
        cls,
        members: Sequence[Iterable[int]],
        n: int,
        block_labels: Sequence[str] | None = None,
    ) -> Decomposition:
        """Build a decomposition from per-block node-id collections."""
        member_arrays = []
        for k, block in enumerate(members):
            ids = sorted({int(v) for v in block})
            if not ids:
                raise CoverageError(f"block {k} is empty")
            if ids[0] < 0 or ids[-1] >= n:
                raise CoverageError(f"block {k} contains node ids outside [0, {n})")
            member_arrays.append(np.array(ids, dtype=np.int64))
        K = len(member_arrays)
        if K == 0:
            raise CoverageError("decomposition has no blocks")

        if block_labels is None:
            block_labels = tuple(f"B{k}" for k in range(K))
        else:
            block_labels = tuple(str(lab) for lab in block_labels)
            if len(block_labels) != K or len(set(block_labels)) != K:
                raise CoverageError("block labels must be unique, one per block")

        node_blocks: list[list[int]] = [[] for _ in range(n)]
        for k, ids in enumerate(member_arrays):
            for v in ids.tolist():
                node_blocks[v].append(k)
        uncovered = [u for u in range(n) if not node_blocks[u]]
        if uncovered:
            raise CoverageError(f"nodes not covered by any block: {uncovered}")

        kind = (
            DecompKind.PARTITION
            if all(len(bs) == 1 for bs in node_blocks)
            else DecompKind.COVER
        )
        return cls(
            n=n,
            K=K,
            block_labels=block_labels,
            members=tuple(member_arrays),
            node_blocks=tuple(tuple(bs) for bs in node_blocks),
            kind=kind,
        )

    def block_sizes(self) -> np.ndarray:
        return np.array([ids.size for ids in self.members], dtype=np.int64)


def parse_blocks(text: str | Iterable[str], g: Graph) -> Decomposition:
    """Parse block-membership text ("node_label block_label" per line).

    A node may appear on several lines, which declares an overlapping
    cover.  Unknown node labels and graph nodes missing from every block
    are hard errors.
    """
    lines = text.splitlines() if isinstance(text, str) else text

    block_labels: list[str] = []
    block_ids: dict[str, int] = {}
    members: list[set[int]] = []

    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(
                f"line {line_no}: expected 'node_label block_label', got {len(tokens)} token(s)",
                line=line_no,
            )
        node_label, block_label = tokens
        node = g.label_ids.get(node_label)
        if node is None:
            raise CoverageError(f"line {line_no}: node label {node_label!r} not in the graph")
        k = block_ids.get(block_label)
        if k is None:
            k = len(block_labels)
            block_ids[block_label] = k
            block_labels.append(block_label)
            members.append(set())
        members[k].add(node)

    if not members:
        raise ParseError("empty blocks file")
    missing = [g.labels[u] for u in range(g.n) if not any(u in m for m in members)]
    if missing:
        raise CoverageError(f"graph nodes missing from every block: {missing}")
    return Decomposition.from_members(members, n=g.n, block_labels=block_labels)


def proximal_set(d: Decomposition, g: Graph, u: int) -> set[int]:
    """Blocks containing ``u`` or any node ``u`` links to."""
    if not 0 <= u < g.n:
        raise IndexError(f"node id {u} outside [0, {g.n})")
    blocks = set(d.node_blocks[u])
    for w in g.out_neighbors(u):
        blocks.update(d.node_blocks[w])
    return blocks


@dataclass(frozen=True)
class ProximityFactors:
    """Sparse pair (R: n x K, A: K x n) whose product is the proximity matrix.

    Partition form: ``[R]_{uJ} = 1/(N_u * |D_J|)`` on the proximal blocks of
    u and A has plain 0/1 block-indicator rows.  Cover form: R rows carry
    ``1/N_u`` and A rows ``1/|D_k|``, both individually row-stochastic.
    The product R @ A is row-stochastic in either form.
    """

    R: sparse.csr_array
    A: sparse.csr_array
    N: np.ndarray
    form: FactorForm

    @property
    def n(self) -> int:
        return self.R.shape[0]

    @property
    def K(self) -> int:
        return self.R.shape[1]


@dataclass(frozen=True)
class IndicatorMatrix:
    """K x K non-negative matrix whose positivity pattern encodes one-step
    block-to-block reachability of the proximity operator."""

    W: np.ndarray
    zero_pattern: np.ndarray


def build_factors(
    d: Decomposition,
    g: Graph,
    form: FactorForm | None = None,
) -> ProximityFactors:
    """Build the sparse factors of the proximity matrix for ``d`` over ``g``.

    ``form`` defaults to the decomposition's own kind.  A partition may be
    forced through the cover path (the products agree within 1e-14); an
    overlapping cover cannot take the partition path.
    """
    if d.n != g.n:
        raise ConfigurationError(f"decomposition covers {d.n} nodes but the graph has {g.n}")
    if form is None:
        form = FactorForm.PARTITION if d.kind is DecompKind.PARTITION else FactorForm.COVER
    elif form is FactorForm.PARTITION and d.kind is not DecompKind.PARTITION:
        raise ConfigurationError("overlapping cover cannot use the partition factor form")

    n, K = g.n, d.K
    sizes = d.block_sizes()

    prox: list[list[int]] = []
    N = np.empty(n, dtype=np.int64)
    for u in range(n):
        blocks = sorted(proximal_set(d, g, u))
        prox.append(blocks)
        N[u] = len(blocks)

    r_indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(N, out=r_indptr[1:])
    r_indices = np.empty(int(r_indptr[-1]), dtype=np.int64)
    r_data = np.empty(int(r_indptr[-1]), dtype=np.float64)
    for u, blocks in enumerate(prox):
        lo, hi = r_indptr[u], r_indptr[u + 1]
        r_indices[lo:hi] = blocks
        if form is FactorForm.PARTITION:
            # R = Gamma @ Diag(sizes)^-1: per-entry (1/N_u) * (1/|D_J|)
            r_data[lo:hi] = (1.0 / N[u]) * (1.0 / sizes[blocks])
        else:
            r_data[lo:hi] = 1.0 / N[u]
    R = sparse.csr_array((r_data, r_indices, r_indptr), shape=(n, K))

    a_indptr = np.zeros(K + 1, dtype=np.int64)
    np.cumsum(sizes, out=a_indptr[1:])
    a_indices = np.concatenate([ids for ids in d.members])
    if form is FactorForm.PARTITION:
        a_data = np.ones(a_indices.size, dtype=np.float64)
    else:
        a_data = np.concatenate(
            [np.full(ids.size, 1.0 / ids.size) for ids in d.members]
        )
    A = sparse.csr_array((a_data, a_indices, a_indptr), shape=(K, n))

    return ProximityFactors(R=R, A=A, N=N, form=form)


def materialize_m(f: ProximityFactors, cap: int = MATERIALIZE_CAP) -> np.ndarray:
    """Dense product ``R @ A`` (test/debug aid; refuses above ``cap`` nodes)."""
    if f.n > cap:
        raise CapExceededError(f"refusing to materialize {f.n} x {f.n} matrix (cap {cap})")
    return (f.R @ f.A).toarray()


def indicator(f: ProximityFactors) -> IndicatorMatrix:
    """The K x K indicator matrix ``A @ R`` with its positivity pattern."""
    W = (f.A @ f.R).toarray()
    return IndicatorMatrix(W=W, zero_pattern=W > 0)
