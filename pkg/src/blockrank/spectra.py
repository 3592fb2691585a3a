"""Irreducibility/primitivity checks and dense oracles for stochastic matrices.

Everything here works on the positivity pattern of a non-negative matrix.
Irreducibility is strong connectivity of the pattern digraph, decided by a
linear-time strongly-connected-components pass.  Primitivity is decided by
the Wielandt power test: a non-negative k x k matrix is primitive exactly
when its pattern raised to k^2 - 2k + 2 is entrywise positive.  Magnitudes
never enter, so repeated boolean squaring is exact and overflow-free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .decomp import IndicatorMatrix
from .errors import CapExceededError, ConvergenceError, DimensionError

__all__ = [
    "CheckReport",
    "dense_stationary",
    "is_irreducible",
    "is_primitive",
    "strongly_connected_components",
    "teleportation_free_check",
]

PRIMITIVITY_CAP = 512
STATIONARY_CAP = 2000


@dataclass(frozen=True)
class CheckReport:
    """Verdict on whether ranking without teleportation is well-defined.

    ``primitive_guarantee`` mirrors ``irreducible``: an irreducible block
    indicator matrix guarantees the full surfing operator is primitive, and
    a reducible one guarantees it is not.  ``blocking_components`` lists the
    block-graph SCCs when reducible (empty otherwise).
    """

    irreducible: bool
    primitive_guarantee: bool
    scc_count: int
    blocking_components: tuple[tuple[int, ...], ...]


def _pattern_rows(m) -> list[np.ndarray]:
    """Adjacency lists of the positivity-pattern digraph of ``m``."""
    if sparse.issparse(m):
        m = m.tocsr()
        k = m.shape[0]
        if m.shape[0] != m.shape[1]:
            raise DimensionError(f"matrix is {m.shape[0]} x {m.shape[1]}, not square")
        if m.data.size and m.data.min() < 0:
            raise ValueError("matrix must be non-negative")
        return [
            m.indices[m.indptr[i]:m.indptr[i + 1]][m.data[m.indptr[i]:m.indptr[i + 1]] > 0]
            for i in range(k)
        ]
    dense = np.asarray(m)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
        raise DimensionError(f"matrix of shape {dense.shape} is not square")
    if dense.dtype != bool and dense.size and dense.min() < 0:
        raise ValueError("matrix must be non-negative")
    return [np.flatnonzero(row > 0) for row in dense]


def strongly_connected_components(adjacency: list[np.ndarray]) -> list[list[int]]:
    """SCCs of a digraph given as adjacency lists (iterative Tarjan).

    Linear in nodes plus edges.  Components are returned with members
    sorted ascending, components ordered by their smallest member.
    """
    n = len(adjacency)
    index = np.full(n, -1, dtype=np.int64)
    low = np.zeros(n, dtype=np.int64)
    on_stack = np.zeros(n, dtype=bool)
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] >= 0:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work: list[tuple[int, object]] = [(root, iter(adjacency[root]))]
        while work:
            v, neighbors = work[-1]
            descended = False
            for w in neighbors:
                w = int(w)
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(adjacency[w])))
                    descended = True
                    break
                if on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
            if descended:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                component = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    component.append(w)
                    if w == v:
                        break
                component.sort()
                components.append(component)

    components.sort(key=lambda comp: comp[0])
    return components


def is_irreducible(m) -> tuple[bool, list[list[int]]]:
    """Whether the pattern digraph of ``m`` is strongly connected.

    Returns the verdict together with the condensation components.
    A single vertex counts as strongly connected even without a self-loop,
    matching the graph-theoretic reading of the pattern.
    """
    components = strongly_connected_components(_pattern_rows(m))
    return len(components) == 1, components


def _bool_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.float64) @ b.astype(np.float64)) > 0


def _bool_power(pattern: np.ndarray, exponent: int) -> np.ndarray:
    """Positivity pattern of ``pattern ** exponent`` by repeated squaring."""
    result: np.ndarray | None = None
    base = pattern
    e = exponent
    while e:
        if e & 1:
            result = base if result is None else _bool_matmul(result, base)
        e >>= 1
        if e:
            base = _bool_matmul(base, base)
    return result


def is_primitive(m, cap: int = PRIMITIVITY_CAP) -> bool:
    """Wielandt power test for primitivity of a non-negative square matrix.

    Dense oracle: refuses orders above ``cap``.  Equivalent to irreducible
    with period 1; also the ground truth the cheap irreducible-plus-positive-
    diagonal shortcut must agree with.
    """
    if sparse.issparse(m):
        m = m.toarray()
    dense = np.asarray(m)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
        raise DimensionError(f"matrix of shape {dense.shape} is not square")
    k = dense.shape[0]
    if k > cap:
        raise CapExceededError(f"primitivity oracle refused for order {k} (cap {cap})")
    if dense.dtype != bool and dense.size and dense.min() < 0:
        raise ValueError("matrix must be non-negative")
    pattern = dense > 0 if dense.dtype != bool else dense
    exponent = k * k - 2 * k + 2
    return bool(_bool_power(pattern, exponent).all())


def teleportation_free_check(w: IndicatorMatrix) -> CheckReport:
    """Decide admissibility of no-teleportation ranking from the indicator matrix."""
    irreducible, components = is_irreducible(w.zero_pattern)
    return CheckReport(
        irreducible=irreducible,
        primitive_guarantee=irreducible,
        scc_count=len(components),
        blocking_components=()
        if irreducible
        else tuple(tuple(comp) for comp in components),
    )


def dense_stationary(
    p: np.ndarray,
    tol: float = 1e-12,
    max_iter: int = 10_000,
    cap: int = STATIONARY_CAP,
) -> np.ndarray:
    """Stationary vector of a dense row-stochastic matrix by power iteration.

    Starts from the uniform vector and renormalizes each step; returns a
    probability vector whose residual ``||x @ p - x||_1`` is at most ``tol``.
    Raises :class:`ConvergenceError` (carrying the final residual) when
    ``max_iter`` steps do not reach the tolerance.
    """
    dense = np.asarray(p, dtype=np.float64)
    if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
        raise DimensionError(f"matrix of shape {dense.shape} is not square")
    n = dense.shape[0]
    if n > cap:
        raise CapExceededError(f"dense stationary oracle refused for order {n} (cap {cap})")
    if dense.size and dense.min() < 0:
        raise ValueError("matrix must be non-negative")
    row_err = np.abs(dense.sum(axis=1) - 1.0).max()
    if row_err > 1e-10:
        raise ValueError(f"rows must sum to 1 (max deviation {row_err:.3e})")

    x = np.full(n, 1.0 / n)
    residual = np.inf
    for _ in range(max_iter):
        y = x @ dense
        y /= y.sum()
        residual = float(np.abs(y - x).sum())
        x = y
        if residual <= tol:
            return x
    raise ConvergenceError(
        f"no convergence within {max_iter} iterations (residual {residual:.3e})",
        residual=residual,
    )
