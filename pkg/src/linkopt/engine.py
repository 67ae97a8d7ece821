"""PageRank, the visit vector and related quantities.

For a set of nodes ``I`` the visit vector is ``v = (I - cP)^{-1} e_I``:
``v[i]`` is the expected number of visits to ``I`` made by a surfer
starting at ``i`` before it zaps for the first time. The PageRank of the
set is ``(1 - c) z.v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np
import scipy.linalg
import scipy.sparse

from .errors import ComplementEmptyError, ConvergenceError, DanglingNodeError, InputError
from .graph import WebGraph, complement, dangling_nodes, nodeset, partition_links

DENSE_LIMIT = 2048
ITER_TOL = 1e-12
ITER_MAX = 100_000

# equality tolerance for comparing entries of v
REL_TOL = 1e-9
ABS_TOL = 1e-12


def tolerance(a: float, b: float) -> float:
    return max(REL_TOL * max(abs(a), abs(b)), ABS_TOL)


def close(a: float, b: float) -> bool:
    return abs(a - b) <= tolerance(a, b)


def greater(a: float, b: float) -> bool:
    """``a > b`` beyond the equality tolerance."""
    return a - b > tolerance(a, b)


@dataclass(frozen=True, eq=False)
class RankingContext:
    """Damping factor ``c`` and a positive stochastic personalization vector ``z``."""

    c: float
    z: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float).reshape(-1)
        if not 0.0 < self.c < 1.0:
            raise InputError(f"damping factor must lie in (0, 1), got {self.c}")
        if z.size == 0 or np.any(z <= 0):
            raise InputError("personalization vector must be positive")
        if abs(z.sum() - 1.0) > 1e-12:
            raise InputError(f"personalization vector must sum to 1 (sum = {z.sum()!r})")
        z.setflags(write=False)
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "z", z)

    @classmethod
    def uniform(cls, n: int, c: float = 0.85) -> "RankingContext":
        return cls(c, np.full(n, 1.0 / n))

    @property
    def n(self) -> int:
        return self.z.size

    def is_uniform(self) -> bool:
        return bool(np.allclose(self.z, 1.0 / self.n, rtol=0, atol=1e-15))


def parse_personalization(text: str) -> np.ndarray:
    """One real per line; blank lines and ``#`` comments are skipped."""
    vals = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            vals.append(float(line))
        except ValueError:
            raise InputError(f"line {lineno}: not a number: {raw!r}") from None
    return np.array(vals)


def indicator(n: int, I: Iterable[int]) -> np.ndarray:
    e = np.zeros(n)
    idx = [i - 1 for i in I]
    e[idx] = 1.0
    return e


def transition_matrix(g: WebGraph) -> np.ndarray:
    """Dense row-stochastic scaling of the adjacency matrix."""
    P = np.zeros((g.n, g.n))
    for i in g.nodes:
        ch = g.children(i)
        if ch:
            P[i - 1, [j - 1 for j in ch]] = 1.0 / len(ch)
    return P


def sparse_transition_matrix(g: WebGraph) -> scipy.sparse.csr_matrix:
    rows, cols, vals = [], [], []
    for i in g.nodes:
        ch = g.children(i)
        for j in ch:
            rows.append(i - 1)
            cols.append(j - 1)
            vals.append(1.0 / len(ch))
    return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(g.n, g.n))


def _require_valid(g: WebGraph, ctx: RankingContext):
    if ctx.n != g.n:
        raise InputError(f"personalization vector has length {ctx.n}, graph has {g.n} nodes")
    dangling = dangling_nodes(g)
    if dangling:
        raise DanglingNodeError(dangling)


class Solver:
    """Linear solves with ``I - cP`` for one graph and damping factor.

    Up to ``DENSE_LIMIT`` nodes the matrix is LU-factorized once and every
    solve reuses the factors. Larger graphs use Jacobi sweeps with a sparse
    ``P``.
    """

    def __init__(self, g: WebGraph, c: float, dense_limit: int = DENSE_LIMIT):
        self.g = g
        self.c = c
        self.dense = g.n <= dense_limit
        if self.dense:
            self._lu = scipy.linalg.lu_factor(np.eye(g.n) - c * transition_matrix(g))
        else:
            self._P = sparse_transition_matrix(g)
            self._PT = self._P.T.tocsr()

    def solve(self, b: np.ndarray) -> np.ndarray:
        """``x`` with ``(I - cP) x = b``."""
        if self.dense:
            return scipy.linalg.lu_solve(self._lu, b)
        return self._iterate(self._P, b)

    def solve_transpose(self, b: np.ndarray) -> np.ndarray:
        """``x`` with ``(I - cP)^T x = b``."""
        if self.dense:
            return scipy.linalg.lu_solve(self._lu, b, trans=1)
        return self._iterate(self._PT, b)

    def _iterate(self, M, b):
        x = np.array(b, dtype=float)
        for _ in range(ITER_MAX):
            nxt = b + self.c * (M @ x)
            if np.abs(nxt - x).sum() <= ITER_TOL * max(1.0, np.abs(nxt).sum()):
                return nxt
            x = nxt
        raise ConvergenceError(f"no convergence within {ITER_MAX} iterations")


def pagerank(g: WebGraph, ctx: RankingContext, solver: Solver | None = None) -> np.ndarray:
    """The PageRank vector: the stationary distribution of ``cP + (1-c) 1 z^T``."""
    _require_valid(g, ctx)
    solver = solver or Solver(g, ctx.c)
    pi = solver.solve_transpose((1.0 - ctx.c) * ctx.z)
    return pi / pi.sum()


def google_matrix(g: WebGraph, ctx: RankingContext) -> np.ndarray:
    _require_valid(g, ctx)
    return ctx.c * transition_matrix(g) + (1.0 - ctx.c) * np.outer(np.ones(g.n), ctx.z)


def visit_vector(g: WebGraph, I: Iterable[int], ctx: RankingContext, solver: Solver | None = None) -> np.ndarray:
    """Solve ``(I - cP) v = e_I``."""
    _require_valid(g, ctx)
    I = nodeset(g, I)
    if not I:
        raise InputError("node set must be nonempty")
    solver = solver or Solver(g, ctx.c)
    return solver.solve(indicator(g.n, I))


def set_pagerank(g: WebGraph, I: Iterable[int], ctx: RankingContext, solver: Solver | None = None) -> float:
    """PageRank of the set ``I`` computed as ``(1 - c) z.v``."""
    v = visit_vector(g, I, ctx, solver)
    return float((1.0 - ctx.c) * ctx.z @ v)


class TopSet(NamedTuple):
    nodes: frozenset[int]
    all_zero: bool


def v_top_set(g: WebGraph, I: Iterable[int], ctx: RankingContext, v: np.ndarray | None = None) -> TopSet:
    """Nodes outside ``I`` with maximal visit value, ties included."""
    I = nodeset(g, I)
    out = sorted(complement(g, I))
    if not out:
        raise ComplementEmptyError("complement of the node set is empty")
    if v is None:
        v = visit_vector(g, I, ctx)
    if not partition_links(g, I).external_in:
        return TopSet(frozenset(out), True)
    best = max(v[j - 1] for j in out)
    return TopSet(frozenset(j for j in out if close(v[j - 1], best)), False)


def basic_absorbing(g: WebGraph, I: Iterable[int]) -> WebGraph:
    """Drop outlinks of ``I`` and replace its internal links by self-links."""
    I = nodeset(g, I)
    kept = {(i, j) for i, j in g.edges if i not in I}
    return WebGraph(g.n, frozenset(kept | {(i, i) for i in I}))


def visit_block_identity_residual(g: WebGraph, I: Iterable[int], ctx: RankingContext) -> float:
    """``max |v_out - c (I - cP_out)^{-1} P_in v_I|`` over the complement block.

    ``P_out`` is the block of ``P`` among nodes outside ``I`` and ``P_in``
    the block from outside nodes into ``I``. Zero when the complement is empty.
    """
    I = nodeset(g, I)
    inside = [i - 1 for i in sorted(I)]
    outside = [j - 1 for j in sorted(complement(g, I))]
    if not outside:
        return 0.0
    v = visit_vector(g, I, ctx)
    P = transition_matrix(g)
    P_out = P[np.ix_(outside, outside)]
    P_in = P[np.ix_(outside, inside)]
    rhs = ctx.c * np.linalg.solve(np.eye(len(outside)) - ctx.c * P_out, P_in @ v[inside])
    return float(np.max(np.abs(v[outside] - rhs)))
