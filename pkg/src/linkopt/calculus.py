"""Effect of replacing the outlinks of a single node.

Changing the children of node ``i`` changes row ``i`` of ``P`` by
``delta``, a rank-one correction. The new set PageRank follows from the
Sherman-Morrison formula with no new factorization, and its sign is the
sign of ``delta.v``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .engine import RankingContext, Solver, close, greater, indicator, pagerank, visit_vector
from .errors import (
    EdgeExistsError,
    InapplicableError,
    InputError,
    MissingEdgeError,
    NoAccessError,
)
from .graph import WebGraph, complement, has_access, nodes_with_access, nodeset


class Change(str, enum.Enum):
    INCREASE = "increase"
    DECREASE = "decrease"
    UNCHANGED = "unchanged"


@dataclass(frozen=True)
class OutlinkMutation:
    """Node ``node`` gets exactly ``new_children`` as its children."""

    node: int
    new_children: frozenset[int]

    def __post_init__(self):
        children = frozenset(int(j) for j in self.new_children)
        if not children:
            raise InputError("a mutation must leave the node with at least one child")
        object.__setattr__(self, "new_children", children)

    @classmethod
    def add_link(cls, g: WebGraph, i: int, j: int) -> "OutlinkMutation":
        if (i, j) in g.edges:
            raise EdgeExistsError(f"edge ({i},{j}) already present")
        return cls(i, frozenset(g.children(i)) | {j})

    @classmethod
    def remove_link(cls, g: WebGraph, i: int, j: int) -> "OutlinkMutation":
        if (i, j) not in g.edges:
            raise MissingEdgeError(f"edge ({i},{j}) not present")
        if g.outdegree(i) == 1:
            raise InputError(f"removing ({i},{j}) would leave node {i} dangling")
        return cls(i, frozenset(g.children(i)) - {j})

    def apply(self, g: WebGraph) -> WebGraph:
        nodeset(g, self.new_children | {self.node})
        return g.with_children(self.node, self.new_children)


def delta_vector(g: WebGraph, m: OutlinkMutation) -> np.ndarray:
    """New row of ``P`` at ``m.node`` minus the old one."""
    nodeset(g, m.new_children | {m.node})
    old = g.children(m.node)
    if not old:
        raise InputError(f"node {m.node} has no outlinks")
    delta = np.zeros(g.n)
    for j in m.new_children:
        delta[j - 1] += 1.0 / len(m.new_children)
    for j in old:
        delta[j - 1] -= 1.0 / len(old)
    return delta


class RankOneUpdater:
    """Evaluate many single-node mutations of one graph.

    The LU factors, ``pi`` and ``v`` are computed once; each mutated node
    adds one cached solve for ``(I - cP)^{-1} e_i``.
    """

    def __init__(self, g: WebGraph, I: Iterable[int], ctx: RankingContext):
        self.g = g
        self.I = nodeset(g, I)
        self.ctx = ctx
        self.solver = Solver(g, ctx.c)
        self.pi = pagerank(g, ctx, self.solver)
        self.v = visit_vector(g, self.I, ctx, self.solver)
        self.value = float((1.0 - ctx.c) * ctx.z @ self.v)
        self._column = lru_cache(maxsize=None)(self._solve_column)

    def _solve_column(self, i: int) -> np.ndarray:
        return self.solver.solve(indicator(self.g.n, [i]))

    def denominator(self, m: OutlinkMutation) -> float:
        delta = delta_vector(self.g, m)
        return 1.0 - self.ctx.c * float(delta @ self._column(m.node))

    def updated_value(self, m: OutlinkMutation) -> float:
        """Set PageRank after applying ``m``."""
        delta = delta_vector(self.g, m)
        num = float(delta @ self.v)
        den = 1.0 - self.ctx.c * float(delta @ self._column(m.node))
        return self.value + self.ctx.c * self.pi[m.node - 1] * num / den

    def sign(self, m: OutlinkMutation) -> Change:
        """Sign of ``delta.v``; ties within tolerance count as unchanged."""
        new = np.mean([self.v[j - 1] for j in m.new_children])
        old = np.mean([self.v[j - 1] for j in self.g.children(m.node)])
        if close(new, old):
            return Change.UNCHANGED
        return Change.INCREASE if new > old else Change.DECREASE

    def margin(self, m: OutlinkMutation) -> float:
        return float(delta_vector(self.g, m) @ self.v)


def updated_set_pagerank(g: WebGraph, I: Iterable[int], ctx: RankingContext, m: OutlinkMutation) -> float:
    return RankOneUpdater(g, I, ctx).updated_value(m)


def change_sign(g: WebGraph, I: Iterable[int], ctx: RankingContext, m: OutlinkMutation) -> Change:
    return RankOneUpdater(g, I, ctx).sign(m)


def add_link_effect(g: WebGraph, I: Iterable[int], ctx: RankingContext, i: int, j: int) -> Change:
    """Effect of adding ``(i, j)`` for ``i`` in ``I`` with ``v_i <= v_j``.

    Never a decrease: unchanged exactly when ``i`` cannot leave ``I``.
    """
    I = nodeset(g, I)
    if i not in I:
        raise InapplicableError(f"node {i} is not in the set")
    m = OutlinkMutation.add_link(g, i, j)
    v = visit_vector(g, I, ctx)
    if greater(v[i - 1], v[j - 1]):
        raise InapplicableError(f"v[{i}] = {v[i - 1]:.6g} > v[{j}] = {v[j - 1]:.6g}")
    out = complement(g, I)
    if not out or not has_access(g, i, out):
        return Change.UNCHANGED
    return Change.INCREASE


def remove_link_effect(g: WebGraph, I: Iterable[int], ctx: RankingContext, i: int, j: int) -> Change:
    """Effect of removing ``(i, j)`` where ``j`` is a child of ``i`` with minimal ``v``."""
    I = nodeset(g, I)
    OutlinkMutation.remove_link(g, i, j)  # edge must exist and d_i >= 2
    v = visit_vector(g, I, ctx)
    children = g.children(i)
    lowest = min(v[k - 1] for k in children)
    if not close(v[j - 1], lowest):
        raise InapplicableError(f"child {j} of node {i} does not minimize v among the children")
    if all(close(v[k - 1], v[j - 1]) for k in children):
        return Change.UNCHANGED
    return Change.INCREASE


def removal_no_access_noop(g: WebGraph, I: Iterable[int], ctx: RankingContext, i: int) -> bool:
    """For ``i`` unable to leave ``I``, check every single-link deletion is neutral."""
    I = nodeset(g, I)
    out = complement(g, I)
    if out and has_access(g, i, out):
        raise InapplicableError(f"node {i} has access to the complement")
    if g.outdegree(i) < 2:
        return True
    upd = RankOneUpdater(g, I, ctx)
    return all(upd.sign(OutlinkMutation.remove_link(g, i, j)) is Change.UNCHANGED
               for j in g.children(i))


def decreasing_path(g: WebGraph, I: Iterable[int], ctx: RankingContext, i0: int,
                    v: np.ndarray | None = None) -> list[int]:
    """Path from ``i0`` leaving ``I`` along which ``v`` strictly decreases.

    Built greedily by stepping to a child with minimal ``v``.
    """
    I = nodeset(g, I)
    if i0 not in I:
        raise InputError(f"start node {i0} is not in the set")
    out = complement(g, I)
    if not out or i0 not in nodes_with_access(g, out):
        raise NoAccessError(f"node {i0} has no access to the complement")
    if v is None:
        v = visit_vector(g, I, ctx)
    path = [i0]
    while path[-1] in I:
        node = path[-1]
        nxt = min(g.children(node), key=lambda k: (v[k - 1], k))
        if not greater(v[node - 1], v[nxt - 1]) or len(path) > len(I):
            raise NoAccessError(f"v does not decrease from node {node} (numerically degenerate)")
        path.append(nxt)
    return path
