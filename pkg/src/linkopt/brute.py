"""Exhaustive search over the links a website controls.

The links starting outside ``I`` are fixed. Every subset of the allowed
internal links and external outlinks is enumerated, configurations that
leave some node of ``I`` unable to reach the outside are discarded before
any linear algebra, and the rest are scored in vectorized batches.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator

import numpy as np

from .engine import RankingContext, _require_valid, pagerank, v_top_set, visit_vector
from .errors import (
    ComplementEmptyError,
    DanglingNodeError,
    InapplicableError,
    InputError,
    SearchCapExceeded,
)
from .graph import Edge, WebGraph, complement, nodeset, partition_links
from .structures import StructureConstraints, chain_ordering, verify_website_opt_shape

DEFAULT_CAP_BITS = 25
VALUE_TOL = 1e-12
CHUNK = 8192


@dataclass(frozen=True)
class Configuration:
    internal: frozenset[Edge]
    external_out: frozenset[Edge]
    value: float | None = None

    def graph(self, g_fixed: WebGraph, I: Iterable[int]) -> WebGraph:
        """``g_fixed`` with the links starting in ``I`` replaced by this configuration."""
        I = frozenset(I)
        kept = {(a, b) for a, b in g_fixed.edges if a not in I}
        return WebGraph(g_fixed.n, frozenset(kept | self.internal | self.external_out))

    def edges(self) -> list[Edge]:
        return sorted(self.internal | self.external_out)


@dataclass
class BruteResult:
    optima: list[Configuration]
    value: float
    count_enumerated: int
    top2_gap: float | None
    checks: list[dict[str, Any]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        out = {
            "optima": [[list(e) for e in cfg.edges()] for cfg in self.optima],
            "value": self.value,
            "count_enumerated": self.count_enumerated,
            "top2_gap": self.top2_gap,
            "tie_tolerance": VALUE_TOL,
        }
        if self.checks:
            out["checks"] = self.checks
        return out


def _bits(masks: np.ndarray, width: int) -> np.ndarray:
    return ((masks[:, None] >> np.arange(width, dtype=np.int64)) & 1).astype(float)


class _Space:
    """Bit layout of the candidate links and the accessibility filter."""

    def __init__(self, g_fixed: WebGraph, I: Iterable[int], constraints: StructureConstraints,
                 cap_bits: int, fixed_internal=None, fixed_external_out=None):
        self.g = g_fixed
        self.I = sorted(nodeset(g_fixed, I))
        if not self.I:
            raise InputError("node set must be nonempty")
        self.out = sorted(complement(g_fixed, self.I))
        if not self.out:
            raise ComplementEmptyError("complement of the node set is empty")
        self.constraints = constraints
        Iset = frozenset(self.I)
        self.fixed = frozenset((a, b) for a, b in g_fixed.edges if a not in Iset)
        stuck = [j for j in self.out if not any(a == j for a, _ in self.fixed)]
        if stuck:
            raise DanglingNodeError(stuck)

        allow_self = constraints.allow_self_links
        if fixed_internal is None:
            self.int_pairs = [(a, b) for a in self.I for b in self.I if allow_self or a != b]
            self.int_masks = None
        else:
            self.int_pairs = sorted(fixed_internal)
            self.int_masks = np.array([(1 << len(self.int_pairs)) - 1], dtype=np.int64)
        if fixed_external_out is None:
            self.ext_pairs = [(a, b) for a in self.I for b in self.out]
            self.ext_masks = None
        else:
            self.ext_pairs = sorted(fixed_external_out)
            self.ext_masks = np.array([(1 << len(self.ext_pairs)) - 1], dtype=np.int64)
        for a, b in self.int_pairs:
            if a not in Iset or b not in Iset:
                raise InputError(f"({a},{b}) is not an internal link")
        for a, b in self.ext_pairs:
            if a not in Iset or b in Iset:
                raise InputError(f"({a},{b}) is not an external outlink")

        free = (len(self.int_pairs) if self.int_masks is None else 0) + (
            len(self.ext_pairs) if self.ext_masks is None else 0)
        if free > cap_bits:
            raise SearchCapExceeded(f"search space 2^{free} exceeds the cap 2^{cap_bits}")

        self.pos = {node: k for k, node in enumerate(self.I)}
        if self.ext_masks is None:
            self.ext_masks = np.arange(1 << len(self.ext_pairs), dtype=np.int64)
        ext_bits = _bits(self.ext_masks, len(self.ext_pairs)).astype(np.int64)
        src = np.array([1 << self.pos[a] for a, _ in self.ext_pairs], dtype=np.int64)
        # bitmask of leaking nodes and number of outlinks for every external choice
        self.ext_leak = np.bitwise_or.reduce(ext_bits * src, axis=1) if self.ext_pairs else np.zeros(len(self.ext_masks), np.int64)
        self.ext_count = ext_bits.sum(axis=1)

    def internal_masks(self) -> Iterator[int]:
        if self.int_masks is not None:
            yield int(self.int_masks[0])
        else:
            yield from range(1 << len(self.int_pairs))

    def reach(self, int_mask: int) -> list[int]:
        """For each node of ``I``, the bitmask of ``I``-nodes it reaches via internal links."""
        k = len(self.I)
        adj = [1 << t for t in range(k)]
        for bit, (a, b) in enumerate(self.int_pairs):
            if int_mask >> bit & 1:
                adj[self.pos[a]] |= 1 << self.pos[b]
        reach = adj[:]
        changed = True
        while changed:
            changed = False
            for t in range(k):
                acc = reach[t]
                for u in range(k):
                    if acc >> u & 1:
                        acc |= reach[u]
                if acc != reach[t]:
                    reach[t] = acc
                    changed = True
        return reach

    def admissible_ext(self, int_mask: int) -> np.ndarray:
        """External masks that, with this internal mask, satisfy accessibility and constraints."""
        ok = self.ext_count >= self.constraints.min_external_outlinks
        for r in self.reach(int_mask):
            ok &= (self.ext_leak & r) != 0
        return self.ext_masks[ok]

    def stream(self) -> Iterator[tuple[int, np.ndarray]]:
        for int_mask in self.internal_masks():
            ext = self.admissible_ext(int_mask)
            if ext.size:
                yield int_mask, ext

    def config(self, int_mask: int, ext_mask: int, value: float | None = None) -> Configuration:
        internal = frozenset(p for bit, p in enumerate(self.int_pairs) if int_mask >> bit & 1)
        external = frozenset(p for bit, p in enumerate(self.ext_pairs) if ext_mask >> bit & 1)
        return Configuration(internal, external, value)


class _Scorer:
    """Batched evaluation of ``(1 - c) z.(I - cP)^{-1} e_T``."""

    def __init__(self, space: _Space, ctx: RankingContext, target: Iterable[int]):
        n = space.g.n
        _require_valid(WebGraph(n, space.fixed | {(i, i) for i in space.I}), ctx)
        self.space = space
        self.ctx = ctx
        self.n = n
        rows = np.zeros((n, n))
        for a, b in space.fixed:
            rows[a - 1, b - 1] = 1.0
        deg = rows.sum(axis=1)
        base = np.zeros((n, n))
        mask = deg > 0
        base[mask] = rows[mask] / deg[mask, None]
        self.base = np.eye(n) - ctx.c * base
        self.rows = [i - 1 for i in space.I]
        self.E_int = self._onehot(space.int_pairs)
        self.E_ext = self._onehot(space.ext_pairs)
        self.rhs = np.zeros(n)
        self.rhs[[t - 1 for t in target]] = 1.0

    def _onehot(self, pairs):
        k = len(self.space.I)
        E = np.zeros((len(pairs), k, self.n))
        for bit, (a, b) in enumerate(pairs):
            E[bit, self.space.pos[a], b - 1] = 1.0
        return E.reshape(len(pairs), -1)

    def __call__(self, int_masks: np.ndarray, ext_masks: np.ndarray) -> np.ndarray:
        k = len(self.space.I)
        A = _bits(int_masks, len(self.space.int_pairs)) @ self.E_int
        A = A + _bits(ext_masks, len(self.space.ext_pairs)) @ self.E_ext
        A = A.reshape(-1, k, self.n)
        P_rows = A / A.sum(axis=2, keepdims=True)
        M = np.broadcast_to(self.base, (len(A), self.n, self.n)).copy()
        M[:, self.rows, :] = -self.ctx.c * P_rows
        M[:, self.rows, self.rows] += 1.0
        rhs = np.broadcast_to(self.rhs, (len(A), self.n))[..., None]
        v = np.linalg.solve(M, rhs)[..., 0]
        return (1.0 - self.ctx.c) * v @ self.ctx.z


def enumerate_admissible(g_fixed: WebGraph, I: Iterable[int],
                         constraints: StructureConstraints | None = None,
                         cap_bits: int = DEFAULT_CAP_BITS,
                         fixed_internal: Iterable[Edge] | None = None,
                         fixed_external_out: Iterable[Edge] | None = None) -> Iterator[Configuration]:
    """Yield every configuration satisfying the accessibility assumption and ``constraints``.

    Internal link sets come in increasing bitmask order and, within each,
    external outlink sets in increasing bitmask order. Passing
    ``fixed_internal`` or ``fixed_external_out`` pins that part.
    """
    space = _Space(g_fixed, I, constraints or StructureConstraints(), cap_bits,
                   fixed_internal, fixed_external_out)
    for int_mask, ext in space.stream():
        for ext_mask in ext:
            yield space.config(int_mask, int(ext_mask))


def _search(space: _Space, ctx: RankingContext, target: Iterable[int]) -> BruteResult:
    score = _Scorer(space, ctx, target)
    best = -np.inf
    second = -np.inf
    cands: list[tuple[float, int, int]] = []
    count = 0

    def flush(int_buf, ext_buf):
        nonlocal best, second, cands
        ints = np.concatenate(int_buf)
        exts = np.concatenate(ext_buf)
        vals = score(ints, exts)
        top = float(vals.max())
        if top > best:
            best = top
            keep = []
            for val, a, b in cands:
                if val >= best - VALUE_TOL:
                    keep.append((val, a, b))
                else:
                    second = max(second, val)
            cands = keep
        near = vals >= best - VALUE_TOL
        if np.any(~near):
            second = max(second, float(vals[~near].max()))
        for idx in np.flatnonzero(near):
            cands.append((float(vals[idx]), int(ints[idx]), int(exts[idx])))

    int_buf, ext_buf, pending = [], [], 0
    for int_mask, ext in space.stream():
        int_buf.append(np.full(ext.size, int_mask, dtype=np.int64))
        ext_buf.append(ext)
        pending += ext.size
        count += ext.size
        if pending >= CHUNK:
            flush(int_buf, ext_buf)
            int_buf, ext_buf, pending = [], [], 0
    if pending:
        flush(int_buf, ext_buf)
    if not count:
        raise InapplicableError("no configuration satisfies the accessibility assumption and constraints")
    optima = [space.config(a, b, val) for val, a, b in cands]
    gap = None if second == -np.inf else float(best - second)
    return BruteResult(optima, float(best), count, gap)


def brute_force_optimum(g_fixed: WebGraph, I: Iterable[int], ctx: RankingContext,
                        constraints: StructureConstraints | None = None,
                        cap_bits: int = DEFAULT_CAP_BITS,
                        fixed_internal: Iterable[Edge] | None = None,
                        fixed_external_out: Iterable[Edge] | None = None) -> BruteResult:
    """All configurations whose set PageRank lies within ``1e-12`` of the maximum."""
    constraints = constraints or StructureConstraints()
    if constraints.target_set is not None:
        return brute_force_target(g_fixed, I, constraints.target_set, ctx, constraints, cap_bits)
    space = _Space(g_fixed, I, constraints, cap_bits, fixed_internal, fixed_external_out)
    return _search(space, ctx, space.I)


def brute_force_target(g_fixed: WebGraph, I: Iterable[int], S: Iterable[int], ctx: RankingContext,
                       constraints: StructureConstraints | None = None,
                       cap_bits: int = DEFAULT_CAP_BITS) -> BruteResult:
    """Maximize the PageRank of ``S`` subset of ``I`` while choosing the links of ``I``.

    Each optimum is checked for the optimal website shape on ``S`` (over
    ``E_S`` and the outlinks of ``S``) and for the chain shape on ``I``.
    On ``I`` self-links are ignored, since a node outside ``S`` never keeps
    one at an optimum; ``strict_shape_on_I`` records the full check.
    """
    constraints = constraints or StructureConstraints()
    I = nodeset(g_fixed, I)
    S = nodeset(g_fixed, S)
    if not S or not S <= I:
        raise InputError("target set must be a nonempty subset of the node set")
    plain = StructureConstraints(constraints.allow_self_links, constraints.min_external_outlinks)
    space = _Space(g_fixed, I, plain, cap_bits)
    result = _search(space, ctx, S)
    for cfg in result.optima:
        g = cfg.graph(g_fixed, I)
        result.checks.append({
            "shape_on_I": chain_ordering(g, I, plain, ignore_self_links=True) is not None,
            "strict_shape_on_I": verify_website_opt_shape(g, I, ctx, plain).satisfied,
            "shape_on_S": verify_website_opt_shape(g, S, ctx).satisfied,
        })
    return result


def evaluate_by_pagerank(g_fixed: WebGraph, I: Iterable[int], cfg: Configuration, ctx: RankingContext,
                         target: Iterable[int] | None = None) -> float:
    """Score a configuration by summing the PageRank vector (independent of the batch path)."""
    I = frozenset(I)
    target = I if target is None else frozenset(target)
    pi = pagerank(cfg.graph(g_fixed, I), ctx)
    return float(sum(pi[t - 1] for t in sorted(target)))


@dataclass
class ConjectureReport:
    rows: list[dict[str, Any]]
    counterexamples: list[dict[str, Any]]
    value: float

    def to_dict(self) -> dict[str, Any]:
        return {"rows": self.rows, "counterexamples": self.counterexamples, "value": self.value}


def conjecture_probe(g_fixed: WebGraph, I: Iterable[int], ctx: RankingContext,
                     cap_bits: int = DEFAULT_CAP_BITS) -> ConjectureReport:
    """At each optimum, does the node of ``I`` with largest ``v`` have a parent outside ``I``?

    Reports only; nothing is asserted.
    """
    I = nodeset(g_fixed, I)
    if not ctx.is_uniform():
        raise InapplicableError("the probe requires a uniform personalization vector")
    if not partition_links(g_fixed, I).external_in:
        raise InapplicableError("the probe requires at least one external inlink")
    result = brute_force_optimum(g_fixed, I, ctx, cap_bits=cap_bits)
    rows = []
    for idx, cfg in enumerate(result.optima):
        g = cfg.graph(g_fixed, I)
        v = visit_vector(g, I, ctx)
        top = v_top_set(g, I, ctx, v).nodes
        best = max(v[i - 1] for i in I)
        heads = [i for i in sorted(I) if best - v[i - 1] <= 1e-9 * best]
        for head in heads:
            parents = [j for j in g.parents(head) if j not in I]
            rows.append({
                "optimum": idx,
                "edges": [list(e) for e in cfg.edges()],
                "head": head,
                "external_parents": parents,
                "has_external_parent": bool(parents),
                "parent_in_V": any(j in top for j in parents),
            })
    bad = [row for row in rows if not row["has_external_parent"]]
    return ConjectureReport(rows, bad, result.value)

