"""Certificates for the necessary shape of optimal link structures, and a
constructor that searches over those shapes.

A website ``I`` controls its internal links ``E_I`` and its external
outlinks ``E_out``; everything else is fixed. Under the accessibility
assumption (every page of ``I`` can reach the outside), an optimal choice
orders ``I`` by decreasing visit value, links every node to all earlier
nodes and itself plus the next one, and leaks through a single link from
the last node. These are necessary conditions only.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable

import numpy as np

from .calculus import Change, OutlinkMutation, RankOneUpdater
from .engine import RankingContext, close, greater, tolerance, v_top_set, visit_vector
from .errors import (
    AssumptionViolated,
    ComplementEmptyError,
    EdgeExistsError,
    InapplicableError,
    InputError,
    SearchCapExceeded,
)
from .graph import (
    Edge,
    WebGraph,
    complement,
    final_classes,
    nodes_without_exit,
    nodeset,
    partition_links,
)


@dataclass(frozen=True)
class StructureConstraints:
    allow_self_links: bool = True
    min_external_outlinks: int = 1
    target_set: frozenset[int] | None = None

    def __post_init__(self):
        if self.min_external_outlinks < 1:
            raise InputError("at least one external outlink is required")
        if self.target_set is not None:
            object.__setattr__(self, "target_set", frozenset(self.target_set))


@dataclass(frozen=True)
class Violation:
    rule: str
    witness: tuple
    margin: float | None = None

    def to_dict(self) -> dict[str, Any]:
        return {"rule": self.rule, "witness": _jsonable(self.witness), "margin": self.margin}


@dataclass
class StructureCertificate:
    theorem: str
    ordering: tuple[int, ...] | None
    violations: list[Violation]
    leaking_nodes: frozenset[int]
    v: np.ndarray
    info: dict[str, Any] = field(default_factory=dict)

    @property
    def satisfied(self) -> bool:
        return not self.violations

    def rules_violated(self) -> set[str]:
        return {viol.rule for viol in self.violations}

    def to_dict(self) -> dict[str, Any]:
        return {
            "theorem": self.theorem,
            "satisfied": self.satisfied,
            "ordering": list(self.ordering) if self.ordering else None,
            "violations": [viol.to_dict() for viol in self.violations],
            "leaking_nodes": sorted(self.leaking_nodes),
            "v": [float(x) for x in self.v],
            "info": _jsonable(self.info),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(val) for k, val in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonable(x) for x in items]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _require_assumption(g: WebGraph, I: frozenset[int]):
    stuck = nodes_without_exit(g, I)
    if stuck:
        raise AssumptionViolated(stuck)


def chain_edges(order: Iterable[int], self_links: bool = True) -> frozenset[Edge]:
    """Forward chain through ``order`` plus every backward link (and self-links)."""
    order = list(order)
    pos = {node: k for k, node in enumerate(order)}
    return frozenset(
        (a, b)
        for a in order
        for b in order
        if pos[b] < pos[a] or pos[b] == pos[a] + 1 or (self_links and a == b)
    )


def chain_ordering(g: WebGraph, I: Iterable[int], constraints: StructureConstraints | None = None,
                   ignore_self_links: bool = False) -> tuple[int, ...] | None:
    """An ordering of ``I`` under which ``g`` has the optimal website shape, if any.

    Purely combinatorial: ``E_I`` must be a forward chain with every
    backward link (and self-links when allowed), and the outlinks of ``I``
    must all leave the last node, ``r`` of them. ``v`` is not consulted.
    With ``ignore_self_links`` the self-links of ``I`` are neither required
    nor forbidden.
    """
    constraints = constraints or StructureConstraints()
    I = nodeset(g, I)
    part = partition_links(g, I)
    internal = part.internal
    with_self = constraints.allow_self_links
    if ignore_self_links:
        internal = frozenset((a, b) for a, b in internal if a != b)
        with_self = False
    sources = {a for a, _ in part.external_out}
    count = len(part.external_out)
    r = constraints.min_external_outlinks
    free = len(I) == 1 and not constraints.allow_self_links
    if count < r if free else count != r:
        return None
    # internal outdegree grows by one along the chain; the last two nodes tie
    order = sorted(I, key=lambda i: (sum(1 for a, _ in internal if a == i), i))
    swapped = order[:-2] + order[-2:][::-1]
    for cand in (order, swapped):
        if internal == chain_edges(cand, with_self) and sources == {cand[-1]}:
            return tuple(cand)
    return None


def _separation(v: np.ndarray, I: frozenset[int], out: frozenset[int]) -> float:
    """``min_I v - max_out v``."""
    return float(min(v[i - 1] for i in I) - max(v[j - 1] for j in out))


def verify_outlink_structure(g: WebGraph, I: Iterable[int], ctx: RankingContext) -> StructureCertificate:
    """Check the outlink pattern required of an optimum with ``E_I`` fixed.

    Rules: (i) outlinks start in final classes of ``(I, E_I)``; (ii) from a
    node of minimal ``v`` within its class; (iii) towards ``V``; (iv) a
    class with internal links has exactly one outlink.
    """
    I = nodeset(g, I)
    out = complement(g, I)
    if not out:
        raise ComplementEmptyError("complement of the node set is empty")
    _require_assumption(g, I)
    v = visit_vector(g, I, ctx)
    top = v_top_set(g, I, ctx, v)
    part = partition_links(g, I)
    finals = final_classes(g, I)
    class_of = {i: F for F in finals for i in F}
    best_out = max(v[j - 1] for j in out)
    violations = []

    stray = tuple(sorted(e for e in part.external_out if e[0] not in class_of))
    if stray:
        violations.append(Violation("i", stray))
    for i, j in sorted(part.external_out):
        F = class_of.get(i)
        if F is not None:
            lowest = min(v[k - 1] for k in F)
            if not close(v[i - 1], lowest):
                violations.append(Violation("ii", ((i, j),), float(v[i - 1] - lowest)))
        if j not in top.nodes:
            violations.append(Violation("iii", ((i, j),), float(best_out - v[j - 1])))
    for F in finals:
        has_internal = any((a, b) in part.internal for a in F for b in F)
        leaks = tuple(sorted(e for e in part.external_out if e[0] in F))
        if has_internal and len(leaks) != 1:
            violations.append(Violation("iv", leaks))

    gap = _separation(v, I, out)
    order = tuple(sorted(I, key=lambda i: (-v[i - 1], i)))
    return StructureCertificate(
        theorem="outlink",
        ordering=order,
        violations=violations,
        leaking_nodes=frozenset(i for i, _ in part.external_out),
        v=v,
        info={
            "final_classes": [sorted(F) for F in finals],
            "V": sorted(top.nodes),
            "separation_margin": gap,
            "separation_holds": gap > tolerance(gap, 0.0) and gap > 0,
        },
    )


def _tie_classes(nodes: list[int], v: np.ndarray) -> list[list[int]]:
    classes: list[list[int]] = []
    for node in nodes:
        if classes and close(v[classes[-1][0] - 1], v[node - 1]):
            classes[-1].append(node)
        else:
            classes.append([node])
    return classes


def internal_bounds(order: list[int], leaking: frozenset[int]) -> tuple[frozenset[Edge], frozenset[Edge]]:
    """Lower and upper bounds on ``E_I`` for an ordering with leaking nodes last."""
    pos = {node: k for k, node in enumerate(order)}
    lower = {(a, b) for a in order for b in order if pos[b] <= pos[a]}
    lower |= {(a, b) for a in order if a not in leaking for b in order if pos[b] == pos[a] + 1}
    upper = lower | {(a, b) for a in leaking for b in leaking if pos[a] < pos[b]}
    return frozenset(lower), frozenset(upper)


def verify_internal_structure(g: WebGraph, I: Iterable[int], ctx: RankingContext) -> StructureCertificate:
    """Check the internal pattern required of an optimum with ``E_out`` fixed."""
    I = nodeset(g, I)
    if not complement(g, I):
        raise ComplementEmptyError("complement of the node set is empty")
    _require_assumption(g, I)
    part = partition_links(g, I)
    if not part.external_out:
        raise InapplicableError("no external outlinks")
    v = visit_vector(g, I, ctx)
    leaking = frozenset(i for i, _ in part.external_out)
    key = lambda i: (-v[i - 1], i)  # noqa: E731
    head = sorted(I - leaking, key=key)
    tail = sorted(leaking, key=key)
    violations = []
    for a, b in zip(head, head[1:]):
        if not greater(v[a - 1], v[b - 1]):
            violations.append(Violation("order-strict", (a, b), float(v[a - 1] - v[b - 1])))
    if head and not greater(v[head[-1] - 1], v[tail[0] - 1]):
        violations.append(Violation("order-leaking", (head[-1], tail[0]), float(v[head[-1] - 1] - v[tail[0] - 1])))

    # ties among leaking nodes leave the order open; pick one that fits E_I if any
    tie_classes = _tie_classes(tail, v)
    chosen = None
    for perm in itertools.product(*(itertools.permutations(cls) for cls in tie_classes)):
        order = head + [x for cls in perm for x in cls]
        lower, upper = internal_bounds(order, leaking)
        if chosen is None:
            chosen = (order, lower, upper)
        if lower <= part.internal <= upper:
            chosen = (order, lower, upper)
            break
    order, lower, upper = chosen
    missing = tuple(sorted(lower - part.internal))
    extra = tuple(sorted(part.internal - upper))
    if missing:
        violations.append(Violation("lower-bound", missing))
    if extra:
        violations.append(Violation("upper-bound", extra))
    return StructureCertificate(
        theorem="internal",
        ordering=tuple(order),
        violations=violations,
        leaking_nodes=leaking,
        v=v,
        info={
            "n_leaking": len(leaking),
            "equals_lower": part.internal == lower,
            "equals_upper": part.internal == upper,
            "lower": sorted(lower),
            "upper": sorted(upper),
            "leaking_tie_classes": [c for c in tie_classes if len(c) > 1],
        },
    )


def verify_website_opt_shape(g: WebGraph, I: Iterable[int], ctx: RankingContext,
                             constraints: StructureConstraints | None = None) -> StructureCertificate:
    """Check the full optimal shape: chain plus backlinks, outlinks from the last node.

    With default constraints a single outlink is required. With
    ``allow_self_links=False`` the internal links exclude self-links, and a
    singleton may then leak through several links. With
    ``min_external_outlinks = r`` exactly ``r`` outlinks leave the last node.
    """
    constraints = constraints or StructureConstraints()
    I = nodeset(g, I)
    out = complement(g, I)
    if not out:
        raise ComplementEmptyError("complement of the node set is empty")
    _require_assumption(g, I)
    v = visit_vector(g, I, ctx)
    part = partition_links(g, I)
    top = v_top_set(g, I, ctx, v)
    order = sorted(I, key=lambda i: (-v[i - 1], i))
    violations = []
    for a, b in zip(order, order[1:]):
        if not greater(v[a - 1], v[b - 1]):
            violations.append(Violation("order-strict", (a, b), float(v[a - 1] - v[b - 1])))

    expected = chain_edges(order, self_links=constraints.allow_self_links)
    missing = tuple(sorted(expected - part.internal))
    extra = tuple(sorted(part.internal - expected))
    if missing:
        violations.append(Violation("chain-missing", missing))
    if extra:
        violations.append(Violation("chain-extra", extra))

    last = order[-1]
    r = constraints.min_external_outlinks
    wrong_source = tuple(sorted(e for e in part.external_out if e[0] != last))
    if wrong_source:
        violations.append(Violation("outlink-source", wrong_source))
    singleton_free = len(I) == 1 and not constraints.allow_self_links
    count = len(part.external_out)
    if (singleton_free and count < r) or (not singleton_free and count != r):
        violations.append(Violation("outlink-count", tuple(sorted(part.external_out)), float(count)))

    targets = sorted(j for _, j in part.external_out)
    gap = _separation(v, I, out)
    others = [j for j in out if j not in targets]
    top_r = not others or not targets or all(
        v[t - 1] >= max(v[j - 1] for j in others) - tolerance(v[t - 1], 0.0) for t in targets
    )
    return StructureCertificate(
        theorem="website",
        ordering=tuple(order),
        violations=violations,
        leaking_nodes=frozenset(i for i, _ in part.external_out),
        v=v,
        info={
            "targets": targets,
            "targets_in_V": all(t in top.nodes for t in targets),
            "targets_are_top": top_r,
            "V": sorted(top.nodes),
            "separation_margin": gap,
        },
    )


def linking_to_parents_check(g: WebGraph, I: Iterable[int], ctx: RankingContext) -> bool:
    """Whether the configuration leaks through a single link to a parent of ``I``."""
    I = nodeset(g, I)
    part = partition_links(g, I)
    if not part.external_in:
        raise InapplicableError("no external inlinks; every outside node has zero visit value")
    if len(part.external_out) != 1:
        return False
    (_, j), = part.external_out
    return any((j, k) in part.external_in for k in I)


def external_inlink_premise(g: WebGraph, I: Iterable[int], ctx: RankingContext, j: int) -> bool:
    """``min_I v > max_out v`` and ``j`` is not already a parent of ``I``."""
    I = nodeset(g, I)
    out = complement(g, I)
    v = visit_vector(g, I, ctx)
    separated = greater(min(v[i - 1] for i in I), max(v[k - 1] for k in out))
    return separated and not any(k in I for k in g.children(j))


def external_inlink_effect(g: WebGraph, I: Iterable[int], ctx: RankingContext, j: int, i: int) -> Change:
    """Sign of the change in the PageRank of ``I`` when ``(j, i)`` is added."""
    I = nodeset(g, I)
    if j in I or i not in I:
        raise InputError("expected j outside the set and i inside it")
    if (j, i) in g.edges:
        raise EdgeExistsError(f"edge ({j},{i}) already present")
    premise = external_inlink_premise(g, I, ctx, j)
    sign = RankOneUpdater(g, I, ctx).sign(OutlinkMutation.add_link(g, j, i))
    if premise and sign is not Change.INCREASE:
        raise AssertionError(f"adding ({j},{i}) should increase the PageRank of the set")
    return sign


def _fixed_part(g_fixed: WebGraph, I: frozenset[int]) -> frozenset[Edge]:
    part = partition_links(g_fixed, I)
    return part.external_in | part.external


def build_optimal_structure(g_fixed: WebGraph, I: Iterable[int], ctx: RankingContext,
                            constraints: StructureConstraints | None = None,
                            max_perm: int = 8) -> tuple[WebGraph, float]:
    """Best configuration among the necessary shapes.

    The links of ``g_fixed`` that start outside ``I`` are kept; links
    starting inside ``I`` are replaced. Every ordering of ``I`` and every
    choice of outlink targets from the last node is evaluated; ties go to
    the lexicographically smallest edge set.
    """
    constraints = constraints or StructureConstraints()
    if constraints.target_set is not None:
        raise InputError("target-set objectives are searched by brute force only")
    I = nodeset(g_fixed, I)
    if not I:
        raise InputError("node set must be nonempty")
    out = sorted(complement(g_fixed, I))
    if not out:
        raise ComplementEmptyError("complement of the node set is empty")
    if len(I) > max_perm:
        raise SearchCapExceeded(f"|I| = {len(I)} exceeds the permutation bound {max_perm}")
    r = constraints.min_external_outlinks
    if r > len(out):
        raise SearchCapExceeded(f"cannot place {r} outlinks towards {len(out)} outside nodes")
    fixed = _fixed_part(g_fixed, I)

    candidates: list[tuple[list[int], list[frozenset[int]]]] = []
    if len(I) == 1:
        (i,) = I
        base = WebGraph(g_fixed.n, fixed | {(i, i)})
        v0_top = sorted(v_top_set(base, I, ctx).nodes)
        if constraints.allow_self_links:
            pools = [frozenset(c) for c in itertools.combinations(out, r)]
        else:
            pool = v0_top if len(v0_top) >= r else out
            pools = [frozenset(c) for k in range(r, len(pool) + 1) for c in itertools.combinations(pool, k)]
        candidates.append(([i], pools))
    else:
        pools = [frozenset(c) for c in itertools.combinations(out, r)]
        for perm in itertools.permutations(sorted(I)):
            candidates.append((list(perm), pools))

    best: tuple[float, list[Edge]] | None = None
    for order, pools in candidates:
        internal = chain_edges(order, self_links=constraints.allow_self_links)
        last = order[-1]
        first = WebGraph(g_fixed.n, fixed | internal | {(last, j) for j in pools[0]})
        upd = RankOneUpdater(first, I, ctx)
        for targets in pools:
            m = OutlinkMutation(last, frozenset(b for a, b in internal if a == last) | targets)
            value = upd.value if targets == pools[0] else upd.updated_value(m)
            edges = sorted(fixed | internal | {(last, j) for j in targets})
            if best is None or greater(value, best[0]) or (close(value, best[0]) and edges < best[1]):
                best = (value, edges)
    value, edges = best
    return WebGraph(g_fixed.n, frozenset(edges)), float(value)
