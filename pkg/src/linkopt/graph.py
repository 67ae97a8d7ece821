"""Directed graphs, edge-list I/O, link partitions and reachability.

Node ids are 1-based everywhere in the public API.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .errors import (
    ComplementEmptyError,
    DanglingNodeError,
    GraphFormatError,
    NodeRangeError,
)

Edge = tuple[int, int]


@dataclass(frozen=True)
class WebGraph:
    """Immutable directed graph on nodes ``1..n``."""

    n: int
    edges: frozenset[Edge]
    _children: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _parents: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise GraphFormatError(f"node count must be a positive integer, got {self.n!r}")
        edges = frozenset((int(i), int(j)) for i, j in self.edges)
        for i, j in edges:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise NodeRangeError(f"edge ({i},{j}) has a node id outside [1, {self.n}]")
        children = [[] for _ in range(self.n + 1)]
        parents = [[] for _ in range(self.n + 1)]
        for i, j in sorted(edges):
            children[i].append(j)
            parents[j].append(i)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "_children", tuple(tuple(c) for c in children))
        object.__setattr__(self, "_parents", tuple(tuple(sorted(p)) for p in parents))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "WebGraph":
        return cls(n, frozenset(edges))

    @property
    def nodes(self) -> range:
        return range(1, self.n + 1)

    def children(self, i: int) -> tuple[int, ...]:
        return self._children[i]

    def parents(self, j: int) -> tuple[int, ...]:
        return self._parents[j]

    def outdegree(self, i: int) -> int:
        return len(self._children[i])

    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)

    def with_children(self, i: int, children: Iterable[int]) -> "WebGraph":
        """Copy of the graph where node ``i`` links exactly to ``children``."""
        kept = {(a, b) for a, b in self.edges if a != i}
        return WebGraph(self.n, frozenset(kept | {(i, j) for j in children}))

    def with_edges(self, add: Iterable[Edge] = (), remove: Iterable[Edge] = ()) -> "WebGraph":
        return WebGraph(self.n, frozenset((self.edges - set(remove)) | set(add)))

    def to_text(self) -> str:
        lines = [str(self.n)] + [f"{i} {j}" for i, j in self.edge_list()]
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return f"WebGraph(n={self.n}, edges={self.edge_list()})"


@dataclass(frozen=True)
class LinkPartition:
    internal: frozenset[Edge]
    external_out: frozenset[Edge]
    external_in: frozenset[Edge]
    external: frozenset[Edge]


def parse_graph(text: str) -> WebGraph:
    """Parse the edge-list format: ``n`` on the first data line, then ``i j`` lines.

    Lines starting with ``#`` and blank lines are ignored. Duplicate edges
    collapse to one.
    """
    n = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 1 or not parts[0].isdigit():
                raise GraphFormatError(f"line {lineno}: expected node count, got {raw!r}")
            n = int(parts[0])
            if n < 1:
                raise GraphFormatError(f"line {lineno}: node count must be positive")
            continue
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphFormatError(f"line {lineno}: expected 'i j', got {raw!r}")
        i, j = int(parts[0]), int(parts[1])
        if not (1 <= i <= n and 1 <= j <= n):
            raise NodeRangeError(f"line {lineno}: node id out of range [1, {n}] in {raw!r}")
        edges.add((i, j))
    if n is None:
        raise GraphFormatError("missing node count")
    return WebGraph(n, frozenset(edges))


def parse_nodeset(text: str) -> frozenset[int]:
    """Parse ``"1,2,3"``; the empty string gives the empty set."""
    text = text.strip()
    if not text:
        return frozenset()
    try:
        return frozenset(int(tok) for tok in text.split(","))
    except ValueError:
        raise GraphFormatError(f"bad node set {text!r}; expected comma-separated ids") from None


def nodeset(g: WebGraph, nodes: Iterable[int]) -> frozenset[int]:
    """Validate ``nodes`` against ``g`` and return them as a frozenset."""
    out = frozenset(int(i) for i in nodes)
    bad = sorted(i for i in out if not 1 <= i <= g.n)
    if bad:
        raise NodeRangeError(f"node ids {bad} outside [1, {g.n}]")
    return out


def complement(g: WebGraph, I: Iterable[int]) -> frozenset[int]:
    I = set(I)
    return frozenset(i for i in g.nodes if i not in I)


def partition_links(g: WebGraph, I: Iterable[int]) -> LinkPartition:
    I = nodeset(g, I)
    buckets = {(True, True): set(), (True, False): set(), (False, True): set(), (False, False): set()}
    for i, j in g.edges:
        buckets[(i in I, j in I)].add((i, j))
    return LinkPartition(
        internal=frozenset(buckets[(True, True)]),
        external_out=frozenset(buckets[(True, False)]),
        external_in=frozenset(buckets[(False, True)]),
        external=frozenset(buckets[(False, False)]),
    )


def reachable_from(g: WebGraph, start: int, within: frozenset[int] | None = None) -> set[int]:
    """Nodes reachable from ``start`` (including itself), optionally inside ``within``."""
    seen = {start}
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for j in g.children(i):
            if j not in seen and (within is None or j in within):
                seen.add(j)
                queue.append(j)
    return seen


def has_access(g: WebGraph, i: int, J: Iterable[int]) -> bool:
    """True iff some path (possibly of length 0) leads from ``i`` into ``J``."""
    J = nodeset(g, J)
    nodeset(g, [i])
    if i in J:
        return True
    return not reachable_from(g, i).isdisjoint(J)


def nodes_with_access(g: WebGraph, J: Iterable[int]) -> set[int]:
    """All nodes that have access to ``J``, by reverse search from ``J``."""
    J = nodeset(g, J)
    seen = set(J)
    queue = deque(J)
    while queue:
        j = queue.popleft()
        for p in g.parents(j):
            if p not in seen:
                seen.add(p)
                queue.append(p)
    return seen


def nodes_without_exit(g: WebGraph, I: Iterable[int]) -> frozenset[int]:
    """Nodes of ``I`` with no path to the complement of ``I``."""
    I = nodeset(g, I)
    out = complement(g, I)
    if not out:
        raise ComplementEmptyError("complement of the node set is empty")
    ok = nodes_with_access(g, out)
    return frozenset(i for i in I if i not in ok)


def check_accessibility(g: WebGraph, I: Iterable[int]) -> bool:
    """Whether every node of ``I`` has access to the complement of ``I``."""
    return not nodes_without_exit(g, I)


def strongly_connected_components(g: WebGraph, within: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Tarjan's algorithm (iterative); components sorted by smallest member.

    With ``within``, only the subgraph induced on those nodes is considered.
    """
    allowed = frozenset(g.nodes) if within is None else nodeset(g, within)
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    comps: list[frozenset[int]] = []
    counter = 0
    for root in sorted(allowed):
        if root in index:
            continue
        work = [(root, iter(g.children(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for w in it:
                if w not in allowed:
                    continue
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(g.children(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[node] = min(low[node], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == node:
                        break
                comps.append(frozenset(comp))
    return sorted(comps, key=min)


def final_classes(g: WebGraph, I: Iterable[int]) -> list[frozenset[int]]:
    """Final classes of the subgraph ``(I, E_I)``.

    A node of ``I`` without internal children forms a final class on its own
    (with an empty internal edge set).
    """
    I = nodeset(g, I)
    finals = []
    for comp in strongly_connected_components(g, I):
        leaves = any(j in I and j not in comp for i in comp for j in g.children(i))
        if not leaves:
            finals.append(comp)
    return finals


def dangling_nodes(g: WebGraph) -> list[int]:
    return [i for i in g.nodes if g.outdegree(i) == 0]


def check_no_dangling(g: WebGraph) -> bool:
    return not dangling_nodes(g)


def validate(g: WebGraph, patch_dangling: bool = False) -> WebGraph:
    """Reject graphs with dangling nodes, or patch them with links to every node."""
    dangling = dangling_nodes(g)
    if not dangling:
        return g
    if not patch_dangling:
        raise DanglingNodeError(dangling)
    return g.with_edges(add=[(i, j) for i in dangling for j in g.nodes])
