"""Named graphs used by the examples, tests and CLI demos (1-based ids).

The figure graphs are reconstructions: edges were chosen so that every
reported number and qualitative claim of the corresponding example is
reproduced.
"""

from __future__ import annotations

from .graph import WebGraph


def _g(n, edges):
    return WebGraph(n, frozenset(edges))


C2 = _g(2, [(1, 2), (2, 1)])
C3 = _g(3, [(1, 2), (2, 3), (3, 1)])
CHAIN3 = _g(3, [(1, 2), (2, 3), (3, 3)])

# node 1 with a self-link; 2, 3, 4 form a clique pointing back to 1,
# 5 links into the clique and to 6, and 6..11 form a long cycle through 1
G_FIG2 = _g(11, [
    (1, 1), (2, 1), (2, 3), (2, 4), (3, 1), (3, 2), (3, 4), (4, 1), (4, 2), (4, 3),
    (5, 2), (5, 3), (5, 4), (5, 6), (6, 1), (6, 11), (11, 10), (10, 9), (9, 8), (8, 7), (7, 6),
])
I_FIG2 = frozenset({1})

G_EX8 = _g(7, [
    (1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (3, 6), (4, 4), (5, 6),
    (6, 1), (6, 4), (6, 7), (7, 1), (7, 4), (7, 5), (7, 6),
])
I_EX8 = frozenset({1, 2, 3})

# two chain-shaped configurations of I = {1,2,3} with node 4 pointing at 2
G_EX12A = _g(4, [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (3, 4), (4, 2)])
G_EX12B = _g(4, [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3), (3, 4), (4, 2)])
I_EX12 = frozenset({1, 2, 3})
Z_EX12 = (0.7, 0.1, 0.1, 0.1)

# internal links fixed; final classes {3,4} (with links) and {5} (no self-link)
G_EX5 = _g(7, [(1, 2), (2, 3), (2, 5), (3, 4), (4, 3), (4, 6), (5, 6), (6, 1), (7, 1)])
I_EX5 = frozenset({1, 2, 3, 4, 5})
EI_EX5 = frozenset({(1, 2), (2, 3), (2, 5), (3, 4), (4, 3)})

# outlinks fixed with two leaking nodes; optimal internal links sit at the
# lower bound in (a) and at the upper bound in (b)
G_EX10A = _g(5, [
    (1, 1), (1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (2, 5), (3, 2), (3, 3),
    (4, 4), (5, 1), (5, 5),
])
G_EX10B = _g(6, [
    (1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (2, 5), (3, 1), (3, 2), (3, 3), (3, 4),
    (4, 3), (4, 6), (5, 3), (6, 1), (6, 5),
])
I_EX10 = frozenset({1, 2, 3})

# maximizing the PageRank of S = {1,2} inside I = {1,2,3}: the optimum is a
# chain through I in (a) but not in (b)
G_EX14A = _g(5, [
    (1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 4),
    (4, 1), (4, 5), (5, 5),
])
G_EX14B = _g(4, [(1, 1), (1, 2), (1, 4), (2, 1), (2, 2), (3, 2), (4, 2)])
I_EX14 = frozenset({1, 2, 3})
S_EX14 = frozenset({1, 2})

G_EX15 = _g(3, [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (3, 1)])
I_EX15 = frozenset({1, 2})

G_EX16 = _g(5, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1)])
I_EX16 = frozenset({1, 2, 3})

# the optimal shape on five pages: chain, all backward links and self-links,
# one outlink from the last page
G_FIG1 = _g(7, [
    (1, 1), (1, 2),
    (2, 1), (2, 2), (2, 3),
    (3, 1), (3, 2), (3, 3), (3, 4),
    (4, 1), (4, 2), (4, 3), (4, 4), (4, 5),
    (5, 1), (5, 2), (5, 3), (5, 4), (5, 5), (5, 6),
    (6, 1), (6, 7), (7, 6),
])
I_FIG1 = frozenset({1, 2, 3, 4, 5})

NAMED = {
    "c2": C2,
    "c3": C3,
    "chain3": CHAIN3,
    "g_fig2": G_FIG2,
    "g_ex8": G_EX8,
    "g_ex5": G_EX5,
    "g_ex10a": G_EX10A,
    "g_ex10b": G_EX10B,
    "g_ex12a": G_EX12A,
    "g_ex12b": G_EX12B,
    "g_ex14a": G_EX14A,
    "g_ex14b": G_EX14B,
    "g_ex15": G_EX15,
    "g_ex16": G_EX16,
    "g_fig1": G_FIG1,
}
