"""The small worked instances shipped with the package.

``figure1`` and ``figure2`` are pairs of undirected graphs on nodes A..E;
they differ only by a self-loop at E. ``figure3_formula`` is
(x1 or x2 or x3) and (not x1 or not x2 or not x3).
"""

from __future__ import annotations

from .patterns import Pattern
from .reductions import CnfFormula
from .stochastic import StochasticMatrix, from_graph

LABELS = ("A", "B", "C", "D", "E")
A, B, C, D, E = range(5)

_G1_EDGES = [(A, B), (B, C), (C, D), (D, E)]
_G2_EDGES = [(A, B), (A, C), (C, E), (D, E)]


def undirected_pattern(n: int, edges, loops=()) -> Pattern:
    arcs = set()
    for u, v in edges:
        arcs |= {(u, v), (v, u)}
    arcs |= {(x, x) for x in loops}
    return Pattern.from_edges(n, arcs)


def figure1_graphs() -> tuple[Pattern, Pattern]:
    return undirected_pattern(5, _G1_EDGES, [C]), undirected_pattern(5, _G2_EDGES, [C])


def figure2_graphs() -> tuple[Pattern, Pattern]:
    return undirected_pattern(5, _G1_EDGES, [C, E]), undirected_pattern(5, _G2_EDGES, [C, E])


def figure1_matrices() -> tuple[StochasticMatrix, StochasticMatrix]:
    g1, g2 = figure1_graphs()
    return from_graph(g1), from_graph(g2)


def figure2_matrices() -> tuple[StochasticMatrix, StochasticMatrix]:
    g1, g2 = figure2_graphs()
    return from_graph(g1), from_graph(g2)


def figure3_formula() -> CnfFormula:
    return CnfFormula(3, ((1, 2, 3), (-1, -2, -3)))
