"""SAT gadgets: CNF input, the two-graph construction and its variants.

Node naming (stable, and also the canonical matrix ordering):

* ``C{i},{j}`` for clause ``i`` (1..m) and variable ``j`` (1..n), row-major;
* ``S{j}`` for j = 2..n+1, where ``S{n+1}`` is the source node ``S``;
* ``F``, the failure node. ``C{i},{n+1}`` is an alias for ``F``.

The undirected gadget splits every node except ``F`` into ``<name>_T`` and
``<name>_B``. Doubled graphs tag each node with its copy as ``<name>/1`` and
``<name>/2``.
"""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    EmptyClause,
    InstanceTooLarge,
    LiteralOutOfRange,
    MalformedHeader,
    UnknownNode,
    UnterminatedClause,
)
from .patterns import Pattern
from .stochastic import StochasticMatrix, from_graph

FAIL = "F"
SAT_ORACLE_MAX_VARS = 24


@dataclass(frozen=True)
class CnfFormula:
    """Clauses are tuples of nonzero DIMACS literals (``-j`` negates variable ``j``)."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.num_vars < 1:
            raise ValueError("a formula needs at least one variable")
        if not self.clauses:
            raise ValueError("a formula needs at least one clause")
        for idx, clause in enumerate(self.clauses, 1):
            if not clause:
                raise EmptyClause(f"clause {idx} is empty")
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise LiteralOutOfRange(f"clause {idx}: literal {lit} outside 1..{self.num_vars}")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment: Sequence[int]) -> bool:
        """``assignment[j-1]`` is the 0/1 value of variable ``j``."""
        return all(any(literal_true(lit, assignment[abs(lit) - 1]) for lit in c) for c in self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {self.num_clauses}"]
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


def literal_true(lit: int, value: int) -> bool:
    return (lit > 0) == bool(value)


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    pending_line = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            # end marker used by some benchmark collections
            break
        if line.startswith("p"):
            if header is not None:
                raise MalformedHeader("duplicate problem line", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise MalformedHeader(f"expected 'p cnf <vars> <clauses>', got {line!r}", lineno)
            try:
                nv, nc = int(parts[2]), int(parts[3])
            except ValueError:
                raise MalformedHeader(f"non-integer counts in {line!r}", lineno) from None
            if nv < 1 or nc < 1:
                raise MalformedHeader("variable and clause counts must be positive", lineno)
            header = (nv, nc)
            continue
        if header is None:
            raise MalformedHeader("clause data before the problem line", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise UnterminatedClause(f"unexpected token {tok!r}", lineno) from None
            if lit == 0:
                if not pending:
                    raise EmptyClause("empty clause", lineno)
                clauses.append(tuple(pending))
                pending = []
                continue
            if abs(lit) > header[0]:
                raise LiteralOutOfRange(f"literal {lit} outside 1..{header[0]}", lineno)
            if not pending:
                pending_line = lineno
            pending.append(lit)
    if header is None:
        raise MalformedHeader("missing problem line")
    if pending:
        raise UnterminatedClause("clause is missing its terminating 0", pending_line)
    if len(clauses) != header[1]:
        raise MalformedHeader(f"header declares {header[1]} clauses, found {len(clauses)}")
    return CnfFormula(header[0], tuple(clauses))


def find_assignment(f: CnfFormula) -> tuple[int, ...] | None:
    """Brute force over all ``2**n`` assignments in lexicographic order."""
    if f.num_vars > SAT_ORACLE_MAX_VARS:
        raise InstanceTooLarge(f"{f.num_vars} variables exceeds the oracle limit {SAT_ORACLE_MAX_VARS}")
    for bits in itertools.product((0, 1), repeat=f.num_vars):
        if f.satisfied_by(bits):
            return bits
    return None


def sat_oracle(f: CnfFormula) -> bool:
    return find_assignment(f) is not None


def random_cnf(rng: random.Random, num_vars: int, num_clauses: int, width: int = 3) -> CnfFormula:
    """Uniform random clauses of fixed width; repeated variables allowed."""
    clauses = []
    for _ in range(num_clauses):
        clauses.append(tuple(rng.randint(1, num_vars) * rng.choice((1, -1)) for _ in range(width)))
    return CnfFormula(num_vars, tuple(clauses))


# -- graphs -----------------------------------------------------------------


@dataclass(frozen=True)
class LabeledDigraph:
    nodes: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    undirected: bool = False

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        known = set(self.nodes)
        if len(known) != len(self.nodes):
            raise ValueError("duplicate node labels")
        for u, v in self.edges:
            if u not in known or v not in known:
                raise UnknownNode(f"edge ({u}, {v}) references an unknown node")
        if self.undirected and any((v, u) not in self.edges for u, v in self.edges):
            raise ValueError("undirected graph has an unpaired edge")

    def index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.nodes)}

    def successors(self, u: str) -> list[str]:
        return sorted((v for a, v in self.edges if a == u), key=self.index().__getitem__)

    def out_degree(self, u: str) -> int:
        return sum(1 for a, _ in self.edges if a == u)

    def to_pattern(self) -> Pattern:
        idx = self.index()
        return Pattern.from_edges(len(self.nodes), ((idx[u], idx[v]) for u, v in self.edges))

    def to_matrix(self) -> StochasticMatrix:
        return from_graph(self.to_pattern())


def clause_node(i: int, j: int, n: int) -> str:
    return FAIL if j == n + 1 else f"C{i},{j}"


def s_node(j: int) -> str:
    return f"S{j}"


def source_node(f: CnfFormula) -> str:
    return s_node(f.num_vars + 1)


def sat_nodes(f: CnfFormula) -> tuple[str, ...]:
    m, n = f.num_clauses, f.num_vars
    nodes = [clause_node(i, j, n) for i in range(1, m + 1) for j in range(1, n + 1)]
    nodes += [s_node(j) for j in range(2, n + 2)]
    nodes.append(FAIL)
    return tuple(nodes)


def _sat_edges(f: CnfFormula, b: int) -> set[tuple[str, str]]:
    m, n = f.num_clauses, f.num_vars
    edges = {(FAIL, FAIL)}
    for i, clause in enumerate(f.clauses, 1):
        for j in range(1, n + 1):
            if any(abs(lit) == j and literal_true(lit, b) for lit in clause):
                edges.add((clause_node(i, j, n), s_node(j + 1)))
            else:
                edges.add((clause_node(i, j, n), clause_node(i, j + 1, n)))
    for j in range(2, n + 1):
        edges.add((s_node(j), s_node(j + 1)))
    for i in range(1, m + 1):
        edges.add((s_node(n + 1), clause_node(i, 1, n)))
    return edges


def build_sat_graphs(f: CnfFormula) -> tuple[LabeledDigraph, LabeledDigraph]:
    """The pair G_0(f), G_1(f) on ``(m+1)n + 1`` shared nodes."""
    nodes = sat_nodes(f)
    return LabeledDigraph(nodes, _sat_edges(f, 0)), LabeledDigraph(nodes, _sat_edges(f, 1))


def build_sat_matrices(f: CnfFormula) -> tuple[StochasticMatrix, StochasticMatrix]:
    g0, g1 = build_sat_graphs(f)
    return g0.to_matrix(), g1.to_matrix()


def assignment_sequence(assignment: Sequence[int], graphs: Sequence[LabeledDigraph]) -> list[LabeledDigraph]:
    """Graph sequence of length n+1 read off an assignment.

    Slot 0 leaves the source (its edges agree in both graphs); slot ``j`` uses
    the graph indexed by the value of variable ``j``.
    """
    return [graphs[0]] + [graphs[v] for v in assignment]


@dataclass(frozen=True)
class GraphSequencePath:
    exists: bool
    path: tuple[tuple[int, tuple[str, str]], ...] | None = None


def check_path_in_sequence(
    graphs: Sequence[LabeledDigraph], u: str, v: str, exact_length: bool = False
) -> GraphSequencePath:
    """Time-respecting path from ``u`` to ``v``: step ``t`` (1-based) uses an edge of ``graphs[t-1]``.

    The path starts at time 1 and may stop at any time unless ``exact_length``
    is set, in which case it must use every graph in the sequence. The path
    returned is a shortest one, as a tuple of ``(time, edge)``.
    """
    known = set(graphs[0].nodes) if graphs else {u, v}
    for g in graphs:
        if set(g.nodes) != known:
            raise ValueError("graphs in a sequence must share one node set")
    for label in (u, v):
        if label not in known:
            raise UnknownNode(label)
    if u == v and (not exact_length or not graphs):
        return GraphSequencePath(True, ())

    adj = []
    for g in graphs:
        out: dict[str, list[str]] = {}
        for a, b in sorted(g.edges):
            out.setdefault(a, []).append(b)
        adj.append(out)

    parent: dict[tuple[int, str], tuple[int, str]] = {}
    frontier = deque([(0, u)])
    seen = {(0, u)}
    T = len(graphs)
    while frontier:
        t, x = frontier.popleft()
        if t == T:
            continue
        for y in adj[t].get(x, ()):
            state = (t + 1, y)
            if state in seen:
                continue
            seen.add(state)
            parent[state] = (t, x)
            if y == v and (not exact_length or t + 1 == T):
                path = []
                cur = state
                while cur != (0, u):
                    prev = parent[cur]
                    path.append((cur[0], (prev[1], cur[1])))
                    cur = prev
                return GraphSequencePath(True, tuple(reversed(path)))
            frontier.append(state)
    return GraphSequencePath(False, None)


# -- doubled variant ----------------------------------------------------------


def copy_label(label: str, copy: int) -> str:
    return f"{label}/{copy}"


def _doubled_graph(g: LabeledDigraph) -> LabeledDigraph:
    nodes = [copy_label(x, c) for c in (1, 2) for x in g.nodes]
    edges = set()
    for c in (1, 2):
        edges |= {(copy_label(a, c), copy_label(b, c)) for a, b in g.edges}
        edges |= {(copy_label(FAIL, c), copy_label(x, c)) for x in g.nodes}
    edges.add((copy_label(FAIL, 1), copy_label(FAIL, 2)))
    edges.add((copy_label(FAIL, 2), copy_label(FAIL, 1)))
    return LabeledDigraph(tuple(nodes), edges)


def build_doubled_graphs(f: CnfFormula) -> tuple[LabeledDigraph, LabeledDigraph]:
    g0, g1 = build_sat_graphs(f)
    return _doubled_graph(g0), _doubled_graph(g1)


def build_doubled(f: CnfFormula) -> tuple[StochasticMatrix, StochasticMatrix]:
    d0, d1 = build_doubled_graphs(f)
    return d0.to_matrix(), d1.to_matrix()


# -- undirected three-graph variant ------------------------------------------


def top(label: str) -> str:
    return FAIL if label == FAIL else f"{label}_T"


def bottom(label: str) -> str:
    return FAIL if label == FAIL else f"{label}_B"


def split_nodes(f: CnfFormula) -> tuple[str, ...]:
    out = []
    for x in sat_nodes(f):
        if x != FAIL:
            out += [top(x), bottom(x)]
    out.append(FAIL)
    return tuple(out)


def _symmetrize(edges: Iterable[tuple[str, str]]) -> set[tuple[str, str]]:
    out = set()
    for a, b in edges:
        out.add((a, b))
        out.add((b, a))
    return out


def build_split_graphs(f: CnfFormula) -> tuple[LabeledDigraph, LabeledDigraph, LabeledDigraph]:
    """Single-copy graphs s_0, s_1, s_2 before the F edges and duplication."""
    nodes = split_nodes(f)
    out = []
    for g in build_sat_graphs(f):
        out.append(LabeledDigraph(nodes, _symmetrize((top(a), bottom(b)) for a, b in g.edges), undirected=True))
    pairs = [(top(x), bottom(x)) for x in sat_nodes(f)]
    out.append(LabeledDigraph(nodes, _symmetrize(pairs), undirected=True))
    return tuple(out)


def _duplicate(nodes: Sequence[str], edges: set[tuple[str, str]]) -> LabeledDigraph:
    all_nodes = [copy_label(x, c) for c in (1, 2) for x in nodes]
    all_edges = set()
    for c in (1, 2):
        all_edges |= {(copy_label(a, c), copy_label(b, c)) for a, b in edges}
    all_edges |= _symmetrize([(copy_label(FAIL, 1), copy_label(FAIL, 2))])
    return LabeledDigraph(tuple(all_nodes), all_edges, undirected=True)


def build_undirected_graphs(f: CnfFormula) -> tuple[LabeledDigraph, LabeledDigraph, LabeledDigraph]:
    """g_0, g_1 (bottom nodes tied to F) and g_2 (top nodes tied to F), each in two copies."""
    s0, s1, s2 = build_split_graphs(f)
    nodes = s0.nodes
    tops = [x for x in nodes if x.endswith("_T")]
    bottoms = [x for x in nodes if x.endswith("_B")]
    g0 = _duplicate(nodes, set(s0.edges) | _symmetrize((x, FAIL) for x in bottoms))
    g1 = _duplicate(nodes, set(s1.edges) | _symmetrize((x, FAIL) for x in bottoms))
    g2 = _duplicate(nodes, set(s2.edges) | _symmetrize((x, FAIL) for x in tops))
    return g0, g1, g2


def build_undirected_triple(f: CnfFormula) -> tuple[StochasticMatrix, StochasticMatrix, StochasticMatrix]:
    return tuple(g.to_matrix() for g in build_undirected_graphs(f))


VARIANTS = {
    "directed": build_sat_graphs,
    "doubled": build_doubled_graphs,
    "undirected": build_undirected_graphs,
}


def build_variant_graphs(f: CnfFormula, variant: str) -> tuple[LabeledDigraph, ...]:
    try:
        return VARIANTS[variant](f)
    except KeyError:
        raise ValueError(f"unknown variant {variant!r}") from None
