"""Consensus deciders and their certificates.

Four routes to the same decision:

* :func:`decide_pair_automaton` searches the graph of disjoint support pairs
  for a reachable cycle. This is the default and the only one that scales.
* :func:`decide_theorem_check` grows the set of distinct length-``t`` pattern
  products until they are all scrambling or the ``4**n`` bound is hit.
* :func:`decide_literal_enumeration` multiplies out every word of length
  ``4**n``. Tiny instances only; it exists to cross-check the other two.
* :func:`decide_symmetric` is the polynomial test for exactly symmetric
  matrices (each graph connected and non-bipartite).

Products are read left to right: row ``i`` of ``P_1 P_2 ... P_t`` is the
support of ``e_i`` pushed through ``P_1`` first.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import (
    DimensionMismatch,
    EmptyMatrixSet,
    InstanceTooLarge,
    NotSymmetric,
    ResourceCapExceeded,
)
from .patterns import (
    Pattern,
    Support,
    is_bipartite_undirected,
    is_connected_undirected,
    mul_rows,
    rows_scrambling,
    step_mask,
)
from .stochastic import StochasticMatrix, is_symmetric, pattern_of, validate

DEFAULT_STATE_CAP = 2**22
LITERAL_WORD_CAP = 2**17


class Decision(str, enum.Enum):
    CONSENSUS = "Consensus"
    NOT_CONSENSUS = "NotConsensus"


class Algorithm(str, enum.Enum):
    PAIR_AUTOMATON = "PairAutomaton"
    THEOREM_CHECK = "TheoremCheck"
    LITERAL_ENUMERATION = "LiteralEnumeration"
    SYMMETRIC_FAST_PATH = "SymmetricFastPath"


@dataclass(frozen=True)
class NonConsensusWitness:
    """Rows ``i`` and ``j`` whose supports never meet along ``prefix + cycle*``."""

    row_pair: tuple[int, int]
    prefix: tuple[int, ...]
    cycle: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "row_pair", tuple(self.row_pair))
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))

    def word(self, length: int) -> list[int]:
        """First ``length`` letters of the infinite word ``prefix cycle cycle ...``."""
        out = list(self.prefix[:length])
        while len(out) < length:
            out.extend(self.cycle[: length - len(out)])
        return out

    def relabel(self, perm: Sequence[int]) -> "NonConsensusWitness":
        i, j = self.row_pair
        return NonConsensusWitness((perm[i], perm[j]), self.prefix, self.cycle)


@dataclass(frozen=True)
class ConsensusVerdict:
    decision: Decision
    algorithm: Algorithm
    theorem_bound: int
    scrambling_index: int | None = None
    witness: NonConsensusWitness | None = None
    states_explored: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.decision is Decision.CONSENSUS:
            if self.scrambling_index is None or self.witness is not None:
                raise ValueError("a Consensus verdict carries a scrambling index and no witness")
            if not 1 <= self.scrambling_index <= self.theorem_bound:
                raise ValueError(f"scrambling index {self.scrambling_index} outside [1, {self.theorem_bound}]")
        elif self.witness is None or self.scrambling_index is not None:
            raise ValueError("a NotConsensus verdict carries a witness and no scrambling index")

    @property
    def is_consensus(self) -> bool:
        return self.decision is Decision.CONSENSUS


@dataclass(frozen=True)
class PairState:
    """Unordered pair of disjoint nonempty supports.

    Canonical orientation puts the support with the smaller least element first.
    """

    s1: Support
    s2: Support

    @classmethod
    def canonical(cls, a: Support, b: Support) -> "PairState":
        x, y = _canon(a.bits, b.bits)
        return cls(Support(a.n, x), Support(a.n, y))


@dataclass(frozen=True)
class WitnessCheck:
    ok: bool
    reason: str

    def __bool__(self):
        return self.ok


def theorem_bound(n: int) -> int:
    return 4**n


def _canon(a: int, b: int) -> tuple[int, int]:
    return (a, b) if (a & -a) < (b & -b) else (b, a)


def as_patterns(items) -> list[Pattern]:
    """Accept Patterns, StochasticMatrix values or raw nested lists of rationals."""
    items = list(items)
    if not items:
        raise EmptyMatrixSet("at least one matrix is required")
    out = []
    for x in items:
        if isinstance(x, Pattern):
            out.append(x)
        elif isinstance(x, StochasticMatrix):
            out.append(pattern_of(x))
        else:
            out.append(pattern_of(validate(x)))
    n = out[0].n
    for idx, p in enumerate(out):
        if p.n != n:
            raise DimensionMismatch(f"matrix {idx} has dimension {p.n}, expected {n}")
    return out


def _successors(state: tuple[int, int], rows_list) -> Iterator[tuple[int, tuple[int, int]]]:
    a, b = state
    for m, rows in enumerate(rows_list):
        a2 = step_mask(a, rows)
        b2 = step_mask(b, rows)
        if not a2 & b2:
            yield m, _canon(a2, b2)


def _propagate(a: int, b: int, word, rows_list):
    """Push an ordered support pair through ``word``; None once they overlap."""
    for m in word:
        a = step_mask(a, rows_list[m])
        b = step_mask(b, rows_list[m])
        if a & b:
            return None
    return a, b


_GRAY, _BLACK = 1, 2


def decide_pair_automaton(patterns, state_cap: int = DEFAULT_STATE_CAP) -> ConsensusVerdict:
    """Decide consensus by cycle detection on the disjoint-support-pair graph.

    Seeds are ``({i}, {j})`` for ``i < j`` in ascending order and letters are
    tried in ascending index order, so the first back edge found by the
    depth-first search is deterministic. On the YES side the graph is acyclic
    and the scrambling index is one more than its longest path from a seed.
    """
    pats = as_patterns(patterns)
    n = pats[0].n
    rows_list = [p.rows for p in pats]
    bound = theorem_bound(n)

    color: dict[tuple[int, int], int] = {}
    height: dict[tuple[int, int], int] = {}
    longest = 0

    for i in range(n):
        for j in range(i + 1, n):
            seed = (1 << i, 1 << j)
            if seed in color:
                longest = max(longest, height[seed])
                continue
            color[seed] = _GRAY
            stack = [[seed, _successors(seed, rows_list), 0]]
            on_stack = {seed: 0}
            labels: list[int] = []
            while stack:
                frame = stack[-1]
                node, succ = frame[0], frame[1]
                pushed = False
                for m, nxt in succ:
                    c = color.get(nxt)
                    if c is None:
                        color[nxt] = _GRAY
                        if len(color) > state_cap:
                            raise ResourceCapExceeded(f"more than {state_cap} pair states reachable")
                        on_stack[nxt] = len(stack)
                        stack.append([nxt, _successors(nxt, rows_list), 0])
                        labels.append(m)
                        pushed = True
                        break
                    if c == _GRAY:
                        pos = on_stack[nxt]
                        witness = _close_witness((i, j), labels[:pos], labels[pos:] + [m], rows_list)
                        return ConsensusVerdict(
                            Decision.NOT_CONSENSUS,
                            Algorithm.PAIR_AUTOMATON,
                            bound,
                            witness=witness,
                            states_explored=len(color),
                        )
                    frame[2] = max(frame[2], height[nxt] + 1)
                if pushed:
                    continue
                stack.pop()
                del on_stack[node]
                color[node] = _BLACK
                height[node] = frame[2]
                if stack:
                    labels.pop()
                    stack[-1][2] = max(stack[-1][2], frame[2] + 1)
            longest = max(longest, height[seed])

    return ConsensusVerdict(
        Decision.CONSENSUS,
        Algorithm.PAIR_AUTOMATON,
        bound,
        scrambling_index=longest + 1,
        states_explored=len(color),
    )


def _close_witness(row_pair, prefix, cycle, rows_list) -> NonConsensusWitness:
    # The back edge matches the canonical (unordered) pair. If the loop swaps
    # the two supports, going round twice restores the ordered pair.
    i, j = row_pair
    start = _propagate(1 << i, 1 << j, prefix, rows_list)
    end = _propagate(*start, cycle, rows_list)
    if end != start:
        assert end == (start[1], start[0])
        cycle = cycle + cycle
    return NonConsensusWitness(row_pair, tuple(prefix), tuple(cycle))


def reachable_pair_states(patterns, state_cap: int = DEFAULT_STATE_CAP) -> set[PairState]:
    """Every pair state reachable from a seed (breadth-first, no cycle test)."""
    pats = as_patterns(patterns)
    n = pats[0].n
    rows_list = [p.rows for p in pats]
    seen = {(1 << i, 1 << j) for i in range(n) for j in range(i + 1, n)}
    frontier = list(seen)
    while frontier:
        nxt_frontier = []
        for state in frontier:
            for _, nxt in _successors(state, rows_list):
                if nxt not in seen:
                    seen.add(nxt)
                    nxt_frontier.append(nxt)
        if len(seen) > state_cap:
            raise ResourceCapExceeded(f"more than {state_cap} pair states reachable")
        frontier = nxt_frontier
    return {PairState(Support(n, a), Support(n, b)) for a, b in seen}


def decide_theorem_check(patterns, pattern_cap: int = DEFAULT_STATE_CAP) -> ConsensusVerdict:
    """Iterate the set of distinct length-t products up to the ``4**n`` bound.

    Stops early once every product is scrambling (absorption keeps it that way)
    or when the product set repeats an earlier one (the sequence of sets is
    then periodic and never becomes all-scrambling).
    """
    pats = as_patterns(patterns)
    n = pats[0].n
    rows_list = [p.rows for p in pats]
    bound = theorem_bound(n)

    current = frozenset(rows_list)
    seen = {current}
    t = 1
    while True:
        if all(rows_scrambling(r) for r in current):
            return ConsensusVerdict(Decision.CONSENSUS, Algorithm.THEOREM_CHECK, bound, scrambling_index=t)
        if t >= bound:
            break
        nxt = frozenset(mul_rows(a, b) for a in current for b in rows_list)
        if len(nxt) > pattern_cap:
            raise ResourceCapExceeded(f"more than {pattern_cap} distinct products of length {t + 1}")
        t += 1
        if nxt in seen:
            break
        seen.add(nxt)
        current = nxt
    return _delegate_no(pats, Algorithm.THEOREM_CHECK, pattern_cap)


def _delegate_no(pats, algorithm, cap) -> ConsensusVerdict:
    v = decide_pair_automaton(pats, cap)
    if v.is_consensus:
        raise AssertionError(f"{algorithm.value} found non-consensus but the pair automaton did not")
    return ConsensusVerdict(Decision.NOT_CONSENSUS, algorithm, v.theorem_bound, witness=v.witness)


def decide_literal_enumeration(patterns, word_cap: int = LITERAL_WORD_CAP) -> ConsensusVerdict:
    """Multiply out all ``k**L`` words of every length up to ``L = 4**n``.

    No deduplication and no early exit: this is a brute-force oracle. The
    scrambling index reported is the least ``t`` such that every length ``s``
    product with ``t <= s <= L`` is scrambling.
    """
    pats = as_patterns(patterns)
    n = pats[0].n
    k = len(pats)
    bound = theorem_bound(n)
    if k**bound > word_cap:
        raise InstanceTooLarge(f"{k}**{bound} words exceeds the literal-enumeration cap {word_cap}")
    rows_list = [p.rows for p in pats]

    level = list(rows_list)
    last_bad = 0
    for t in range(1, bound + 1):
        if t > 1:
            level = [mul_rows(a, b) for a in level for b in rows_list]
        if not all(rows_scrambling(r) for r in level):
            last_bad = t
    if last_bad < bound:
        return ConsensusVerdict(
            Decision.CONSENSUS, Algorithm.LITERAL_ENUMERATION, bound, scrambling_index=last_bad + 1
        )
    return _delegate_no(pats, Algorithm.LITERAL_ENUMERATION, DEFAULT_STATE_CAP)


def decide_symmetric(matrices, state_cap: int = DEFAULT_STATE_CAP) -> ConsensusVerdict:
    """Consensus for symmetric stochastic matrices: every graph connected and non-bipartite.

    The decision comes from the graph test alone. Certificates (witness or
    scrambling index) are produced by the pair automaton so that verdicts
    from every algorithm have the same shape.
    """
    mats = [m if isinstance(m, StochasticMatrix) else validate(m) for m in matrices]
    if not mats:
        raise EmptyMatrixSet("at least one matrix is required")
    for idx, m in enumerate(mats):
        if not is_symmetric(m):
            raise NotSymmetric(idx)
    pats = as_patterns(mats)
    ok = all(is_connected_undirected(p) and not is_bipartite_undirected(p) for p in pats)

    v = decide_pair_automaton(pats, state_cap)
    if v.is_consensus != ok:
        raise AssertionError("symmetric criterion and pair automaton disagree")
    return ConsensusVerdict(
        v.decision,
        Algorithm.SYMMETRIC_FAST_PATH,
        v.theorem_bound,
        scrambling_index=v.scrambling_index,
        witness=v.witness,
        states_explored=v.states_explored,
    )


def failing_symmetric_matrices(matrices) -> list[int]:
    """Indices of symmetric matrices whose graph is disconnected or bipartite."""
    out = []
    for idx, p in enumerate(as_patterns(matrices)):
        if not is_connected_undirected(p) or is_bipartite_undirected(p):
            out.append(idx)
    return out


def scrambling_index(patterns, state_cap: int = DEFAULT_STATE_CAP) -> int | None:
    """Least ``t`` with every length-``t`` product scrambling, or None if there is none."""
    return decide_pair_automaton(patterns, state_cap).scrambling_index


def check_witness(patterns, w: NonConsensusWitness) -> WitnessCheck:
    try:
        pats = as_patterns(patterns)
    except (EmptyMatrixSet, DimensionMismatch):
        return WitnessCheck(False, "bad_matrix_set")
    n, k = pats[0].n, len(pats)
    rows_list = [p.rows for p in pats]
    if len(w.row_pair) != 2:
        return WitnessCheck(False, "bad_row_pair")
    i, j = w.row_pair
    if not (0 <= i < n and 0 <= j < n):
        return WitnessCheck(False, "row_out_of_range")
    if i == j:
        return WitnessCheck(False, "same_row")
    if not w.cycle:
        return WitnessCheck(False, "empty_cycle")
    if any(not 0 <= m < k for m in (*w.prefix, *w.cycle)):
        return WitnessCheck(False, "index_out_of_range")
    start = _propagate(1 << i, 1 << j, w.prefix, rows_list)
    if start is None:
        return WitnessCheck(False, "overlap_in_prefix")
    end = _propagate(*start, w.cycle, rows_list)
    if end is None:
        return WitnessCheck(False, "overlap_in_cycle")
    if _canon(*start) != _canon(*end):
        return WitnessCheck(False, "cycle_not_closed")
    return WitnessCheck(True, "ok")


def verify_witness(patterns, w: NonConsensusWitness) -> bool:
    return check_witness(patterns, w).ok


ALGORITHMS = {
    "pairs": decide_pair_automaton,
    "theorem": decide_theorem_check,
    "literal": decide_literal_enumeration,
    "symmetric": decide_symmetric,
}


def decide(matrices, algorithm: str = "auto", state_cap: int = DEFAULT_STATE_CAP) -> ConsensusVerdict:
    """Dispatch by name; ``auto`` takes the symmetric fast path when it applies."""
    if algorithm == "auto":
        mats = list(matrices)
        if mats and all(isinstance(m, StochasticMatrix) and is_symmetric(m) for m in mats):
            return decide_symmetric(mats, state_cap)
        return decide_pair_automaton(mats, state_cap)
    try:
        fn = ALGORITHMS[algorithm]
    except KeyError:
        raise ValueError(f"unknown algorithm {algorithm!r}") from None
    if fn is decide_literal_enumeration:
        return fn(matrices)
    return fn(matrices, state_cap)
