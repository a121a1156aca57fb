import itertools
import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_sat, reachable_after

from consensus_sets.decider import decide_pair_automaton
from consensus_sets.errors import (
    EmptyClause,
    InstanceTooLarge,
    LiteralOutOfRange,
    MalformedHeader,
    UnknownNode,
    UnterminatedClause,
)
from consensus_sets.figures import figure3_formula
from consensus_sets.patterns import Pattern, pattern_product
from consensus_sets.reductions import (
    FAIL,
    CnfFormula,
    LabeledDigraph,
    assignment_sequence,
    build_doubled,
    build_doubled_graphs,
    build_sat_graphs,
    build_sat_matrices,
    build_split_graphs,
    build_undirected_graphs,
    build_undirected_triple,
    check_path_in_sequence,
    copy_label,
    find_assignment,
    parse_dimacs,
    random_cnf,
    sat_nodes,
    sat_oracle,
)
from consensus_sets.stochastic import is_undirected

FIG3 = "p cnf 3 2\n1 2 3 0\n-1 -2 -3 0\n"
CONTRA = CnfFormula(1, ((1, 1, 1), (-1, -1, -1)))


@st.composite
def formulas(draw, max_vars=3, max_clauses=3, max_width=3):
    n = draw(st.integers(1, max_vars))
    m = draw(st.integers(1, max_clauses))
    lit = st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v]))
    clauses = tuple(tuple(draw(st.lists(lit, min_size=1, max_size=max_width))) for _ in range(m))
    return CnfFormula(n, clauses)


class TestDimacs:
    def test_contradiction(self):
        f = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n")
        assert f.num_vars == 1 and f.clauses == ((1,), (-1,))

    def test_figure3(self):
        assert parse_dimacs(FIG3) == figure3_formula()

    def test_comments_and_multiline_clauses(self):
        f = parse_dimacs("c hello\np cnf 3 2\n1 2\n3 0 -1\n-2 -3 0\n%\n0\n")
        assert f.clauses == ((1, 2, 3), (-1, -2, -3))

    @pytest.mark.parametrize(
        "text, error, line",
        [
            ("p cnf 3 1\n1 5 0\n", LiteralOutOfRange, 2),
            ("p cnf 2 1\n1 2\n", UnterminatedClause, 2),
            ("p cnf 2 1\n1 x 0\n", UnterminatedClause, 2),
            ("p cnf 2 2\n1 0\n0\n", EmptyClause, 3),
            ("1 2 0\n", MalformedHeader, 1),
            ("p cnf 2\n1 0\n", MalformedHeader, 1),
            ("p dnf 2 1\n1 0\n", MalformedHeader, 1),
            ("p cnf 2 1\np cnf 2 1\n1 0\n", MalformedHeader, 2),
        ],
    )
    def test_errors(self, text, error, line):
        with pytest.raises(error) as exc:
            parse_dimacs(text)
        assert exc.value.line == line

    def test_count_mismatch_and_missing_header(self):
        with pytest.raises(MalformedHeader):
            parse_dimacs("p cnf 2 3\n1 0\n")
        with pytest.raises(MalformedHeader):
            parse_dimacs("c only comments\n")

    @given(formulas())
    def test_roundtrip(self, f):
        assert parse_dimacs(f.to_dimacs()) == f


class TestFormula:
    def test_validation(self):
        with pytest.raises(ValueError):
            CnfFormula(2, ((1, 3),))
        with pytest.raises(ValueError):
            CnfFormula(2, ())
        with pytest.raises(ValueError):
            CnfFormula(2, ((),))

    def test_duplicate_literals_allowed(self):
        assert CONTRA.num_clauses == 2


class TestSatOracle:
    def test_examples(self):
        assert not sat_oracle(CnfFormula(1, ((1,), (-1,))))
        assert sat_oracle(figure3_formula())
        assert figure3_formula().satisfied_by((1, 0, 0))
        assert sat_oracle(CnfFormula(4, ((1, -2, 4),)))

    def test_first_assignment_is_lexicographic(self):
        assert find_assignment(figure3_formula()) == (0, 0, 1)

    def test_too_large(self):
        with pytest.raises(InstanceTooLarge):
            sat_oracle(CnfFormula(25, ((1,),)))

    @given(formulas(max_vars=5, max_clauses=6))
    def test_matches_brute_force(self, f):
        assert sat_oracle(f) == brute_sat(f.num_vars, f.clauses)
        a = find_assignment(f)
        assert (a is not None) == sat_oracle(f)
        if a is not None:
            assert f.satisfied_by(a)


def _edges(g):
    return {(a, b) for a, b in g.edges}


class TestSatGraphs:
    def test_figure3_edges(self):
        g0, g1 = build_sat_graphs(figure3_formula())
        shared = {("F", "F"), ("S2", "S3"), ("S3", "S4"), ("S4", "C1,1"), ("S4", "C2,1")}
        assert _edges(g0) == shared | {
            ("C1,1", "C1,2"), ("C1,2", "C1,3"), ("C1,3", "F"),
            ("C2,1", "S2"), ("C2,2", "S3"), ("C2,3", "S4"),
        }
        assert _edges(g1) == shared | {
            ("C1,1", "S2"), ("C1,2", "S3"), ("C1,3", "S4"),
            ("C2,1", "C2,2"), ("C2,2", "C2,3"), ("C2,3", "F"),
        }

    def test_figure3_size(self):
        g0, _ = build_sat_graphs(figure3_formula())
        assert len(g0.nodes) == 10
        assert g0.nodes == ("C1,1", "C1,2", "C1,3", "C2,1", "C2,2", "C2,3", "S2", "S3", "S4", "F")

    def test_single_positive_literal(self):
        g0, g1 = build_sat_graphs(CnfFormula(1, ((1,),)))
        assert g0.nodes == ("C1,1", "S2", "F")
        assert ("C1,1", "S2") in g1.edges and ("C1,1", "F") not in g1.edges
        assert ("C1,1", "F") in g0.edges and ("C1,1", "S2") not in g0.edges
        assert ("S2", "C1,1") in g0.edges and ("S2", "C1,1") in g1.edges

    def test_no_self_loop_at_source(self):
        for g in build_sat_graphs(figure3_formula()):
            assert ("S4", "S4") not in g.edges

    def test_matrices(self):
        a0, a1 = build_sat_matrices(figure3_formula())
        idx = {x: i for i, x in enumerate(sat_nodes(figure3_formula()))}
        for a in (a0, a1):
            assert a.n == 10
            assert a.row(idx["F"]) == tuple(int(j == idx["F"]) for j in range(10))
            s = a.row(idx["S4"])
            assert s[idx["C1,1"]] == s[idx["C2,1"]] == Fr(1, 2)
            assert sum(1 for x in s if x) == 2

    def test_contradiction_is_4x4(self):
        a0, a1 = build_sat_matrices(CONTRA)
        assert a0.n == a1.n == 4

    @given(formulas())
    def test_size_formula(self, f):
        a0, _ = build_sat_matrices(f)
        assert a0.n == (f.num_clauses + 1) * f.num_vars + 1

    def test_unknown_edge_label(self):
        with pytest.raises(UnknownNode):
            LabeledDigraph(("a",), {("a", "b")})


class TestPaths:
    def test_empty_sequence(self):
        assert check_path_in_sequence([], "F", "F").exists

    def test_single_edge(self):
        g = LabeledDigraph(("u", "v"), {("u", "v")})
        res = check_path_in_sequence([g], "u", "v")
        assert res.exists and res.path == ((1, ("u", "v")),)

    def test_unknown_node(self):
        g = LabeledDigraph(("u", "v"), {("u", "v")})
        with pytest.raises(UnknownNode):
            check_path_in_sequence([g], "u", "w")

    def test_assignment_blocks_source_to_fail(self):
        f = figure3_formula()
        graphs = build_sat_graphs(f)
        seq = assignment_sequence((1, 0, 0), graphs)
        assert len(seq) == f.num_vars + 1
        assert not check_path_in_sequence(seq, "S4", FAIL).exists

    def test_falsifying_assignment_has_path(self):
        f = figure3_formula()
        seq = assignment_sequence((0, 0, 0), build_sat_graphs(f))
        res = check_path_in_sequence(seq, "S4", FAIL)
        assert res.exists
        times = [t for t, _ in res.path]
        assert times == list(range(1, len(times) + 1))
        assert res.path[0][1][0] == "S4" and res.path[-1][1][1] == FAIL

    @settings(max_examples=60, deadline=None)
    @given(formulas())
    def test_path_equivalence(self, f):
        graphs = build_sat_graphs(f)
        src = f"S{f.num_vars + 1}"
        blocked = any(
            not check_path_in_sequence([graphs[b] for b in seq], src, FAIL).exists
            for seq in itertools.product((0, 1), repeat=f.num_vars + 1)
        )
        assert blocked == sat_oracle(f)

    @settings(max_examples=60, deadline=None)
    @given(formulas(), st.lists(st.integers(0, 1), min_size=1, max_size=6))
    def test_exact_length_matches_reachability(self, f, seq):
        graphs = build_sat_graphs(f)
        src = f"S{f.num_vars + 1}"
        res = check_path_in_sequence([graphs[b] for b in seq], src, FAIL, exact_length=True)
        assert res.exists == (FAIL in reachable_after([graphs[b].edges for b in seq], src))


class TestDoubled:
    def test_figure3(self):
        d0, d1 = build_doubled_graphs(figure3_formula())
        assert len(d0.nodes) == 20
        f1 = copy_label(FAIL, 1)
        assert d0.out_degree(f1) == 11
        assert (f1, copy_label(FAIL, 2)) in d0.edges and (copy_label(FAIL, 2), f1) in d1.edges
        m0, _ = build_doubled(figure3_formula())
        row = m0.row(d0.index()[f1])
        assert sorted(set(row)) == [0, Fr(1, 11)]
        assert not any(row[i] for i in range(10, 19))

    def test_unsat_products_positive(self):
        d = [g.to_pattern() for g in build_doubled_graphs(CONTRA)]
        length = 2 * (CONTRA.num_vars + 1) + 2
        for word in itertools.product(range(2), repeat=length):
            assert pattern_product([d[w] for w in word]) == Pattern.ones(d[0].n)

    def test_decision_matches(self):
        for f in (CONTRA, figure3_formula()):
            a = decide_pair_automaton(build_sat_matrices(f)).decision
            assert decide_pair_automaton(build_doubled(f)).decision == a


class TestUndirected:
    def test_split_graphs_figure3(self):
        s0, s1, s2 = build_split_graphs(figure3_formula())
        assert len(s0.nodes) == 19
        assert ("C1,1_T", "C1,2_B") in s0.edges and ("C1,2_B", "C1,1_T") in s0.edges
        assert ("C1,3_T", "F") in s0.edges and ("F", "F") in s0.edges
        assert ("C1,1_T", "C1,1_B") in s2.edges and ("F", "F") in s2.edges
        assert all(g.undirected for g in (s0, s1, s2))

    def test_sizes_and_symmetry(self):
        f = figure3_formula()
        graphs = build_undirected_graphs(f)
        for g in graphs:
            assert len(g.nodes) == 4 * (f.num_clauses + 1) * f.num_vars + 2
        for b in build_undirected_triple(f):
            assert is_undirected(b)

    def test_fail_link_between_copies(self):
        for g in build_undirected_graphs(CONTRA):
            assert (copy_label(FAIL, 1), copy_label(FAIL, 2)) in g.edges

    def test_decisions(self):
        assert decide_pair_automaton(build_undirected_triple(CONTRA)).is_consensus
        assert not decide_pair_automaton(build_undirected_triple(figure3_formula())).is_consensus


class TestReductionEquivalence:
    @settings(max_examples=80, deadline=None)
    @given(formulas(max_vars=3, max_clauses=3))
    def test_directed(self, f):
        assert decide_pair_automaton(build_sat_matrices(f)).is_consensus == (not sat_oracle(f))

    def test_random_cnf(self):
        rng = random.Random(5)
        f = random_cnf(rng, 4, 5)
        assert f.num_vars == 4 and f.num_clauses == 5
        assert all(len(c) == 3 for c in f.clauses)
        assert random_cnf(random.Random(5), 4, 5) == f
