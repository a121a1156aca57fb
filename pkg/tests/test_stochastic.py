from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import patterns, stochastic_matrices
from oracles import frac_product

from consensus_sets.errors import DimensionMismatch, NegativeEntry, RowSumNotOne, SinkNode
from consensus_sets.figures import A, B, C, D, E, figure1_graphs, figure1_matrices
from consensus_sets.patterns import Pattern, is_scrambling, pattern_mul
from consensus_sets.stochastic import (
    delta,
    from_graph,
    identity,
    is_symmetric,
    is_undirected,
    mat_mul,
    pattern_of,
    to_rational,
    validate,
)

HALF_ROW = [[Fr(1, 2), Fr(1, 2)], [0, 1]]


class TestValidate:
    def test_valid(self):
        m = validate(HALF_ROW)
        assert m.n == 2 and m[0, 0] == Fr(1, 2)

    def test_row_sum(self):
        with pytest.raises(RowSumNotOne) as exc:
            validate([[Fr(1, 2), Fr(1, 3)], [0, 1]])
        assert exc.value.i == 0 and exc.value.actual == Fr(5, 6)

    def test_negative(self):
        with pytest.raises(NegativeEntry) as exc:
            validate([[Fr(3, 2), Fr(-1, 2)], [0, 1]])
        assert (exc.value.i, exc.value.j) == (0, 1)

    def test_not_square(self):
        with pytest.raises(DimensionMismatch):
            validate([[1, 0]])

    def test_string_and_decimal_entries(self):
        m = validate([["0.25", "3/4"], ["1", 0]])
        assert m[0, 0] == Fr(1, 4) and m[0, 1] == Fr(3, 4)

    def test_binary_float_rejected(self):
        with pytest.raises(TypeError):
            to_rational(0.5)

    def test_rationals_normalized(self):
        assert to_rational("2/4") == Fr(1, 2)
        assert to_rational("2/4").denominator == 2


class TestPatternOf:
    def test_examples(self):
        assert pattern_of(validate(HALF_ROW)) == Pattern.from_matrix([[1, 1], [0, 1]])
        assert pattern_of(identity(3)) == Pattern.identity(3)

    def test_figure1(self):
        g1, g2 = figure1_graphs()
        m1, m2 = figure1_matrices()
        assert pattern_of(m1) == g1 and pattern_of(m2) == g2

    @given(st.data())
    def test_homomorphism(self, data):
        n = data.draw(st.integers(1, 4))
        a = data.draw(stochastic_matrices(n=n))
        b = data.draw(stochastic_matrices(n=n))
        assert pattern_of(mat_mul(a, b)) == pattern_mul(pattern_of(a), pattern_of(b))


class TestMatMul:
    @given(stochastic_matrices())
    def test_identity(self, a):
        assert mat_mul(a, identity(a.n)) == a

    @given(stochastic_matrices(), st.data())
    def test_rank_one_absorbs(self, m, data):
        v = data.draw(stochastic_matrices(n=m.n)).row(0)
        r = validate([list(v)] * m.n)
        assert mat_mul(m, r) == r

    def test_figure1_rows(self):
        m1, m2 = figure1_matrices()
        prod = mat_mul(m1, m2)
        assert prod.row(A) == (1, 0, 0, 0, 0)
        assert prod.row(E) == (0, 0, 0, 0, 1)

    @given(st.data())
    def test_matches_oracle_and_stays_stochastic(self, data):
        n = data.draw(st.integers(1, 4))
        a = data.draw(stochastic_matrices(n=n))
        b = data.draw(stochastic_matrices(n=n))
        prod = mat_mul(a, b)
        assert prod.to_lists() == frac_product(a.to_lists(), b.to_lists())
        assert validate(prod.entries) == prod

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            mat_mul(identity(2), identity(3))


class TestDelta:
    def test_examples(self):
        assert delta(identity(2)) == 2
        assert delta(validate(HALF_ROW)) == 1
        assert delta(validate([["1/3", "2/3"], ["1/3", "2/3"]])) == 0

    @settings(max_examples=300)
    @given(st.data())
    def test_submultiplicative(self, data):
        n = data.draw(st.integers(1, 4))
        a = data.draw(stochastic_matrices(n=n))
        b = data.draw(stochastic_matrices(n=n))
        assert delta(mat_mul(a, b)) <= delta(b)

    @given(stochastic_matrices())
    def test_zero_iff_identical_rows(self, m):
        assert (delta(m) == 0) == (len(set(m.entries)) == 1)

    @given(stochastic_matrices())
    def test_two_iff_not_scrambling(self, m):
        assert 0 <= delta(m) <= 2
        assert (delta(m) == 2) == (not is_scrambling(pattern_of(m)))


class TestStructure:
    def test_undirected(self):
        assert is_undirected(validate([["1/2", "1/2"], ["1/2", "1/2"]]))
        assert not is_undirected(validate(HALF_ROW))
        assert is_undirected(figure1_matrices()[0])

    def test_symmetric(self):
        assert is_symmetric(validate([["1/2", "1/2"], ["1/2", "1/2"]]))
        assert is_symmetric(identity(3))
        m1 = figure1_matrices()[0]
        # degrees d(A)=1, d(B)=2
        assert m1[A, B] == 1 and m1[B, A] == Fr(1, 2)
        assert not is_symmetric(m1)


class TestFromGraph:
    def test_examples(self):
        assert from_graph(Pattern.from_matrix([[1]])) == validate([[1]])
        assert from_graph(Pattern.from_edges(2, [(0, 1), (1, 0)])) == validate([[0, 1], [1, 0]])

    def test_figure1_row_c(self):
        m1 = figure1_matrices()[0]
        assert m1.row(C) == (0, Fr(1, 3), Fr(1, 3), Fr(1, 3), 0)
        assert m1.row(D) == (0, 0, Fr(1, 2), 0, Fr(1, 2))

    def test_sink(self):
        with pytest.raises(SinkNode) as exc:
            from_graph([0b10, 0])
        assert exc.value.i == 1

    @given(patterns())
    def test_pattern_roundtrip(self, g):
        assert pattern_of(from_graph(g)) == g
