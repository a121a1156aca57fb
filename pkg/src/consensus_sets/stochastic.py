"""Exact row-stochastic matrices over ``fractions.Fraction``."""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Sequence

from .errors import DimensionMismatch, NegativeEntry, RowSumNotOne, SinkNode
from .patterns import Pattern, iter_bits, mask_of

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def to_rational(value) -> Fraction:
    """Convert ints, Fractions, Decimals and strings ("p/q", "0.25") exactly.

    Binary floats are rejected because they rarely denote the intended rational.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {value!r} as a rational") from exc
    if isinstance(value, float):
        raise TypeError(f"binary float {value!r} is not exact; pass a string or Fraction")
    raise TypeError(f"unsupported entry type {type(value).__name__}")


@dataclass(frozen=True)
class StochasticMatrix:
    """Square matrix with nonnegative rational entries and unit row sums.

    Construct through :func:`validate`; the constructor trusts its input.
    """

    n: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    @property
    def pattern(self) -> Pattern:
        return pattern_of(self)

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]

    def to_strings(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.entries]

    def to_float(self):
        import numpy as np

        return np.array([[float(x) for x in r] for r in self.entries], dtype=float)

    def permute(self, perm: Sequence[int]) -> "StochasticMatrix":
        """Relabel node ``i`` as ``perm[i]`` (conjugation by a permutation)."""
        out = [[_ZERO] * self.n for _ in range(self.n)]
        for i in range(self.n):
            for j in range(self.n):
                out[perm[i]][perm[j]] = self.entries[i][j]
        return StochasticMatrix(self.n, tuple(tuple(r) for r in out))

    def __matmul__(self, other: "StochasticMatrix") -> "StochasticMatrix":
        return mat_mul(self, other)


def validate(m) -> StochasticMatrix:
    """Check a square nested sequence of rationals and return it as a StochasticMatrix."""
    if isinstance(m, StochasticMatrix):
        m = m.entries
    n = len(m)
    if n < 1:
        raise DimensionMismatch("matrix must have at least one row")
    rows = []
    for i, raw in enumerate(m):
        if len(raw) != n:
            raise DimensionMismatch(f"row {i} has length {len(raw)}, expected {n}")
        row = tuple(to_rational(x) for x in raw)
        for j, x in enumerate(row):
            if x < 0:
                raise NegativeEntry(i, j, x)
        total = sum(row, _ZERO)
        if total != _ONE:
            raise RowSumNotOne(i, total)
        rows.append(row)
    return StochasticMatrix(n, tuple(rows))


def pattern_of(m: StochasticMatrix) -> Pattern:
    return Pattern(m.n, tuple(mask_of(j for j, x in enumerate(r) if x > 0) for r in m.entries))


def identity(n: int) -> StochasticMatrix:
    return StochasticMatrix(n, tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)))


def _mul_entries(a, b, n):
    cols = list(zip(*b))
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out.append(tuple(sum((x * cols[j][k] for k, x in nz), _ZERO) for j in range(n)))
    return tuple(out)


def mat_mul(a: StochasticMatrix, b: StochasticMatrix) -> StochasticMatrix:
    if a.n != b.n:
        raise DimensionMismatch(f"cannot multiply {a.n}x{a.n} by {b.n}x{b.n}")
    entries = _mul_entries(a.entries, b.entries, a.n)
    assert all(sum(r, _ZERO) == _ONE for r in entries), "product lost stochasticity"
    return StochasticMatrix(a.n, entries)


def delta(m: StochasticMatrix) -> Fraction:
    """Largest L1 distance between two rows; lies in [0, 2]."""
    best = _ZERO
    rows = m.entries
    for i in range(m.n):
        for j in range(i + 1, m.n):
            d = sum((abs(x - y) for x, y in zip(rows[i], rows[j])), _ZERO)
            if d > best:
                best = d
    return best


def is_undirected(m: StochasticMatrix) -> bool:
    return pattern_of(m).is_sign_symmetric()


def is_symmetric(m: StochasticMatrix) -> bool:
    e = m.entries
    return all(e[i][j] == e[j][i] for i in range(m.n) for j in range(i + 1, m.n))


def from_graph(g: Pattern) -> StochasticMatrix:
    """Scale each row of an adjacency pattern by 1 / out-degree.

    ``Pattern`` forbids empty rows, so raw row masks are accepted as well to
    give a meaningful :class:`SinkNode` error for graphs with sinks.
    """
    if isinstance(g, Pattern):
        n, rows = g.n, g.rows
    else:
        rows = tuple(g)
        n = len(rows)
    out = []
    for i, r in enumerate(rows):
        deg = r.bit_count()
        if deg == 0:
            raise SinkNode(i)
        w = Fraction(1, deg)
        members = set(iter_bits(r))
        out.append(tuple(w if j in members else _ZERO for j in range(n)))
    return validate(out)
