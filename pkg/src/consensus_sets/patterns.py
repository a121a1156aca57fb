"""Boolean sign patterns over the {0, 1} semiring with 1 + 1 = 1.

A pattern stores one Python int per row; bit ``j`` of row ``i`` is set when
entry ``(i, j)`` is nonzero. Python ints are unbounded, so the same code
covers single-word rows (n <= 64) and multi-word rows.

A pattern doubles as a directed graph on ``range(n)``: edge ``(i, j)`` is
present iff bit ``(i, j)`` is set.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import DimensionMismatch, InvalidPattern, NotSymmetricPattern


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(members: Iterable[int]) -> int:
    mask = 0
    for j in members:
        mask |= 1 << j
    return mask


def step_mask(mask: int, rows: Sequence[int]) -> int:
    """Union of the rows selected by ``mask``."""
    out = 0
    while mask:
        low = mask & -mask
        out |= rows[low.bit_length() - 1]
        mask ^= low
    return out


def mul_rows(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """Boolean product on raw row tuples (no validation)."""
    return tuple(step_mask(r, b) for r in a)


def rows_scrambling(rows: Sequence[int]) -> bool:
    n = len(rows)
    for i in range(n):
        ri = rows[i]
        for j in range(i + 1, n):
            if not ri & rows[j]:
                return False
    return True


@dataclass(frozen=True)
class Support:
    """A subset of ``range(n)`` stored as a bit mask."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise InvalidPattern(f"dimension must be positive, got {self.n}")
        if self.bits < 0 or self.bits >> self.n:
            raise InvalidPattern(f"support {self.bits:b} exceeds dimension {self.n}")

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> "Support":
        members = list(members)
        if any(j < 0 or j >= n for j in members):
            raise InvalidPattern(f"support members {members} outside range({n})")
        return cls(n, mask_of(members))

    @property
    def members(self) -> frozenset[int]:
        return frozenset(iter_bits(self.bits))

    def __len__(self):
        return self.bits.bit_count()

    def __bool__(self):
        return self.bits != 0

    def isdisjoint(self, other: "Support") -> bool:
        return not self.bits & other.bits

    def __repr__(self):
        return f"Support({sorted(self.members)})"


@dataclass(frozen=True)
class Pattern:
    """An ``n x n`` sign pattern whose rows are all nonempty."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidPattern(f"dimension must be positive, got {self.n}")
        if len(self.rows) != self.n:
            raise InvalidPattern(f"expected {self.n} rows, got {len(self.rows)}")
        for i, r in enumerate(self.rows):
            if r <= 0:
                raise InvalidPattern(f"row {i} is empty")
            if r >> self.n:
                raise InvalidPattern(f"row {i} has a bit beyond column {self.n - 1}")

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[object]]) -> "Pattern":
        """Build from a dense 0/1 (or any truthy/falsy) nested sequence."""
        n = len(matrix)
        rows = []
        for i, row in enumerate(matrix):
            if len(row) != n:
                raise InvalidPattern(f"row {i} has length {len(row)}, expected {n}")
            rows.append(mask_of(j for j, v in enumerate(row) if v))
        return cls(n, tuple(rows))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Pattern":
        rows = [0] * n
        for i, j in edges:
            rows[i] |= 1 << j
        return cls(n, tuple(rows))

    @classmethod
    def identity(cls, n: int) -> "Pattern":
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def ones(cls, n: int) -> "Pattern":
        full = (1 << n) - 1
        return cls(n, (full,) * n)

    def row_support(self, i: int) -> Support:
        return Support(self.n, self.rows[i])

    def __getitem__(self, ij: tuple[int, int]) -> bool:
        i, j = ij
        return bool(self.rows[i] >> j & 1)

    def to_matrix(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i, r in enumerate(self.rows) for j in iter_bits(r)]

    def transpose(self) -> "Pattern":
        cols = [0] * self.n
        for i, r in enumerate(self.rows):
            for j in iter_bits(r):
                cols[j] |= 1 << i
        return Pattern(self.n, tuple(cols))

    def is_sign_symmetric(self) -> bool:
        return self.transpose() == self

    def permute(self, perm: Sequence[int]) -> "Pattern":
        """Relabel node ``i`` as ``perm[i]``."""
        rows = [0] * self.n
        for i, r in enumerate(self.rows):
            rows[perm[i]] = mask_of(perm[j] for j in iter_bits(r))
        return Pattern(self.n, tuple(rows))

    def __matmul__(self, other: "Pattern") -> "Pattern":
        return pattern_mul(self, other)

    def __str__(self):
        return "\n".join("".join(str(b) for b in row) for row in self.to_matrix())


def pattern_mul(a: Pattern, b: Pattern) -> Pattern:
    if a.n != b.n:
        raise DimensionMismatch(f"cannot multiply {a.n}x{a.n} by {b.n}x{b.n}")
    return Pattern(a.n, mul_rows(a.rows, b.rows))


def pattern_product(patterns: Sequence[Pattern]) -> Pattern:
    """Left-to-right product ``p_1 p_2 ... p_t`` of a nonempty sequence."""
    if not patterns:
        raise ValueError("empty product has no dimension")
    out = patterns[0]
    for p in patterns[1:]:
        out = pattern_mul(out, p)
    return out


def is_scrambling(p: Pattern) -> bool:
    return rows_scrambling(p.rows)


def has_positive_column(p: Pattern) -> bool:
    common = (1 << p.n) - 1
    for r in p.rows:
        common &= r
    return common != 0


def support_step(s: Support, p: Pattern) -> Support:
    """Support of ``x^T P`` given the support of ``x``."""
    if s.n != p.n:
        raise DimensionMismatch(f"support of dimension {s.n} vs pattern of dimension {p.n}")
    return Support(p.n, step_mask(s.bits, p.rows))


def _require_symmetric(p: Pattern):
    if not p.is_sign_symmetric():
        raise NotSymmetricPattern("pattern is not sign-symmetric")


def is_connected_undirected(p: Pattern) -> bool:
    _require_symmetric(p)
    seen = 1
    frontier = 1
    while frontier:
        frontier = step_mask(frontier, p.rows) & ~seen
        seen |= frontier
    return seen == (1 << p.n) - 1


def is_bipartite_undirected(p: Pattern) -> bool:
    _require_symmetric(p)
    color = [-1] * p.n
    for start in range(p.n):
        if color[start] >= 0:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in iter_bits(p.rows[u]):
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    # also catches self-loops (v == u)
                    return False
    return True
