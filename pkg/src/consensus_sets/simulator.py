"""Trajectories of x(t+1) = P_{tau(t)} x(t) and related row-difference diagnostics."""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DimensionMismatch, ResourceCapExceeded
from .patterns import iter_bits, step_mask
from .stochastic import StochasticMatrix, delta, pattern_of, validate

DEFAULT_BIT_CAP = 1 << 20


@dataclass(frozen=True)
class SwitchingWord:
    """``prefix`` followed by ``cycle`` repeated forever (if a cycle is given)."""

    prefix: tuple[int, ...] = ()
    cycle: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        if self.cycle is not None:
            object.__setattr__(self, "cycle", tuple(self.cycle))
            if not self.cycle:
                raise ValueError("cycle must be nonempty when given")

    def __call__(self, t: int) -> int:
        if t < len(self.prefix):
            return self.prefix[t]
        if self.cycle is None:
            raise IndexError(f"switching word is undefined at t={t}")
        return self.cycle[(t - len(self.prefix)) % len(self.cycle)]

    def letters(self) -> tuple[int, ...]:
        return self.prefix + (self.cycle or ())

    def check_range(self, k: int):
        bad = [m for m in self.letters() if not 0 <= m < k]
        if bad:
            raise ValueError(f"matrix indices {bad} outside 0..{k - 1}")

    @classmethod
    def random(cls, k: int, length: int, seed: int) -> "SwitchingWord":
        rng = random.Random(seed)
        return cls(tuple(rng.randrange(k) for _ in range(length)))


Word = Union[SwitchingWord, Callable[[int], int]]


@dataclass
class Trajectory:
    states: list[np.ndarray] = field(default_factory=list)
    disagreement: list[float] = field(default_factory=list)

    def steps_to(self, threshold: float) -> int | None:
        for t, d in enumerate(self.disagreement):
            if d < threshold:
                return t
        return None

    def to_csv(self) -> str:
        """Columns: t, x_0 .. x_{n-1}, disagreement."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        n = len(self.states[0]) if self.states else 0
        w.writerow(["t", *[f"x_{i}" for i in range(n)], "disagreement"])
        for t, (x, d) in enumerate(zip(self.states, self.disagreement)):
            w.writerow([t, *[repr(float(v)) for v in x], repr(float(d))])
        return buf.getvalue()


def _as_matrices(matrices) -> list[StochasticMatrix]:
    mats = [m if isinstance(m, StochasticMatrix) else validate(m) for m in matrices]
    if not mats:
        raise ValueError("no matrices")
    n = mats[0].n
    if any(m.n != n for m in mats):
        raise DimensionMismatch("matrices have different dimensions")
    return mats


def _letter(word: Word, t: int, k: int) -> int:
    m = word(t)
    if not 0 <= m < k:
        raise ValueError(f"switching index {m} at t={t} outside 0..{k - 1}")
    return m


def simulate(matrices, word: Word, x0: Sequence[float], steps: int) -> Trajectory:
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    mats = _as_matrices(matrices)
    floats = [m.to_float() for m in mats]
    x = np.asarray([float(v) for v in x0], dtype=float)
    if x.shape != (mats[0].n,):
        raise DimensionMismatch(f"x0 has length {x.shape[0]}, expected {mats[0].n}")
    traj = Trajectory([x.copy()], [float(x.max() - x.min())])
    for t in range(steps):
        x = floats[_letter(word, t, len(mats))] @ x
        traj.states.append(x.copy())
        traj.disagreement.append(float(x.max() - x.min()))
    return traj


def _check_bits(values: Sequence[Fraction], cap: int):
    bits = sum(v.numerator.bit_length() + v.denominator.bit_length() for v in values)
    if bits > cap:
        raise ResourceCapExceeded(f"rational state uses {bits} bits, cap is {cap}")


def row_difference_trajectory(
    matrices, word: Word, i: int, j: int, steps: int, exact: bool = True, bit_cap: int = DEFAULT_BIT_CAP
) -> list:
    """L1 norms of ``(e_i - e_j)^T P_{tau(1)} ... P_{tau(t)}`` for t = 0..steps."""
    if i == j:
        raise ValueError("row indices must differ")
    mats = _as_matrices(matrices)
    n = mats[0].n
    if not (0 <= i < n and 0 <= j < n):
        raise ValueError(f"rows ({i}, {j}) outside 0..{n - 1}")
    if exact:
        v = [Fraction(0)] * n
        v[i], v[j] = Fraction(1), Fraction(-1)
        out = [sum(map(abs, v), Fraction(0))]
        for t in range(steps):
            e = mats[_letter(word, t, len(mats))].entries
            v = [sum((v[r] * e[r][c] for r in range(n) if v[r]), Fraction(0)) for c in range(n)]
            _check_bits(v, bit_cap)
            out.append(sum(map(abs, v), Fraction(0)))
        return out
    floats = [m.to_float() for m in mats]
    v = np.zeros(n)
    v[i], v[j] = 1.0, -1.0
    out = [float(np.abs(v).sum())]
    for t in range(steps):
        v = v @ floats[_letter(word, t, len(mats))]
        out.append(float(np.abs(v).sum()))
    return out


def product_delta_trajectory(
    matrices, word: Word, steps: int, exact: bool = True, bit_cap: int = DEFAULT_BIT_CAP
) -> list:
    """delta of the left products P_{tau(t)} ... P_{tau(1)} for t = 1..steps."""
    mats = _as_matrices(matrices)
    k = len(mats)
    out = []
    if exact:
        prod = None
        for t in range(steps):
            m = mats[_letter(word, t, k)]
            prod = m if prod is None else m @ prod
            _check_bits([x for row in prod.entries for x in row], bit_cap)
            out.append(delta(prod))
        return out
    floats = [m.to_float() for m in mats]
    prod = None
    for t in range(steps):
        m = floats[_letter(word, t, k)]
        prod = m if prod is None else m @ prod
        diffs = np.abs(prod[:, None, :] - prod[None, :, :]).sum(axis=2)
        out.append(float(diffs.max()))
    return out


def witness_state_word(matrices, witness) -> tuple[SwitchingWord, list[Fraction], tuple[int, int]]:
    """State-space counterpart of a right-product witness.

    A witness describes rows of ``P_{w_1} P_{w_2} ...``, whereas states evolve
    by left multiplication, so the state word runs the cycle backwards. With
    ``C`` the cycle product and ``(S1, S2)`` the supports at the cycle start,
    rows ``a in S1`` and ``b in S2`` of ``C**q`` stay disjoint for every ``q``.
    Starting from the indicator of ``S1`` pins ``x_a = 1`` and ``x_b = 0`` at
    every multiple of the cycle length.

    Returns the word, the initial state and the pinned pair ``(a, b)``.
    """
    mats = _as_matrices(matrices)
    rows = [pattern_of(m).rows for m in mats]
    i, j = witness.row_pair
    s1, s2 = 1 << i, 1 << j
    for m in witness.prefix:
        s1, s2 = step_mask(s1, rows[m]), step_mask(s2, rows[m])
    x0 = [Fraction(1) if s1 >> c & 1 else Fraction(0) for c in range(mats[0].n)]
    a = next(iter_bits(s1))
    b = next(iter_bits(s2))
    return SwitchingWord((), tuple(reversed(witness.cycle))), x0, (a, b)
