import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from consensus_sets.patterns import Pattern
from consensus_sets.stochastic import validate

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).resolve().parent.parent / "src" / "consensus_sets" / "data"


@st.composite
def patterns(draw, n=None, max_n=5):
    if n is None:
        n = draw(st.integers(1, max_n))
    rows = tuple(draw(st.integers(1, (1 << n) - 1)) for _ in range(n))
    return Pattern(n, rows)


@st.composite
def pattern_sets(draw, max_n=4, max_k=3):
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, max_k))
    return [draw(patterns(n=n)) for _ in range(k)]


@st.composite
def stochastic_matrices(draw, n=None, max_n=4, max_den=6):
    """Row-stochastic matrices with small random rational weights on a random pattern."""
    if n is None:
        n = draw(st.integers(1, max_n))
    rows = []
    for _ in range(n):
        mask = draw(st.integers(1, (1 << n) - 1))
        weights = [draw(st.integers(1, max_den)) if mask >> j & 1 else 0 for j in range(n)]
        total = sum(weights)
        rows.append([Fraction(w, total) for w in weights])
    return validate(rows)


def random_pattern(rng: random.Random, n: int) -> Pattern:
    return Pattern(n, tuple(rng.randint(1, (1 << n) - 1) for _ in range(n)))


def random_stochastic(rng: random.Random, n: int, max_den: int = 5):
    rows = []
    for _ in range(n):
        mask = rng.randint(1, (1 << n) - 1)
        weights = [rng.randint(1, max_den) if mask >> j & 1 else 0 for j in range(n)]
        total = sum(weights)
        rows.append([Fraction(w, total) for w in weights])
    return validate(rows)


@pytest.fixture
def data_dir():
    return DATA


_ACCEPTANCE: dict[int, tuple[str, str, float]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "PASS" if report.outcome == "passed" else "FAIL"
        _ACCEPTANCE[number] = (status, title, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        status, title, seconds = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {status}  {title}  ({seconds:.2f}s)")
