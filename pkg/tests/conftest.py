import numpy as np
import pytest
from hypothesis import strategies as st

from dillscope.words import BINARY, EventuallyPeriodic, Word


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def binary_words(max_size=12):
    return st.lists(st.integers(0, 1), max_size=max_size).map(lambda xs: Word(xs, BINARY))


def periodic_words(max_transient=5, max_period=7):
    return st.builds(
        EventuallyPeriodic,
        binary_words(max_transient),
        st.lists(st.integers(0, 1), min_size=1, max_size=max_period).map(lambda xs: Word(xs, BINARY)),
    )


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion, taken from the ``acceptance`` property."""
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call":
                continue
            props = dict(rep.user_properties)
            if "acceptance" in props:
                number, text = props["acceptance"]
                lines.append((number, f"{'PASS' if outcome == 'passed' else 'FAIL'}  criterion {number:>2}  {text}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
