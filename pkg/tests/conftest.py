from fractions import Fraction

import pytest
from hypothesis import strategies as st

from branchtrees import StaticCostPair, build_distribution

rationals = st.builds(Fraction, st.integers(0, 30), st.integers(1, 12))
positive = st.builds(Fraction, st.integers(1, 30), st.integers(1, 6))


@st.composite
def distributions(draw, min_n=1, max_n=8):
    ws = draw(st.lists(rationals, min_size=min_n, max_size=max_n))
    if sum(ws) == 0:
        ws[0] = Fraction(1)
    return build_distribution(ws)


@st.composite
def pairs(draw):
    return StaticCostPair(draw(positive), draw(positive))


@pytest.fixture
def binomial():
    return build_distribution([1, 6, 15, 20, 15, 6, 1])


@pytest.fixture
def skewed4():
    return build_distribution(["0.3", "0.2", "0.2", "0.3"])


@pytest.fixture
def uniform4():
    return build_distribution([1, 1, 1, 1])


# one PASS/FAIL line per acceptance criterion in the terminal summary
_acceptance: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and (report.when == "call" or report.failed):
        name = report.nodeid.split("::")[-1]
        if report.failed or name not in _acceptance:
            _acceptance[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        outcome = "PASS" if _acceptance[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{outcome}  {name}")
