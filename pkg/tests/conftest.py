import pytest

from linkopt import fixtures
from linkopt.engine import RankingContext

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = {}


@pytest.fixture
def ctx_for():
    def make(g, c=0.85):
        return RankingContext.uniform(g.n, c)
    return make


@pytest.fixture(scope="session")
def fx():
    return fixtures


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
