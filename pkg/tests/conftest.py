import sys

import pytest

from proxspec import fields, halfline


def pytest_terminal_summary(terminalreporter):
    """Reprint the acceptance scoreboard (pass lines are otherwise captured)."""
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance scoreboard")
        for line in sorted(verdicts):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def constants():
    """Universal constants of the Robin half-line family, computed once."""
    return halfline.universal_constants()


@pytest.fixture(scope="session")
def alpha_cache():
    """Memoized alpha(a, m): the root solves are the slowest shared step."""
    memo = {}

    def get(a, m):
        key = (float(a), float(m))
        if key not in memo:
            memo[key] = fields.alpha_of(*key)
        return memo[key]

    return get
