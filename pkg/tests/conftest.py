import random

import pytest

# criterion number -> summary line, filled in by test_acceptance
ACCEPTANCE: dict = {}


@pytest.fixture
def rng():
    return random.Random(20261015)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
