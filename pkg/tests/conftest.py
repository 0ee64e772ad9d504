import pytest

from helpers import make_panel

# (criterion, passed, detail) rows collected by test_acceptance.py
ACCEPTANCE_RESULTS = []


@pytest.fixture
def panel_factory():
    return make_panel


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
