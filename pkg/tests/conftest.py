import pytest

from gendescent.verify import group


@pytest.fixture(scope="session")
def grp():
    """Session-cached group builder: grp("F4")."""
    return group


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = sorted(getattr(mod, "SUMMARY", []))
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
