import pytest

from floqpol import FieldConfig, builtin_model, two_level_model


@pytest.fixture
def two_level():
    return two_level_model(1.0, 1.0)


@pytest.fixture
def three_level():
    return builtin_model("three_level")


@pytest.fixture
def default_field():
    """The off-resonant reference drive used throughout the tests."""
    return FieldConfig(0.05, 0.9)


# filled by tests/test_acceptance.py, echoed after the run so the lines survive capture
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
