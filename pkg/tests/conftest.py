import pytest

_ACCEPTANCE = []


@pytest.fixture
def acceptance_line():
    """Record the final pass/fail line for an acceptance criterion."""
    def record(number: int, passed: bool, text: str):
        _ACCEPTANCE.append((number, passed, text))
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, text in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {text}")
