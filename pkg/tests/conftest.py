import pytest

_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion; printed in the summary."""

    def record(number, ok, detail):
        _ACCEPTANCE[number] = (bool(ok), detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
