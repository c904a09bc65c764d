import contextlib

import pytest

_CRITERIA: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance criterion as PASS or FAIL for the summary."""

    @contextlib.contextmanager
    def record(label: str):
        try:
            yield
        except BaseException as exc:
            _CRITERIA.append((label, False, type(exc).__name__))
            raise
        _CRITERIA.append((label, True, ""))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, why in _CRITERIA:
        line = f"{'PASS' if ok else 'FAIL'}  {label}"
        if why:
            line += f"  ({why})"
        terminalreporter.write_line(line)
