import pytest

_LINES = []


class AcceptanceLog:
    """Collects one PASS/FAIL line per acceptance check."""

    def check(self, criterion, label, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {label}"
        if detail:
            line += f" ({detail})"
        _LINES.append(line)
        print(line)
        return bool(ok)


@pytest.fixture(scope="session")
def acceptance():
    return AcceptanceLog()


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _LINES:
        terminalreporter.write_line(line)
