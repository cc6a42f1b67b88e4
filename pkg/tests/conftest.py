import pytest

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance_line():
    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES[number] = line
        print(line)
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
