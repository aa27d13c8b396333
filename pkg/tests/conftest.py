import pytest

_LINES: list[str] = []


@pytest.fixture
def report_criterion(capsys):
    """Print and remember one PASS/FAIL line."""
    def report(k: int, ok: bool, text: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {text}"
        _LINES.append(line)
        with capsys.disabled():
            print("\n" + line)
    return report


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
