import pytest

_criteria: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion and return the verdict."""

    def record(number: int, title: str, ok: bool, detail: str) -> bool:
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        _criteria[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _criteria:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_criteria):
            terminalreporter.write_line(_criteria[n])
