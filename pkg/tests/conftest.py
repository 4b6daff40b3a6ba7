import pytest

from zerorepulsion.certificates import verify_all


@pytest.fixture(scope="session")
def all_certificates():
    return {c.name: c for c in verify_all()}


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_line():
    def record(number: int, ok: bool, note: str) -> None:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {note}"
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
