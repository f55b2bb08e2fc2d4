import pytest

ACCEPTANCE = {}


@pytest.fixture
def acceptance(request, capsys):
    """Record one pass/fail line for an acceptance criterion."""

    def report(number, title, passed, detail=""):
        line = f"[criterion {number}] {'PASS' if passed else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
        ACCEPTANCE[number] = line
        with capsys.disabled():
            print("\n" + line)
        return passed

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
