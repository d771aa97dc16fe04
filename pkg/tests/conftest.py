import pytest

# (criterion number, verdict, detail) recorded by test_acceptance
ACCEPTANCE_RESULTS: list[tuple[int, str, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n, verdict, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"criterion {n:2d}: {verdict}  {detail}")


@pytest.fixture
def acceptance_results():
    return ACCEPTANCE_RESULTS
