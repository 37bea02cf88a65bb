from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance_results: list[tuple[str, str]] = []


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and "test_acceptance.py" in str(item.fspath):
        _acceptance_results.append((item.name, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for name, verdict in _acceptance_results:
        terminalreporter.write_line(f"{verdict}  {name}")
