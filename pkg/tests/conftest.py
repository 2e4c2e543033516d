import pytest

_acceptance_results = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and "test_acceptance" in item.nodeid:
        _acceptance_results.append((item.name, rep.passed))


def pytest_terminal_summary(terminalreporter):
    if _acceptance_results:
        terminalreporter.write_sep("-", "acceptance criteria")
        for name, passed in _acceptance_results:
            terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}")
