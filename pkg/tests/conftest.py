"""Shared fixtures, plus a summary block listing each acceptance criterion."""

import pytest

from tunnelbound import make_profile

_ACCEPTANCE: list[tuple[str, str]] = []


@pytest.fixture
def square():
    return make_profile("square", {"V0": 1.0, "L": 1.0})


@pytest.fixture
def sech2():
    return make_profile("sech2", {"V0": 1.0, "a": 1.0})


@pytest.fixture
def zero():
    return make_profile("zero")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call" and item.module.__name__.endswith("test_acceptance"):
        title = (item.function.__doc__ or item.name).strip().splitlines()[0]
        _ACCEPTANCE.append((title, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for title, status in _ACCEPTANCE:
        terminalreporter.write_line(f"[{status}] {title}")
