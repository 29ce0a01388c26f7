import numpy as np
import pytest

from ssimmark import data


@pytest.fixture(scope="session")
def pair():
    """(asset, watermark) 512x512 standard pair."""
    return data.standard_pair()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    for name, value in report.user_properties:
        if name == "criterion":
            _ACCEPTANCE.append((value, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {label}")
