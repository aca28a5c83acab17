import warnings

import pytest

from mmprop.core import ApplicabilityWarning


@pytest.fixture
def quiet():
    """Silence applicability warnings for out-of-range probes."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ApplicabilityWarning)
        yield


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
