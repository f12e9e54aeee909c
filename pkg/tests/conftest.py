import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from dyntr.lsr1 import LSR1

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def diag_lsr1(d, rescale="first"):
    """LSR1 state that reproduces ``diag(d)`` from coordinate secant pairs."""
    n = len(d)
    H = LSR1(n, rescale=rescale)
    for i, di in enumerate(d):
        e = np.zeros(n)
        e[i] = 1.0
        H.update(e, di * e)
    return H


@pytest.fixture
def diag12():
    return diag_lsr1([1.0, 2.0])


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
