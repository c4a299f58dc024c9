import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from sibi.params import SystemParams

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=25, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def sibi():
    return SystemParams.si_bi()


@pytest.fixture(scope="session")
def sip():
    return SystemParams.si_p()


def system_params():
    """Physically sensible donors: spin I = I2/2 up to 9/2, A from 0.05 to 5 GHz."""
    return st.builds(
        SystemParams,
        A=st.floats(0.05, 5.0),
        delta=st.floats(0.0, 1e-3),
        I2=st.integers(1, 9),
        gamma_e=st.floats(20.0, 35.0),
    )


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
