import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from quatholo.qcore import Quaternion, Scalar

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.builds(Scalar, rationals, rationals)
rational_scalars = st.builds(Scalar, rationals)
quaternions = st.builds(Quaternion, scalars, scalars, scalars, scalars)
rational_quaternions = st.builds(Quaternion, rationals, rationals, rationals, rationals)
imaginary_quaternions = st.builds(lambda x, y, z: Quaternion(0, x, y, z), rationals, rationals, rationals)


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    module = __import__("sys").modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
