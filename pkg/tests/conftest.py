import math

import numpy as np
import pytest

from ecsplane.construct import build_dilational, build_translational, dilational_spec, theta_from_charpoly
from ecsplane.isometry import validate_sigma

# one line per acceptance criterion, printed in the terminal summary
ACCEPTANCE_LINES = []

Q3 = (3 + math.sqrt(5)) / 2


def record_acceptance(number, passed, detail):
    ACCEPTANCE_LINES.append((number, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def dil_spec():
    spec, C, _, _ = dilational_spec(5, Q3)
    return spec


@pytest.fixture(scope="session")
def dil_sigma(dil_spec):
    return validate_sigma(dil_spec, Q3, 0.0, np.diag([Q3, 1.0, 1.0 / Q3]))


@pytest.fixture(scope="session")
def dil_cert():
    return build_dilational(5, 3)


@pytest.fixture(scope="session")
def theta3():
    return theta_from_charpoly((-1, 5, -6, 1))


@pytest.fixture(scope="session")
def tr_cert(theta3):
    return build_translational(5, theta3, seed_amp=0.3, period=1.0, theta=1.0)


@pytest.fixture(scope="session")
def tr_spec(tr_cert):
    return tr_cert.spec
