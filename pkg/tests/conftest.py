import cmath
import random

import numpy as np
import pytest

from su21.linalg import FLOAT, Matrix
from su21.numberfield import NumberField, cyclotomic_field, multiquadratic_field


@pytest.fixture(scope="session")
def qi():
    return NumberField([1, 0, 1])


@pytest.fixture(scope="session")
def q_i_sqrt3():
    return NumberField([3, 0, 1], 1.7j)


@pytest.fixture(scope="session")
def zeta12():
    return cyclotomic_field(12)


@pytest.fixture(scope="session")
def q_i_sqrt15():
    return multiquadratic_field([-1, 15])


def random_su21(rng: random.Random) -> Matrix:
    """A random element of SU(J) in float mode: product of standard pieces."""
    from su21.isometry import loxodromic_lift, standard_parabolic
    from su21.hermitian import siegel_matrix

    J = siegel_matrix(mode=FLOAT)
    M = Matrix.identity(3, mode=FLOAT)
    for _ in range(3):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        P = standard_parabolic(rng.uniform(0, 6), z, rng.uniform(-2, 2))
        lam = cmath.rect(rng.uniform(0.5, 2), rng.uniform(0, 6))
        M = M @ P @ loxodromic_lift(lam) @ J
    # det J = -1 three times; fix the sign
    return M.scale(-1)


@pytest.fixture
def rng():
    return random.Random(20261015)


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: int(k[2:])):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"{key} {'PASS' if ok else 'FAIL'}: {detail}")
