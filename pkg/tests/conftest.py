import math

import numpy as np
import pytest

from samqubits import SystemParams
from samqubits.errors import ResolutionError
from samqubits.dynamics import check_resolvable

# Independent copies of the CODATA 2018 values for the oracles below.
MU_B = 9.2740100783e-24
G_E = 2.00231930436
H = 6.62607015e-34
HBAR = H / (2 * math.pi)
MU0_4PI = 1e-7


def random_params(rng, resolvable=False):
    while True:
        p = dict(
            b0=rng.uniform(0.01, 10.0),
            gradient_g=rng.uniform(0.0, 1e6) if rng.random() > 0.05 else 0.0,
            separation_a=rng.uniform(0.5e-9, 5e-9),
            g_zz=rng.uniform(1.95, 2.05),
            coupling_d=2 * math.pi * rng.uniform(0.0, 500e6) if rng.random() > 0.05 else 0.0,
        )
        params = SystemParams(**p)
        if not resolvable:
            return params
        try:
            check_resolvable(params)
        except ResolutionError:
            continue
        return params


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


@pytest.fixture
def default_params():
    # 0.35 T, 1e5 T/m, 1 nm, g_e, D/2pi = 52.04 MHz
    return SystemParams(
        b0=0.35,
        gradient_g=1e5,
        separation_a=1e-9,
        g_zz=G_E,
        coupling_d=2 * math.pi * 52.041015964372946e6,
    )


def random_state(rng):
    amps = rng.normal(size=4) + 1j * rng.normal(size=4)
    return amps / np.linalg.norm(amps)


ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(line[1])
