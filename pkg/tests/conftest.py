import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hardylip.curve import LipschitzGraph
from hardylip.conformal import sc_solve


@pytest.fixture(scope="session")
def flat():
    return LipschitzGraph(((0.0, 0.0),), 0.0, 0.0)


@pytest.fixture(scope="session")
def vee():
    return LipschitzGraph(((0.0, 0.0),), -1.0, 1.0)


@pytest.fixture(scope="session")
def threekink():
    return LipschitzGraph(((-1.0, 0.0), (0.0, 0.75), (1.0, 0.0)), -0.75, 0.75)


@pytest.fixture(scope="session")
def flat_map(flat):
    return sc_solve(flat)


@pytest.fixture(scope="session")
def vee_map(vee):
    return sc_solve(vee)


@pytest.fixture(scope="session")
def threekink_map(threekink):
    return sc_solve(threekink)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260810)
