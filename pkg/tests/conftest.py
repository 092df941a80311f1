import numpy as np
import pytest

from cyclicsigma.curve import build_curve, random_curve
from cyclicsigma.sigma import sigma_for

# seeded test curves, one per family used throughout the suite
CURVES = {
    "g2": (2, 5, 1),
    "g3": (2, 7, 2),
    "g4": (2, 9, 4),
    "c34": (3, 4, 3),
}


def curve_for(name):
    if name == "ell":
        return build_curve(2, 3, [0, -1, 0])
    return random_curve(*CURVES[name])


@pytest.fixture(scope="session")
def curves():
    return {name: curve_for(name) for name in list(CURVES) + ["ell"]}


@pytest.fixture(scope="session")
def sigmas(curves):
    return {name: sigma_for(c) for name, c in curves.items()}


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)
