import numpy as np
import pytest

from prefmax import get_fixture


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def vee():
    return get_fixture("vee-peak")


@pytest.fixture
def kinked():
    return get_fixture("kinked-threshold")


@pytest.fixture
def favored():
    return get_fixture("favored-one")


@pytest.fixture
def band():
    return get_fixture("band-threshold")


@pytest.fixture
def halfline():
    return get_fixture("halfline-plane")


@pytest.fixture
def segment():
    return get_fixture("segment-line")


@pytest.fixture
def radial():
    return get_fixture("radial-bowl")
