import pytest

from quantcurve.curvespec import load_curve
from quantcurve.verify import engine_for


@pytest.fixture(scope="session")
def airy_spec():
    return load_curve("airy")


@pytest.fixture(scope="session")
def catalan_spec():
    return load_curve("catalan")


@pytest.fixture(scope="session")
def gauss_spec():
    return load_curve("gauss")


@pytest.fixture(scope="session")
def airy_engine(airy_spec):
    return engine_for(airy_spec)


@pytest.fixture(scope="session")
def catalan_engine(catalan_spec):
    return engine_for(catalan_spec)
