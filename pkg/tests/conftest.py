import pytest
from hypothesis import HealthCheck, settings

from system import catalog
from system.vectorfield import radial_coefficients

settings.register_profile("repro", derandomize=True, deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repro")


@pytest.fixture(scope="session")
def ex1():
    return radial_coefficients(catalog.example1())


@pytest.fixture(scope="session")
def ex2():
    return radial_coefficients(catalog.example2())


@pytest.fixture(scope="session")
def sharp_abel():
    return radial_coefficients(catalog.sharp_abel())


@pytest.fixture(scope="session")
def sharp_polar():
    return radial_coefficients(catalog.sharp_polar())


@pytest.fixture(scope="session")
def saddle():
    return radial_coefficients(catalog.saddle())
