import pytest

from defensibility import ThreatModel, load_builtin


@pytest.fixture(scope="session")
def property_losses():
    return load_builtin("property_losses")


@pytest.fixture(scope="session")
def air_departures():
    return load_builtin("air_departures")


@pytest.fixture(scope="session")
def air_population():
    return load_builtin("air_departures", attacker_values="population")


@pytest.fixture(scope="session")
def negative_skew():
    return load_builtin("negative_skew")


@pytest.fixture(scope="session")
def optimal():
    return ThreatModel.optimal()


@pytest.fixture(scope="session")
def random_threat():
    return ThreatModel.uniform_random()


@pytest.fixture(scope="session")
def different():
    return ThreatModel.different_value()
