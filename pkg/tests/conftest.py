"""
Shared fixtures for localqst tests
"""

import pytest

from localqst.core import Topology
from localqst.dataset import SamplingSpec, generate_dataset
from localqst.log import configure_logging


@pytest.fixture(autouse=True)
def _reset_logging():
    """Undo any logging configuration a CLI test installed"""
    yield
    configure_logging()


@pytest.fixture
def full2():
    return Topology.full(2)


@pytest.fixture
def full3():
    return Topology.full(3)


@pytest.fixture
def full4():
    return Topology.full(4)


@pytest.fixture
def chain3():
    return Topology.chain(3)


@pytest.fixture
def ring3():
    return Topology.ti_ring(3)


@pytest.fixture(scope="session")
def small_dataset():
    """60 records on the 2-qubit full graph"""
    return generate_dataset(SamplingSpec(topology=Topology.full(2)), 60, master_seed=11)


@pytest.fixture(scope="session")
def small_test_dataset():
    return generate_dataset(SamplingSpec(topology=Topology.full(2)), 20, master_seed=12)

