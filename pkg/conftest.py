import numpy as np
import pytest

from irreality.lib.qstate import CompositeSpace, singlet


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def qubits():
    return CompositeSpace.of(("A", 2), ("B", 2))


@pytest.fixture
def qutrits():
    return CompositeSpace.of(("A", 3), ("B", 3))


@pytest.fixture
def singlet_rho():
    return singlet().density()
