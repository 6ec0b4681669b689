import pytest

from fock_toeplitz import ExponentialSymbol


@pytest.fixture
def S():
    return ExponentialSymbol
