import pytest

from collatz_abc.factorize import get_factorizer

# One seed for every randomized self-check in the suite.
RNG_SEED = 20260808


@pytest.fixture(scope="session")
def factorizer():
    """Shared default-bound factorizer (prime list built once)."""
    return get_factorizer(10**6)
