import pytest

from protoseq import construct_si


@pytest.fixture
def example_set():
    """The worked three-user set with duty factors 2/3, 1/3, 1/3."""
    return construct_si(["2/3", "1/3", "1/3"])
