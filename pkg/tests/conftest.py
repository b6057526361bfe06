import pytest

from sparselab import construct


@pytest.fixture(scope="session")
def inst9():
    # gamma exceeds n+1-sqrt(n) for every admissible size, so the smallest
    # instance (N=3) already carries the full structure.
    return construct(1.0)


@pytest.fixture(scope="session")
def inst25():
    return construct(4.0)
