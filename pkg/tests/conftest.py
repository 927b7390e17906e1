import pytest

from lucaszeta.lucas_core import geomsum_params, validate_params


@pytest.fixture(scope="session")
def fib():
    return validate_params(1, -1)


@pytest.fixture(scope="session")
def pell():
    return validate_params(2, -1)


@pytest.fixture(scope="session")
def jac():
    return validate_params(1, -2)


@pytest.fixture(scope="session")
def geo2():
    # partial sums of powers of 2: (P, Q) = (3, 2)
    return geomsum_params(2.0)


@pytest.fixture(scope="session")
def four_sequences(fib, pell, jac, geo2):
    return {"fibonacci": fib, "pell": pell, "jacobsthal": jac, "geomsum2": geo2}
