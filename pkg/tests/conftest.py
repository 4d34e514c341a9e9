import pytest

from elldilog.curves import curve_37a
from elldilog.divisors import MWCoordinates


@pytest.fixture(scope="session")
def C37():
    return curve_37a()


@pytest.fixture(scope="session")
def G37(C37):
    return C37.point(0, 0)


@pytest.fixture(scope="session")
def L37(C37):
    from elldilog.analytic import periods
    return periods(C37)


@pytest.fixture(scope="session")
def coords37(C37, G37):
    return MWCoordinates.rank_one(C37, G37, range(-13, 14))


@pytest.fixture(scope="session")
def table_1e7(C37):
    """Full coefficient table up to 10^7; built once per session (~30 s)."""
    from elldilog.lseries import an_table
    return an_table(C37, 10 ** 7)


@pytest.fixture(scope="session")
def table_2k(C37):
    from elldilog.lseries import an_table
    return an_table(C37, 2000)
