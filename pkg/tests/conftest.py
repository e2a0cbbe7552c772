import pytest

from discrete_racah import GeneratorTable, ParameterSet

BETA3 = ("1/3", "5/3", "10/3")
BETA4 = ("1/3", "5/3", "10/3", "14/3")
BETA5 = ("1/3", "5/3", "10/3", "14/3", "37/6")


def params(n, N, beta=None):
    beta = beta or {3: BETA3, 4: BETA4, 5: BETA5}[n]
    return ParameterSet.from_literals(n, N, beta)


@pytest.fixture(scope="session")
def table_n3_N3():
    return GeneratorTable(params(3, 3))


@pytest.fixture(scope="session")
def table_n3_N5():
    return GeneratorTable(params(3, 5))


@pytest.fixture(scope="session")
def table_n4_N4():
    return GeneratorTable(params(4, 4))
