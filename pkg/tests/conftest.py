import pytest

from quasilee.field import FieldParams
from quasilee.reproduce import q25_field


@pytest.fixture(scope="session")
def f17():
    return FieldParams.create(17)


@pytest.fixture(scope="session")
def f25():
    return q25_field()


@pytest.fixture(scope="session")
def f49():
    return FieldParams.create(7, 2)
