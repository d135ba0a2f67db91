import numpy as np
import pytest

from ffsets import field_from_q

STANDARD_QS = [2, 3, 4, 5, 8, 9]


@pytest.fixture(scope="session")
def standard_fields():
    return [field_from_q(q) for q in STANDARD_QS]


@pytest.fixture()
def rng():
    return np.random.default_rng(20240917)
