import pytest

from oddsforecast.numerics import RngStream


@pytest.fixture
def rng():
    return RngStream(20240611)
