import pytest

from ehrelay.params import default_params


@pytest.fixture
def p_ref():
    """Reference parameter set (46 dBm source, 20 dBm relay, 60 dB
    threshold, -70/-100 dBm noise floors)."""
    return default_params()
