import pytest

from app.atoms import recoil_frequency
from app.models.species import RUBIDIUM_87
from app.presets import get_preset


@pytest.fixture
def rb87():
    return RUBIDIUM_87


@pytest.fixture
def wr(rb87):
    return recoil_frequency(rb87)


@pytest.fixture
def typical_config(rb87):
    """r0 = 1.5 mm, T_perp = 5 uK, t0 = 20 ms, T = 50 ms, w = 6 mm."""
    return get_preset("typical", rb87)


@pytest.fixture
def bec_config(rb87):
    return get_preset("bec", rb87)
