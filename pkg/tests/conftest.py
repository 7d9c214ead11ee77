import pytest

from testutil import DATA_DIR


@pytest.fixture
def mftc_fixture_path():
    return DATA_DIR / "mftc_fixture.json"


@pytest.fixture
def mfrc_fixture_path():
    return DATA_DIR / "mfrc_fixture.csv"
