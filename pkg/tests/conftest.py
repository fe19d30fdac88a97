import pytest

from gasketpile import sandpile


@pytest.fixture(autouse=True, scope="session")
def conservation_checking():
    """Re-verify the exchange identity result = start - Laplacian @ odometer
    on every stabilization performed anywhere in the suite."""
    sandpile.CHECK_CONSERVATION = True
    yield
    sandpile.CHECK_CONSERVATION = False
