import pytest

from dropangle import generate_pseudo_data


@pytest.fixture(scope="session")
def pseudo_angles():
    """Angles of the default regenerated 296-point dataset."""
    return generate_pseudo_data().angles
