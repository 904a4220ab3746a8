import pytest

from scorebo.problems import make_synthetic_datasheet


@pytest.fixture(scope="session")
def datasheet():
    """Frozen synthetic IV targets generated from the default ground truth."""
    return make_synthetic_datasheet()
