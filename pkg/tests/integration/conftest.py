"""Houses the fixtures for the end-to-end demo runs"""

import pytest
from app import TestConfig


@pytest.fixture
def test_config():
    """Returns a test configuration with consistency checks switched on"""
    return TestConfig()
