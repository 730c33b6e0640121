"""Shared fixtures for the SternbergKit test suite"""

import pytest

from sternbergkit import SternbergKit


@pytest.fixture
def kit() -> SternbergKit:
    return SternbergKit()
