"""
conftest.py: shared fixtures for the test suite.
Run with: python -m pytest tests/
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Make `import staggered_chns` work without installing the package
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))


@pytest.fixture
def rng():
    """Seeded generator so every test run sees the same random fields."""
    return np.random.default_rng(20240601)
