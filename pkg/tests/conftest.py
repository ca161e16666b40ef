from __future__ import annotations

from pathlib import Path

import pytest

from metaselect.aslib import load_scenario
from metaselect.synthetic import SyntheticConfig, generate_synthetic

REPO_ROOT = Path(__file__).resolve().parents[1]
TOY_DIR = REPO_ROOT / "fixtures" / "toy"
TOY_TINY_DIR = REPO_ROOT / "fixtures" / "toy_tiny"


@pytest.fixture(scope="session")
def toy():
    return load_scenario(TOY_DIR)


@pytest.fixture(scope="session")
def toy_tiny():
    return load_scenario(TOY_TINY_DIR)


@pytest.fixture
def make_synthetic():
    """Factory for small synthetic scenarios; kwargs override defaults."""

    def _make(**kwargs):
        return generate_synthetic(SyntheticConfig(**kwargs))

    return _make
