from pathlib import Path

import numpy as np
import pytest

from src.data.data_loader import GolayDataLoader

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "data" / "input"


@pytest.fixture
def fixtures_dir():
    return FIXTURES_DIR


@pytest.fixture
def loader():
    return GolayDataLoader(FIXTURES_DIR)


@pytest.fixture
def example7_spec(loader):
    return loader.load_spec(FIXTURES_DIR / "example7_spec.json")


@pytest.fixture
def rng():
    return np.random.default_rng(2024)
