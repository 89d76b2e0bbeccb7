import io
from pathlib import Path

import pytest

from lexsets.embeddings import load_text_vectors

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_DIR = DATA_DIR / "golden"


@pytest.fixture
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture
def toy_store():
    with open(DATA_DIR / "toy_vectors.txt", encoding="utf-8") as stream:
        return load_text_vectors(stream)


def store_from_text(text: str):
    return load_text_vectors(io.StringIO(text))
