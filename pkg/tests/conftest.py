import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
sys.path.insert(0, str(TESTS_DIR))  # makes `oracles` importable

DATA_DIR = TESTS_DIR.parent / "src" / "rrs" / "data"
FIXTURES_DIR = TESTS_DIR / "fixtures"


@pytest.fixture
def mini_corpus_path():
    return DATA_DIR / "mini_corpus.jsonl"


@pytest.fixture
def mini_store_path():
    return DATA_DIR / "mini_store.jsonl"


@pytest.fixture
def fixtures_dir():
    return FIXTURES_DIR
