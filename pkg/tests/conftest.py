from pathlib import Path

import pytest

from wildcat.model import validate_class_table
from wildcat.parser import parse_class_table

CORPUS = Path(__file__).resolve().parents[1] / "src" / "wildcat" / "corpus"
CORPUS_NAMES = ("simple", "sample", "fbounded", "variance", "pair")


def table_of(text: str):
    return validate_class_table(parse_class_table(text))


def corpus_table(name: str):
    from wildcat.parser import load_table

    return load_table(CORPUS / f"{name}.wc")


@pytest.fixture
def simple():
    return corpus_table("simple")


@pytest.fixture
def sample():
    return corpus_table("sample")


@pytest.fixture
def fbounded():
    return corpus_table("fbounded")


@pytest.fixture
def variance():
    return corpus_table("variance")
