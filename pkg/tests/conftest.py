from pathlib import Path

import pytest

from scholarkg.embedding import HashedBagOfWordsEmbedder
from scholarkg.gateway import StubGateway
from scholarkg.kg.turtle import load_turtle

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def sample_graph():
    return load_turtle((FIXTURES / "scholarly_sample.ttl").read_bytes())


@pytest.fixture()
def stub_gateway():
    return StubGateway()


@pytest.fixture(scope="session")
def stub_embedder():
    return HashedBagOfWordsEmbedder()
