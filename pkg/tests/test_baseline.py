import math

import pytest

from scholarkg.baseline import (
    Chunk,
    RetrievedChunk,
    chunk_corpus,
    chunk_document,
    retrieve_top_k,
)
from scholarkg.embedding import HashedBagOfWordsEmbedder


def words(n: int, prefix: str = "w") -> str:
    return " ".join(f"{prefix}{i}" for i in range(n))


def expected_count(total: int, max_tokens: int = 100, stride: int = 95) -> int:
    if total <= max_tokens:
        return 1
    return 1 + math.ceil((total - max_tokens) / stride)


def test_single_chunk_when_text_fits():
    chunks = chunk_document("doc", words(100))
    assert len(chunks) == 1
    assert chunks[0].token_count == 100
    assert chunks[0].chunk_id == "doc-0000"
    assert chunks[0].index == 0


def test_second_chunk_starts_at_stride():
    chunks = chunk_document("doc", words(196))
    assert len(chunks) == 3
    assert chunks[0].text.split()[0] == "w0"
    assert chunks[1].text.split()[0] == "w95"
    assert chunks[2].text.split()[0] == "w190"
    assert chunks[2].token_count == 6


def test_overlap_tokens_repeat_between_neighbours():
    chunks = chunk_document("doc", words(195))
    assert len(chunks) == 2
    tail = chunks[0].text.split()[-5:]
    head = chunks[1].text.split()[:5]
    assert tail == head == ["w95", "w96", "w97", "w98", "w99"]


@pytest.mark.parametrize("total", [1, 99, 100, 101, 195, 196, 290, 291, 1000])
def test_chunk_count_matches_closed_form(total):
    assert len(chunk_document("doc", words(total))) == expected_count(total)


def test_chunk_count_for_corpus_sizes():
    assert len(chunk_document("doc", words(5895))) == 62
    assert len(chunk_document("doc", words(5800))) == 61


def test_custom_overlap_changes_stride():
    # stride = 10 - round(0.2 * 10) = 8; the window at 16 reaches token 25
    chunks = chunk_document("doc", words(26), max_tokens=10, overlap_ratio=0.2)
    assert [c.text.split()[0] for c in chunks] == ["w0", "w8", "w16"]
    assert chunks[-1].token_count == 10


def test_empty_text_yields_no_chunks():
    assert chunk_document("doc", "   \n\t  ") == []


def test_chunk_ids_are_zero_padded_and_ordered():
    chunks = chunk_document("doc", words(1000))
    assert [c.chunk_id for c in chunks][:3] == ["doc-0000", "doc-0001", "doc-0002"]
    assert all(c.index == i for i, c in enumerate(chunks))
    assert all(c.document_id == "doc" for c in chunks)


def test_chunk_document_validates_arguments():
    with pytest.raises(ValueError):
        chunk_document("doc", "text", max_tokens=0)
    with pytest.raises(ValueError):
        chunk_document("doc", "text", overlap_ratio=1.0)
    with pytest.raises(ValueError):
        chunk_document("doc", "text", overlap_ratio=-0.1)
    with pytest.raises(ValueError):
        # overlap so large the window never advances
        chunk_document("doc", "text", max_tokens=10, overlap_ratio=0.99)


def test_chunk_corpus_orders_documents_by_id():
    corpus = {"beta": words(150), "alpha": words(50)}
    chunks = chunk_corpus(corpus)
    assert [c.chunk_id for c in chunks] == ["alpha-0000", "beta-0000", "beta-0001"]


def test_retrieve_top_k_ranks_by_similarity():
    embedder = HashedBagOfWordsEmbedder()
    chunks = [
        Chunk("a-0000", "a", 0, "metadata extraction from pdf proposals", 5),
        Chunk("b-0000", "b", 0, "databases store json documents", 4),
        Chunk("c-0000", "c", 0, "unrelated poetry about gardens", 4),
    ]
    hits = retrieve_top_k(chunks, "how is metadata extracted from pdf proposals",
                          2, embedder)
    assert [h.chunk.chunk_id for h in hits] == ["a-0000", "b-0000"]
    assert hits[0].similarity > hits[1].similarity
    assert isinstance(hits[0], RetrievedChunk)


def test_retrieve_top_k_breaks_ties_by_chunk_id():
    embedder = HashedBagOfWordsEmbedder()
    chunks = [
        Chunk("b-0000", "b", 0, "same words here", 3),
        Chunk("a-0000", "a", 0, "same words here", 3),
    ]
    hits = retrieve_top_k(chunks, "same words here", 2, embedder)
    assert [h.chunk.chunk_id for h in hits] == ["a-0000", "b-0000"]
    assert hits[0].similarity == pytest.approx(hits[1].similarity)


def test_retrieve_top_k_validates_arguments():
    embedder = HashedBagOfWordsEmbedder()
    chunk = Chunk("a-0000", "a", 0, "text", 1)
    with pytest.raises(ValueError):
        retrieve_top_k([chunk], "q", 0, embedder)
    with pytest.raises(ValueError):
        retrieve_top_k([chunk], "  ", 1, embedder)
    assert retrieve_top_k([], "q", 3, embedder) == []


def test_retrieve_top_k_caps_at_available_chunks():
    embedder = HashedBagOfWordsEmbedder()
    chunks = [Chunk("a-0000", "a", 0, "alpha beta", 2)]
    hits = retrieve_top_k(chunks, "alpha", 10, embedder)
    assert len(hits) == 1
