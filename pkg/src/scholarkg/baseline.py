"""Sliding-window retrieval baseline.

Documents are cut into fixed-size overlapping token windows and the
question is answered from the windows most similar to it, with no
knowledge graph involved. This is the comparison point for the
graph-backed pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass

from .embedding import Embedder, cosine_similarity

__all__ = ["Chunk", "chunk_document", "chunk_corpus", "RetrievedChunk",
           "retrieve_top_k"]


@dataclass(frozen=True)
class Chunk:
    """A token window of a document."""

    chunk_id: str
    document_id: str
    index: int
    text: str
    token_count: int


def chunk_document(doc_id: str, text: str, max_tokens: int = 100,
                   overlap_ratio: float = 0.05) -> list[Chunk]:
    """Split a document into overlapping windows of whitespace tokens.

    Windows hold at most ``max_tokens`` tokens and consecutive windows
    overlap by ``round(overlap_ratio * max_tokens)`` tokens, i.e. the
    window start advances by the difference. A new window opens only
    while the previous one could not reach the end of the document, so
    a document of at most ``max_tokens`` tokens is a single chunk.
    """
    if max_tokens < 1:
        raise ValueError("max_tokens must be positive")
    if not 0.0 <= overlap_ratio < 1.0:
        raise ValueError("overlap_ratio must be in [0, 1)")
    overlap = round(overlap_ratio * max_tokens)
    stride = max_tokens - overlap
    if stride < 1:
        raise ValueError("overlap leaves no room for the window to advance")

    tokens = text.split()
    if not tokens:
        return []
    starts = [0]
    while starts[-1] + max_tokens < len(tokens):
        starts.append(starts[-1] + stride)
    return [
        Chunk(
            chunk_id=f"{doc_id}-{index:04d}",
            document_id=doc_id,
            index=index,
            text=" ".join(tokens[start:start + max_tokens]),
            token_count=len(tokens[start:start + max_tokens]),
        )
        for index, start in enumerate(starts)
    ]


def chunk_corpus(documents: dict[str, str], max_tokens: int = 100,
                 overlap_ratio: float = 0.05) -> list[Chunk]:
    """Chunk every document of a corpus, ordered by document id."""
    chunks: list[Chunk] = []
    for doc_id in sorted(documents):
        chunks.extend(chunk_document(doc_id, documents[doc_id],
                                     max_tokens=max_tokens,
                                     overlap_ratio=overlap_ratio))
    return chunks


@dataclass(frozen=True)
class RetrievedChunk:
    chunk: Chunk
    similarity: float


def retrieve_top_k(chunks: list[Chunk], question: str, k: int,
                   embedder: Embedder) -> list[RetrievedChunk]:
    """The ``k`` chunks most similar to the question.

    Similarity is cosine over the embedder's vectors; ties break on the
    chunk id so retrieval is deterministic.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if not question.strip():
        raise ValueError("question must be non-empty")
    query_vector = embedder.embed(question)
    scored = [
        RetrievedChunk(chunk=c, similarity=cosine_similarity(
            query_vector, embedder.embed(c.text)))
        for c in chunks
    ]
    scored.sort(key=lambda r: (-r.similarity, r.chunk.chunk_id))
    return scored[:k]
