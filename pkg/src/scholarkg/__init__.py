"""scholarkg: knowledge graphs for scholarly documents.

The package turns documents into an RDF graph of paragraphs, excerpts
and mentioned entities, then answers natural-language questions against
that graph: questions become triple patterns, unmatched patterns are
relaxed step by step, and the matched subgraph picks the paragraphs
that ground the final answer. A sliding-window retrieval baseline and
answer-comparison metrics round out the pipeline.
"""

from .baseline import Chunk, RetrievedChunk, chunk_corpus, chunk_document, retrieve_top_k
from .chunked_xml import (
    ChunkedXmlError,
    ChunkedXmlParseError,
    ChunkedXmlValidationError,
    parse_chunked_xml,
    serialize_chunked_xml,
)
from .document import (
    DocumentModel,
    Excerpt,
    Paragraph,
    Section,
    Sentence,
    ValidationIssue,
    collect_paragraphs,
    short_hash,
    validate_model,
)
from .embedding import (
    BackendConfig,
    Embedder,
    EmbeddingError,
    EmbeddingProtocolError,
    EmbeddingTransportError,
    EmbeddingVector,
    HashedBagOfWordsEmbedder,
    HttpEmbedder,
    cosine_similarity,
)
from .evaluation import (
    EvaluationReport,
    QuestionComparison,
    build_report,
    cronbach_alpha,
    embedding_distance,
    entity_overlap,
    extract_entity_set,
)
from .gateway import (
    Gateway,
    GatewayError,
    GatewayProtocolError,
    GatewayRequest,
    GatewayResponse,
    GatewayTransportError,
    HttpGateway,
    StubGateway,
    TripleResponseError,
    format_triples,
    parse_triples_response,
)
from .ingest import (
    ExcerptLink,
    HeadingOutline,
    OutlineEntry,
    UnknownLinkTargetError,
    build_document_model,
    emit_rdf,
    excerpt_triples,
    excerpts_from_graph,
    link_excerpts,
    paragraph_triples,
    read_excerpts_jsonl,
    read_outline_json,
)
from .kg import (
    CompoundQuery,
    GraphStats,
    Iri,
    KnowledgeGraph,
    Literal,
    MatchResult,
    Triple,
    TriplePattern,
    TurtleError,
    TurtleSyntaxError,
    UnknownPrefixError,
    Variable,
    WILDCARD,
    graph_stats,
    iri,
    keyword_frequency,
    load_turtle,
    match_compound,
    normalize_entity_key,
    paragraphs_containing,
    save_turtle,
)
from .qa import (
    AnswerResult,
    CandidateTripleSet,
    Edit,
    QuestionParseError,
    RankedEntity,
    RelaxationDictionary,
    RelaxedQuery,
    ScoredParagraph,
    default_relaxation_dictionary,
    extract_question_patterns,
    frequency,
    generate_answer,
    match_candidates,
    purity,
    query_entities_of,
    rank_candidates,
    relax,
    relax_set,
    resolve_query,
    select_context,
    select_triples,
    triple_entities,
)
from .segmentation import segment_sentences

__version__ = "0.1.0"

__all__ = [
    "AnswerResult",
    "BackendConfig",
    "CandidateTripleSet",
    "Chunk",
    "ChunkedXmlError",
    "ChunkedXmlParseError",
    "ChunkedXmlValidationError",
    "CompoundQuery",
    "DocumentModel",
    "Edit",
    "Embedder",
    "EmbeddingError",
    "EmbeddingProtocolError",
    "EmbeddingTransportError",
    "EmbeddingVector",
    "EvaluationReport",
    "Excerpt",
    "ExcerptLink",
    "Gateway",
    "GatewayError",
    "GatewayProtocolError",
    "GatewayRequest",
    "GatewayResponse",
    "GatewayTransportError",
    "GraphStats",
    "HashedBagOfWordsEmbedder",
    "HeadingOutline",
    "HttpEmbedder",
    "HttpGateway",
    "Iri",
    "KnowledgeGraph",
    "Literal",
    "MatchResult",
    "OutlineEntry",
    "Paragraph",
    "QuestionComparison",
    "QuestionParseError",
    "RankedEntity",
    "RelaxationDictionary",
    "RelaxedQuery",
    "RetrievedChunk",
    "ScoredParagraph",
    "Section",
    "Sentence",
    "StubGateway",
    "Triple",
    "TriplePattern",
    "TripleResponseError",
    "TurtleError",
    "TurtleSyntaxError",
    "UnknownLinkTargetError",
    "UnknownPrefixError",
    "ValidationIssue",
    "Variable",
    "WILDCARD",
    "__version__",
    "build_document_model",
    "build_report",
    "chunk_corpus",
    "chunk_document",
    "collect_paragraphs",
    "cosine_similarity",
    "cronbach_alpha",
    "default_relaxation_dictionary",
    "embedding_distance",
    "emit_rdf",
    "entity_overlap",
    "excerpt_triples",
    "excerpts_from_graph",
    "extract_entity_set",
    "extract_question_patterns",
    "format_triples",
    "frequency",
    "generate_answer",
    "graph_stats",
    "iri",
    "keyword_frequency",
    "link_excerpts",
    "load_turtle",
    "match_candidates",
    "match_compound",
    "normalize_entity_key",
    "paragraph_triples",
    "paragraphs_containing",
    "parse_chunked_xml",
    "parse_triples_response",
    "purity",
    "query_entities_of",
    "rank_candidates",
    "read_excerpts_jsonl",
    "read_outline_json",
    "relax",
    "relax_set",
    "resolve_query",
    "retrieve_top_k",
    "save_turtle",
    "segment_sentences",
    "select_context",
    "select_triples",
    "serialize_chunked_xml",
    "short_hash",
    "validate_model",
]
