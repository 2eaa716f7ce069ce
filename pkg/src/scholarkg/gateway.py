"""Language-model gateway: request/response types, HTTP backend, stub.

The stub backend is a pure function of the request text, so pipelines
wired to it are reproducible byte for byte. Its behavior is documented
to the letter here because tests and downstream fixtures rely on it.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass

from .embedding import BackendConfig, post_with_retries
from .kg.patterns import TriplePattern, Variable, WILDCARD, Wildcard
from .kg.terms import Iri, Literal
from .segmentation import segment_sentences

__all__ = [
    "GatewayRequest",
    "GatewayResponse",
    "GatewayError",
    "GatewayTransportError",
    "GatewayProtocolError",
    "TripleResponseError",
    "Gateway",
    "StubGateway",
    "HttpGateway",
    "parse_triples_response",
    "format_triples",
]


class GatewayError(Exception):
    pass


class GatewayTransportError(GatewayError):
    pass


class GatewayProtocolError(GatewayError):
    pass


class TripleResponseError(GatewayError):
    """A triples response line did not have exactly three fields."""

    def __init__(self, line_index: int, line: str):
        super().__init__(f"line {line_index} is not 'subject | predicate | object': {line!r}")
        self.line_index = line_index
        self.line = line


@dataclass(frozen=True)
class GatewayRequest:
    system: str
    user: str
    max_tokens: int = 512
    temperature: float = 0.0

    def __post_init__(self) -> None:
        if not self.user.strip():
            raise ValueError("request user text must be non-empty")
        if self.max_tokens <= 0:
            raise ValueError("max_tokens must be positive")


@dataclass(frozen=True)
class GatewayResponse:
    text: str
    backend: str
    latency_ms: float


class Gateway:
    """Protocol-ish base class; backends implement ``complete``."""

    def complete(self, request: GatewayRequest) -> GatewayResponse:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# Wire format for triple patterns
# ---------------------------------------------------------------------------

def parse_triples_response(text: str) -> list[TriplePattern]:
    """Parse ``subject | predicate | object`` lines into patterns.

    Blank lines are skipped. A bare ``?`` field is a wildcard, ``?name``
    is a named variable, anything else is kept as a plain-text ground
    term. Lines with a field count other than three raise
    :class:`TripleResponseError` carrying the 1-based line index.
    """
    patterns: list[TriplePattern] = []
    for index, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split("|")]
        if len(fields) != 3:
            raise TripleResponseError(index, raw)
        terms = []
        for f in fields:
            if f == "?":
                terms.append(WILDCARD)
            elif f.startswith("?") and len(f) > 1:
                terms.append(Variable(f[1:]))
            else:
                terms.append(f)
        patterns.append(TriplePattern(*terms))
    return patterns


def _format_term(term) -> str:
    if isinstance(term, Wildcard):
        return "?"
    if isinstance(term, Variable):
        return f"?{term.name}"
    if isinstance(term, Iri):
        prefixed = term.prefixed()
        return f"{prefixed[0]}:{prefixed[1]}" if prefixed else f"<{term.value}>"
    if isinstance(term, Literal):
        return term.lexical
    return str(term)


def format_triples(patterns: list[TriplePattern]) -> str:
    """One ``subject | predicate | object`` line per pattern."""
    return "\n".join(
        " | ".join(_format_term(t) for t in p.terms) for p in patterns
    )


# ---------------------------------------------------------------------------
# Stub backend
# ---------------------------------------------------------------------------

# Markers the prompt templates embed so the stub can tell tasks apart.
# They are searched for in the whole prompt (system and user text), so a
# template works whether it is sent as a system prompt or formatted into
# the user message.
EXTRACT_MARKER = "subject | predicate | object"
ANSWER_MARKER = "only the provided context"
CANDIDATES_MARKER = "candidate knowledge graph triples"

_WH_WORDS = {"which", "what", "who", "whom", "whose", "where", "when", "why", "how"}
_AUXILIARIES = {
    "is", "are", "was", "were", "am", "be", "been", "being",
    "do", "does", "did", "can", "could", "may", "might", "must",
    "shall", "should", "will", "would", "has", "have", "had",
}
_PREPOSITIONS = {
    "from", "in", "on", "at", "by", "with", "for", "of", "into", "onto",
    "over", "under", "between", "among", "about", "within", "through",
}
_STOPWORDS = _WH_WORDS | _AUXILIARIES | _PREPOSITIONS | {
    "a", "an", "the", "and", "or", "to", "not", "it", "its", "this",
    "that", "these", "those", "they", "them",
}

_CLAUSE_SPLIT = re.compile(
    r";\s*|,?\s+and\s+(?=(?:which|what|who|whom|whose|where|when|why|how)\b)",
    re.IGNORECASE,
)


def _verb_group(tokens: list[str]) -> tuple[list[str], int]:
    group: list[str] = []
    i = 0
    expect_verb = False
    while i < len(tokens):
        low = tokens[i].lower()
        if low in _AUXILIARIES or low == "not":
            group.append(tokens[i])
            expect_verb = True
        elif low == "to" and group:
            group.append(tokens[i])
            expect_verb = True
        elif expect_verb:
            group.append(tokens[i])
            expect_verb = False
        else:
            break
        i += 1
    return group, i


def _clause_to_pattern(clause: str) -> TriplePattern | None:
    """Subject-verb-object split of one interrogative clause.

    Rules, applied in order:

    1. Strip trailing sentence punctuation and split on whitespace.
    2. Drop a leading wh-word.
    3. The subject is every token before the first auxiliary verb
       (capitalized on output); with no auxiliary the first token alone
       is the subject. An empty subject becomes a wildcard.
    4. The predicate is the verb group (auxiliaries, ``to``/``not``
       particles, and the verbs they introduce) plus the first
       preposition that follows it; tokens between the two (the direct
       object) are dropped.
    5. Whatever follows that preposition is the object; with no
       preposition the remainder after the verb group is the object, or
       a wildcard when nothing remains.
    """
    tokens = clause.strip().rstrip("?.!").split()
    if not tokens:
        return None
    if tokens[0].lower() in _WH_WORDS:
        tokens = tokens[1:]
    if not tokens:
        return None

    aux_index = next((i for i, t in enumerate(tokens) if t.lower() in _AUXILIARIES), None)
    if aux_index is None:
        subject_tokens, rest = tokens[:1], tokens[1:]
    else:
        subject_tokens, rest = tokens[:aux_index], tokens[aux_index:]

    group, consumed = _verb_group(rest)
    remainder = rest[consumed:]
    if not group and remainder:
        group, remainder = remainder[:1], remainder[1:]

    prep_index = next((i for i, t in enumerate(remainder) if t.lower() in _PREPOSITIONS), None)
    if prep_index is not None:
        predicate_tokens = group + [remainder[prep_index]]
        object_tokens = remainder[prep_index + 1:]
    else:
        predicate_tokens = group
        object_tokens = remainder

    subject = " ".join(subject_tokens)
    subject_term = subject[0].upper() + subject[1:] if subject else WILDCARD
    predicate_term = " ".join(predicate_tokens) if predicate_tokens else WILDCARD
    object_term = " ".join(object_tokens) if object_tokens else WILDCARD
    pattern = TriplePattern(subject_term, predicate_term, object_term)
    return pattern if pattern.has_ground_term else None


def _question_from_prompt(user_text: str) -> str:
    for line in user_text.splitlines():
        if line.startswith("Question:"):
            return line[len("Question:"):].strip()
    return user_text.strip()


def _context_from_prompt(user_text: str) -> str:
    _, marker, rest = user_text.partition("Context:")
    return rest.strip() if marker else ""


def _block_after(user_text: str, header: str) -> str:
    _, marker, rest = user_text.partition(header)
    return rest.strip() if marker else ""


class StubGateway:
    """Deterministic offline backend.

    * Triple extraction prompts get one ``s | p | o`` line per clause of
      the question, produced by the documented subject-verb-object rules.
      Clauses are separated by ``;`` or by ``and`` followed by a wh-word.
    * Answer prompts get the context sentence containing the most
      distinct question keywords (ties go to the earlier sentence).
      Keywords are the question's lowercase alphanumeric tokens minus a
      stopword list.
    * Candidate-selection prompts echo the candidates block unchanged.
    * Anything else echoes the user text.
    """

    backend_name = "stub"

    def complete(self, request: GatewayRequest) -> GatewayResponse:
        prompt = f"{request.system}\n{request.user}"
        if EXTRACT_MARKER in prompt:
            text = self._extract(request.user)
        elif ANSWER_MARKER in prompt:
            text = self._answer(request.user)
        elif CANDIDATES_MARKER in prompt:
            text = _block_after(request.user, "Candidates:")
        else:
            text = request.user.strip()
        return GatewayResponse(text=text, backend=self.backend_name, latency_ms=0.0)

    def _extract(self, user_text: str) -> str:
        question = _question_from_prompt(user_text)
        lines = []
        for clause in _CLAUSE_SPLIT.split(question):
            if clause is None or not clause.strip():
                continue
            # a split on ";" can leave the conjunction behind
            clause = re.sub(r"^\s*(?:and|or)\s+", "", clause, flags=re.IGNORECASE)
            pattern = _clause_to_pattern(clause)
            if pattern is not None:
                lines.append(format_triples([pattern]))
        return "\n".join(lines)

    def _answer(self, user_text: str) -> str:
        question = _question_from_prompt(user_text)
        context = _context_from_prompt(user_text)
        if not context:
            return ""
        keywords = {
            t for t in re.findall(r"[a-z0-9]+", question.lower())
            if t not in _STOPWORDS
        }
        best_sentence = ""
        best_score = -1
        for sentence in segment_sentences(context):
            lowered = sentence.lower()
            score = sum(1 for k in keywords if k in lowered)
            if score > best_score:
                best_score = score
                best_sentence = sentence
        return best_sentence


# ---------------------------------------------------------------------------
# HTTP backend
# ---------------------------------------------------------------------------

class HttpGateway:
    """Client for a chat-completion service.

    Sends ``{"model", "messages", "max_tokens", "temperature"}`` and reads
    the completion text from ``choices[0].message.content`` or, failing
    that, a top-level ``"text"`` field.
    """

    def __init__(self, config: BackendConfig, session=None):
        if session is None:
            import requests

            session = requests.Session()
        self.config = config
        self.session = session

    def complete(self, request: GatewayRequest) -> GatewayResponse:
        messages = []
        if request.system:
            messages.append({"role": "system", "content": request.system})
        messages.append({"role": "user", "content": request.user})
        payload = {
            "messages": messages,
            "max_tokens": request.max_tokens,
            "temperature": request.temperature,
        }
        if self.config.model:
            payload["model"] = self.config.model
        start = time.monotonic()
        response = post_with_retries(self.session, self.config, payload,
                                     GatewayTransportError)
        latency_ms = (time.monotonic() - start) * 1000.0
        try:
            body = response.json()
        except ValueError as exc:
            raise GatewayProtocolError(f"backend response is not JSON: {exc}") from exc
        text = ""
        if isinstance(body, dict):
            choices = body.get("choices")
            if isinstance(choices, list) and choices:
                message = choices[0].get("message", {})
                text = message.get("content", "") if isinstance(message, dict) else ""
            if not text:
                text = body.get("text", "")
        if not isinstance(text, str) or not text:
            raise GatewayProtocolError("backend response carries no completion text")
        return GatewayResponse(
            text=text,
            backend=self.config.model or "http",
            latency_ms=latency_ms,
        )
