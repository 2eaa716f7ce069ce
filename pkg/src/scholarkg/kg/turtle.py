"""Reader and writer for the Turtle subset used by the scholarly graph.

Supported: ``@prefix``/``PREFIX`` directives, ``a``, predicate lists with
``;``, object lists with ``,``, string literals with ``@lang`` tags or
``^^`` datatypes, IRIs and prefixed names. Blank nodes, collections and
bare numeric or boolean literals are rejected. The five canonical
prefixes are pre-bound, so listing-shaped data loads without a header.

The writer is canonical: subjects, predicates and objects are emitted in
a fixed order, so saving the same graph always produces identical bytes
and ``load(save(g)) == g``.
"""

from __future__ import annotations

import re

from .graph import KnowledgeGraph
from .terms import Iri, Literal, NAMESPACES, PREFIX_ALIASES, RDF_TYPE, RDFS_LABEL, Triple

__all__ = ["TurtleError", "TurtleSyntaxError", "UnknownPrefixError", "load_turtle", "save_turtle"]


class TurtleError(Exception):
    pass


class TurtleSyntaxError(TurtleError):
    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (line {line})")
        self.line = line


class UnknownPrefixError(TurtleError):
    def __init__(self, prefix: str, line: int):
        super().__init__(f"unknown prefix {prefix!r} (line {line})")
        self.prefix = prefix
        self.line = line


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

_PNAME = re.compile(r"([A-Za-z][A-Za-z0-9_-]*):([A-Za-z0-9_](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?)?")
_LANGTAG = re.compile(r"@[A-Za-z]+(-[A-Za-z0-9]+)*")
_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t", "b": "\b", "f": "\f"}


class _Token:
    __slots__ = ("kind", "value", "line")

    def __init__(self, kind: str, value, line: int):
        self.kind = kind
        self.value = value
        self.line = line


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1

    def _advance(self, n: int) -> None:
        self.line += self.text.count("\n", self.pos, self.pos + n)
        self.pos += n

    def _skip_space(self) -> None:
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch in " \t\r\n":
                self._advance(1)
            elif ch == "#":
                end = self.text.find("\n", self.pos)
                self._advance((end if end != -1 else len(self.text)) - self.pos)
            else:
                return

    def _string(self) -> _Token:
        line = self.line
        out: list[str] = []
        self._advance(1)  # opening quote
        while True:
            if self.pos >= len(self.text):
                raise TurtleSyntaxError("unterminated string literal", line)
            ch = self.text[self.pos]
            if ch == '"':
                self._advance(1)
                return _Token("STRING", "".join(out), line)
            if ch == "\\":
                if self.pos + 1 >= len(self.text):
                    raise TurtleSyntaxError("dangling escape in string literal", self.line)
                esc = self.text[self.pos + 1]
                if esc in _ESCAPES:
                    out.append(_ESCAPES[esc])
                    self._advance(2)
                elif esc == "u":
                    hex_part = self.text[self.pos + 2:self.pos + 6]
                    if len(hex_part) != 4 or not all(c in "0123456789abcdefABCDEF" for c in hex_part):
                        raise TurtleSyntaxError("invalid \\u escape", self.line)
                    out.append(chr(int(hex_part, 16)))
                    self._advance(6)
                else:
                    raise TurtleSyntaxError(f"unsupported escape \\{esc}", self.line)
            elif ch == "\n":
                raise TurtleSyntaxError("unterminated string literal", line)
            else:
                out.append(ch)
                self._advance(1)

    def next(self) -> _Token:
        self._skip_space()
        line = self.line
        if self.pos >= len(self.text):
            return _Token("EOF", None, line)
        text = self.text
        ch = text[self.pos]
        if ch in "[](_":
            raise TurtleSyntaxError("blank nodes and collections are not supported", line)
        if ch == ".":
            self._advance(1)
            return _Token("DOT", ".", line)
        if ch == ";":
            self._advance(1)
            return _Token("SEMI", ";", line)
        if ch == ",":
            self._advance(1)
            return _Token("COMMA", ",", line)
        if text.startswith("^^", self.pos):
            self._advance(2)
            return _Token("DTYPE", "^^", line)
        if ch == "<":
            end = text.find(">", self.pos)
            if end == -1:
                raise TurtleSyntaxError("unterminated IRI", line)
            value = text[self.pos + 1:end]
            self._advance(end + 1 - self.pos)
            return _Token("IRIREF", value, line)
        if ch == '"':
            return self._string()
        if ch == "@":
            if text.startswith("@prefix", self.pos):
                self._advance(len("@prefix"))
                return _Token("PREFIX_DIRECTIVE", "@prefix", line)
            m = _LANGTAG.match(text, self.pos)
            if m:
                self._advance(m.end() - self.pos)
                return _Token("LANGTAG", m.group(0)[1:], line)
            raise TurtleSyntaxError("malformed @ token", line)
        m = _PNAME.match(text, self.pos)
        if m:
            self._advance(m.end() - self.pos)
            return _Token("PNAME", (m.group(1), m.group(2) or ""), line)
        m = re.match(r"[A-Za-z]+", text[self.pos:])
        if m:
            word = m.group(0)
            self._advance(len(word))
            if word == "a":
                return _Token("A", "a", line)
            if word.upper() == "PREFIX":
                return _Token("SPARQL_PREFIX", word, line)
            raise TurtleSyntaxError(f"unexpected token {word!r}", line)
        raise TurtleSyntaxError(f"unexpected character {ch!r}", line)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.lexer = _Lexer(text)
        self.token = self.lexer.next()
        self.prefixes = dict(NAMESPACES)
        self.prefixes.update(PREFIX_ALIASES)
        self.triples: list[Triple] = []

    def _next(self) -> None:
        self.token = self.lexer.next()

    def _expect(self, kind: str) -> _Token:
        tok = self.token
        if tok.kind != kind:
            raise TurtleSyntaxError(f"expected {kind}, got {tok.kind}", tok.line)
        self._next()
        return tok

    def _expand(self, tok: _Token) -> Iri:
        prefix, local = tok.value
        ns = self.prefixes.get(prefix)
        if ns is None:
            raise UnknownPrefixError(prefix, tok.line)
        return Iri(ns + local)

    def _directive(self) -> None:
        sparql_form = self.token.kind == "SPARQL_PREFIX"
        self._next()
        name_tok = self._expect("PNAME")
        prefix, local = name_tok.value
        if local:
            raise TurtleSyntaxError("prefix declaration must end with a bare colon", name_tok.line)
        iri_tok = self._expect("IRIREF")
        self.prefixes[prefix] = iri_tok.value
        if not sparql_form:
            self._expect("DOT")

    def _node(self) -> Iri:
        tok = self.token
        if tok.kind == "IRIREF":
            self._next()
            return Iri(tok.value)
        if tok.kind == "PNAME":
            self._next()
            return self._expand(tok)
        raise TurtleSyntaxError(f"expected an IRI or prefixed name, got {tok.kind}", tok.line)

    def _object(self):
        tok = self.token
        if tok.kind == "STRING":
            self._next()
            if self.token.kind == "LANGTAG":
                lang = self.token.value
                self._next()
                return Literal(tok.value, language=lang)
            if self.token.kind == "DTYPE":
                self._next()
                return Literal(tok.value, datatype=self._node())
            return Literal(tok.value)
        return self._node()

    def _predicate(self) -> Iri:
        if self.token.kind == "A":
            self._next()
            return RDF_TYPE
        return self._node()

    def _triples_block(self) -> None:
        subject = self._node()
        while True:
            predicate = self._predicate()
            while True:
                obj = self._object()
                self.triples.append(Triple(subject, predicate, obj))
                if self.token.kind == "COMMA":
                    self._next()
                    continue
                break
            if self.token.kind == "SEMI":
                self._next()
                if self.token.kind == "DOT":  # trailing semicolon
                    break
                continue
            break
        self._expect("DOT")

    def parse(self) -> list[Triple]:
        while self.token.kind != "EOF":
            if self.token.kind in ("PREFIX_DIRECTIVE", "SPARQL_PREFIX"):
                self._directive()
            else:
                self._triples_block()
        return self.triples


def load_turtle(data: bytes | str) -> KnowledgeGraph:
    """Parse Turtle text into a knowledge graph."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return KnowledgeGraph(_Parser(data).parse())


# ---------------------------------------------------------------------------
# Writer
# ---------------------------------------------------------------------------

_SAFE_LOCAL = re.compile(r"^[A-Za-z0-9_](?:[A-Za-z0-9_.-]*[A-Za-z0-9_-])?$")
_STRING_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _render_iri(node: Iri) -> str:
    prefixed = node.prefixed()
    if prefixed is not None:
        prefix, local = prefixed
        if _SAFE_LOCAL.match(local):
            return f"{prefix}:{local}"
    return f"<{node.value}>"


def _render_literal(literal: Literal) -> str:
    escaped = "".join(_STRING_ESCAPES.get(c, c) for c in literal.lexical)
    rendered = f'"{escaped}"'
    if literal.language is not None:
        return f"{rendered}@{literal.language}"
    if literal.datatype is not None:
        return f"{rendered}^^{_render_iri(literal.datatype)}"
    return rendered


def _render_term(term) -> str:
    return _render_iri(term) if isinstance(term, Iri) else _render_literal(term)


def _predicate_order(predicate: Iri) -> tuple:
    # Type first, label second, everything else alphabetically: the order
    # the graph's excerpt and paragraph blocks conventionally use.
    if predicate == RDF_TYPE:
        rank = 0
    elif predicate == RDFS_LABEL:
        rank = 1
    else:
        rank = 2
    return (rank, _render_iri(predicate))


def save_turtle(graph: KnowledgeGraph) -> bytes:
    """Serialize a graph to canonical Turtle bytes.

    The output starts with the canonical prefix header and groups triples
    by subject with ``;``/``,`` continuation, deterministically ordered.
    """
    lines = [f"@prefix {prefix}: <{NAMESPACES[prefix]}> ." for prefix in sorted(NAMESPACES)]
    lines.append("")

    by_subject: dict[Iri, dict[Iri, list]] = {}
    for t in graph:
        by_subject.setdefault(t.subject, {}).setdefault(t.predicate, []).append(t.object)

    for subject in sorted(by_subject, key=_render_iri):
        predicates = sorted(by_subject[subject], key=_predicate_order)
        block: list[str] = []
        for p_index, predicate in enumerate(predicates):
            p_token = "a" if predicate == RDF_TYPE else _render_iri(predicate)
            objects = sorted(by_subject[subject][predicate], key=_render_term)
            for o_index, obj in enumerate(objects):
                lead = f"{_render_iri(subject)} {p_token} " if p_index == 0 and o_index == 0 else (
                    f"    {p_token} " if o_index == 0 else "        ")
                last_object = o_index == len(objects) - 1
                last_predicate = p_index == len(predicates) - 1
                if not last_object:
                    tail = ","
                elif not last_predicate:
                    tail = " ;"
                else:
                    tail = " ."
                block.append(f"{lead}{_render_term(obj)}{tail}")
        lines.extend(block)
        lines.append("")

    return ("\n".join(lines).rstrip("\n") + "\n").encode("utf-8")
