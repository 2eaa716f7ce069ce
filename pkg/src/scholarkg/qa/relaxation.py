"""Relaxation algebra over conjunctive queries.

A query that fails to match can be weakened step by step: replace one
pattern with a dictionary entry, or delete one pattern outright. Each
step produces a new query at relaxation depth one; chains of steps
accumulate depth.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..kg.patterns import CompoundQuery, TriplePattern

__all__ = [
    "Edit",
    "RelaxedQuery",
    "RelaxationDictionary",
    "relax",
    "relax_set",
]


@dataclass(frozen=True)
class Edit:
    """One relaxation step: ``kind`` is ``"replace"`` or ``"delete"``,
    ``position`` is the 1-based pattern index the step applied to."""

    kind: str
    position: int
    replacement: TriplePattern | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("replace", "delete"):
            raise ValueError(f"unknown edit kind {self.kind!r}")
        if self.kind == "replace" and self.replacement is None:
            raise ValueError("a replace edit requires a replacement pattern")
        if self.kind == "delete" and self.replacement is not None:
            raise ValueError("a delete edit cannot carry a replacement")


@dataclass(frozen=True)
class RelaxedQuery:
    query: CompoundQuery
    depth: int
    edits: tuple[Edit, ...] = ()

    def __post_init__(self) -> None:
        if self.depth != len(self.edits):
            raise ValueError(
                f"depth {self.depth} does not match the {len(self.edits)} recorded edits")


@dataclass(frozen=True)
class RelaxationDictionary:
    """An ordered pool of replacement patterns (duplicates dropped)."""

    entries: tuple[TriplePattern, ...] = ()

    def __post_init__(self) -> None:
        deduped = tuple(dict.fromkeys(self.entries))
        for entry in deduped:
            if not entry.has_ground_term:
                raise ValueError("dictionary entries must have at least one ground term")
        object.__setattr__(self, "entries", deduped)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def relax(query: CompoundQuery, position: int,
          replacement: TriplePattern | None = None) -> CompoundQuery:
    """Apply one relaxation step at the 1-based ``position``.

    With a ``replacement`` the pattern at that position is substituted;
    without one it is deleted, which requires the query to keep at least
    one pattern.
    """
    if not 1 <= position <= query.n:
        raise ValueError(f"position {position} out of range for a query of {query.n} patterns")
    patterns = list(query.patterns)
    if replacement is None:
        if query.n == 1:
            raise ValueError("cannot relax below one triple")
        del patterns[position - 1]
    else:
        patterns[position - 1] = replacement
    return CompoundQuery(tuple(patterns))


def relax_set(query: CompoundQuery,
              dictionary: RelaxationDictionary) -> tuple[RelaxedQuery, ...]:
    """All depth-1 relaxations of ``query``.

    The set contains every single-pattern deletion (when more than one
    pattern remains to delete from) and every replacement of one pattern
    by a dictionary entry that differs from it. Relaxations whose pattern
    lists coincide are deduplicated; enumeration order (deletions by
    position, then replacements by position and dictionary order) makes
    the result deterministic.
    """
    seen: set[tuple[TriplePattern, ...]] = set()
    out: list[RelaxedQuery] = []

    def add(relaxed: CompoundQuery, edit: Edit) -> None:
        if relaxed.patterns in seen:
            return
        seen.add(relaxed.patterns)
        out.append(RelaxedQuery(query=relaxed, depth=1, edits=(edit,)))

    if query.n >= 2:
        for position in range(1, query.n + 1):
            add(relax(query, position), Edit("delete", position))
    for position in range(1, query.n + 1):
        current = query.patterns[position - 1]
        for entry in dictionary:
            if entry == current:
                continue
            add(relax(query, position, entry), Edit("replace", position, entry))
    return tuple(out)
