"""Query resolution and rectangle matching.

A query is a set of abstract concepts, obtained from surface terms in
any configured language.  Matching returns the nodes whose domains are
inclusion-minimal among those containing the whole query; the extra
domain concepts of each hit come back as feedback the user may fold
into the next query.  Broadening drops a concept to widen the result.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    AmbiguousQueryError,
    EmptyQueryError,
    TermNotInQueryError,
)
from .lexicon import Ambiguous, Lexicon, Resolved
from .thesaurus import RectangularThesaurus


@dataclass(frozen=True)
class Query:
    concepts: frozenset[str]
    language: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "concepts", frozenset(self.concepts))


@dataclass(frozen=True)
class QueryAmbiguity:
    surface: str
    normal_form: str
    candidates: tuple[tuple[str, str], ...]  # (context, concept)


@dataclass(frozen=True)
class QueryResolution:
    query: Query | None
    ambiguities: tuple[QueryAmbiguity, ...]
    unknown: tuple[str, ...]

    def require_query(self) -> Query:
        if self.ambiguities:
            raise AmbiguousQueryError(
                "query terms need disambiguation",
                ambiguities=[{
                    "surface": a.surface,
                    "normal_form": a.normal_form,
                    "candidates": [
                        {"context": ctx, "concept": c}
                        for ctx, c in a.candidates],
                } for a in self.ambiguities])
        assert self.query is not None
        return self.query


@dataclass(frozen=True)
class MatchedRectangle:
    node_id: int
    domain: tuple[str, ...]
    documents: tuple[int, ...]
    feedback: tuple[str, ...]


@dataclass(frozen=True)
class MatchResult:
    query: Query
    rectangles: tuple[MatchedRectangle, ...]

    @property
    def documents(self) -> tuple[int, ...]:
        seen: set[int] = set()
        for r in self.rectangles:
            seen.update(r.documents)
        return tuple(sorted(seen))


def resolve_query(terms, language: str, lexicon: Lexicon) -> QueryResolution:
    """Map surface terms to concepts.

    A term may carry a context pin after a colon ("bank:finance");
    multi-word terms pass through compound lookup like document text.
    Stopwords vanish, unknown terms are reported but do not block the
    query; a query with no concept left at all is refused.
    """
    concepts: set[str] = set()
    ambiguities: list[QueryAmbiguity] = []
    unknown: list[str] = []
    saw_input = False
    for raw in terms:
        raw = raw.strip()
        if not raw:
            continue
        surface, _, ctx = raw.rpartition(":")
        if not surface:
            surface, ctx = raw, None
        saw_input = True
        result = lexicon.normalize(surface.split(), language)
        for span in result.terms:
            res = lexicon.resolve(span.normal_form, language, context=ctx)
            if isinstance(res, Resolved):
                concepts.add(res.concept)
            elif isinstance(res, Ambiguous):
                ambiguities.append(QueryAmbiguity(
                    raw, span.normal_form, res.candidates))
            else:
                unknown.append(raw)
        for unk in result.unknown:
            unknown.append(unk.surface)
    if not saw_input:
        raise EmptyQueryError("empty query")
    if not concepts and not ambiguities:
        raise EmptyQueryError(
            "no query term could be resolved to a concept",
            unknown=unknown)
    query = Query(frozenset(concepts), language) if not ambiguities else None
    return QueryResolution(query, tuple(ambiguities), tuple(unknown))


def match(thesaurus: RectangularThesaurus, query: Query) -> MatchResult:
    if not query.concepts:
        raise EmptyQueryError("cannot match an empty query")
    hits = [(node.id, node.rectangle) for node in thesaurus.nodes()
            if query.concepts <= node.rectangle.domain]
    # keep only inclusion-minimal domains
    minimal = [
        (nid, rect) for nid, rect in hits
        if not any(other.domain < rect.domain for _, other in hits)]
    minimal.sort(key=lambda h: (len(h[1].domain), tuple(sorted(h[1].domain))))
    rectangles = tuple(
        MatchedRectangle(
            node_id=nid,
            domain=tuple(sorted(rect.domain)),
            documents=tuple(sorted(rect.codomain)),
            feedback=tuple(sorted(rect.domain - query.concepts)))
        for nid, rect in minimal)
    return MatchResult(query, rectangles)


def broaden(query: Query, drop: str) -> Query:
    if drop not in query.concepts:
        raise TermNotInQueryError(
            f"concept {drop!r} is not part of the query", concept=drop)
    return Query(query.concepts - {drop}, query.language)


def representatives_for(concepts, lexicon: Lexicon, language: str) -> dict[str, str]:
    """Display labels for feedback and result rendering; concepts the
    language cannot name fall back to their raw identifier."""
    out: dict[str, str] = {}
    for c in concepts:
        try:
            out[c] = lexicon.representative(c, language)[0]
        except Exception:
            out[c] = c
    return out
