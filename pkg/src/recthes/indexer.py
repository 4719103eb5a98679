"""Per-document indexing pipeline.

Extraction walks phrases and tokens, normalizes through the lexicon,
and emits one occurrence per resolved term at the raw position of its
first token.  Co-occurrence statistics follow: distance within a
phrase, binding force within a category-dependent window, then the
association measure m = k*b/f with k = ((f-1)/f)^n.  Terms of pairs
with m >= theta are significant; a single document inserts one
rectangle, a batch decomposes the term/document relation first.

Ambiguous and unknown terms never index silently: they become session
items the user resolves (pick a context, map to a concept, or discard),
optionally applying one choice to every matching pending item.
"""

from __future__ import annotations

import re
import uuid
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import (
    IndexingError,
    InvalidResolutionError,
    PendingAmbiguities,
    SessionStateError,
    UnknownItemError,
)
from .lexicon import Ambiguous, Lexicon, Resolved, Unknown
from .relations import DEFAULT_CELL_CAP, BinaryRelation, Rectangle, decompose
from .thesaurus import (
    DocumentInfo,
    InsertionReport,
    RectangularThesaurus,
    ThesaurusStore,
)

# phrase ends at sentence punctuation followed by whitespace or EOT;
# a token is a maximal run of letters/digits/hyphens
_PHRASE_SPLIT = re.compile(r"[.!?]+(?:\s+|$)")
_TOKEN = re.compile(r"(?:[^\W_]|-)+", re.UNICODE)


def split_phrases(text: str) -> list[str]:
    return [p for p in _PHRASE_SPLIT.split(text) if p.strip()]


def tokenize(phrase: str) -> list[str]:
    return _TOKEN.findall(phrase)


@dataclass(frozen=True)
class Occurrence:
    concept: str
    nd: int
    nf: int
    nt: int

    def __post_init__(self):
        if self.nd < 1 or self.nf < 1 or self.nt < 1:
            raise IndexingError(
                f"occurrence positions are 1-based, got {self!r}")


@dataclass(frozen=True)
class PairStats:
    pair: tuple[str, str]
    b: float
    f: int
    k: float
    m: float


@dataclass(frozen=True)
class AmbiguityItem:
    item_id: int
    nd: int
    nf: int
    nt: int
    surface: str
    token_count: int
    normal_form: str | None                  # None for unknown tokens
    candidates: tuple[tuple[str, str], ...]  # (context, concept)

    @property
    def key(self) -> str:
        return (self.normal_form or self.surface).casefold()


@dataclass(frozen=True)
class DocumentAnalysis:
    nd: int
    language: str
    occurrences: tuple[Occurrence, ...]
    ambiguities: tuple[AmbiguityItem, ...]
    phrase_count: int


def extract_occurrences(text: str, language: str, nd: int,
                        lexicon: Lexicon) -> DocumentAnalysis:
    occurrences: list[Occurrence] = []
    pending: list[AmbiguityItem] = []
    phrases = split_phrases(text)
    for nf, phrase in enumerate(phrases, start=1):
        tokens = tokenize(phrase)
        result = lexicon.normalize(tokens, language)
        for span in result.terms:
            res = lexicon.resolve(span.normal_form, language)
            nt = span.start + 1
            if isinstance(res, Resolved):
                occurrences.append(Occurrence(res.concept, nd, nf, nt))
            elif isinstance(res, Ambiguous):
                pending.append(AmbiguityItem(
                    item_id=0, nd=nd, nf=nf, nt=nt, surface=span.surface,
                    token_count=span.token_count,
                    normal_form=span.normal_form, candidates=res.candidates))
            else:  # normal form without entries behaves like an unknown
                pending.append(AmbiguityItem(
                    item_id=0, nd=nd, nf=nf, nt=nt, surface=span.surface,
                    token_count=span.token_count,
                    normal_form=span.normal_form, candidates=()))
        for unk in result.unknown:
            pending.append(AmbiguityItem(
                item_id=0, nd=nd, nf=nf, nt=unk.index + 1,
                surface=unk.surface, token_count=1,
                normal_form=None, candidates=()))
    return DocumentAnalysis(nd, language, tuple(occurrences),
                            tuple(pending), len(phrases))


# --- co-occurrence statistics ---------------------------------------------


def distance(o1: Occurrence, o2: Occurrence) -> int:
    if o1.nd == o2.nd and o1.nf == o2.nf:
        return abs(o1.nt - o2.nt)
    return 0


def binding_force(o1: Occurrence, o2: Occurrence, t: int) -> float:
    if t < 1:
        raise IndexingError(f"window must be >= 1, got {t}")
    d = distance(o1, o2)
    if 0 < d <= t:
        return 1.0 / d
    return 0.0


def association(b: float, f: int, n: int) -> tuple[float, float]:
    """Correction factor and measure for accumulated (b, f)."""
    if f <= 0:
        return 0.0, 0.0
    k = ((f - 1) / f) ** n
    return k, k * b / f


def pair_statistics(occurrences: Iterable[Occurrence], lexicon: Lexicon,
                    n: int = 3) -> tuple[PairStats, ...]:
    if n < 1:
        raise IndexingError(f"n must be >= 1, got {n}")
    occs = list(occurrences)
    if not occs:
        return ()
    if len({o.nd for o in occs}) > 1:
        raise IndexingError("pair statistics are per document; "
                            "occurrences span several nd values")
    by_concept: dict[str, list[Occurrence]] = {}
    for o in occs:
        by_concept.setdefault(o.concept, []).append(o)

    stats: list[PairStats] = []
    for x, y in combinations(sorted(by_concept), 2):
        t = lexicon.pair_threshold(lexicon.concept_category(x),
                                   lexicon.concept_category(y))
        b = 0.0
        f = 0
        for ox in by_concept[x]:
            for oy in by_concept[y]:
                d = distance(ox, oy)
                if d > 0:
                    f += 1
                    if d <= t:
                        b += 1.0 / d
        if f > 0:
            k, m = association(b, f, n)
            stats.append(PairStats((x, y), b, f, k, m))
    stats.sort(key=lambda s: (-s.m, -s.b, s.pair))
    return tuple(stats)


def significant_terms(stats: Iterable[PairStats], theta: float) -> frozenset[str]:
    if theta <= 0:
        raise IndexingError(f"theta must be > 0, got {theta}")
    out = set()
    for s in stats:
        if s.m >= theta:
            out.update(s.pair)
    return frozenset(out)


def _fmt(value) -> str:
    if isinstance(value, int):
        return str(value)
    return f"{value:.2f}".rstrip("0").rstrip(".") or "0"


def format_stats_tsv(stats: Sequence[PairStats], lexicon: Lexicon | None = None,
                     language: str | None = None) -> str:
    """Rows mirror the association table: term1, term2, b, f, b/f, k, M."""

    def label(concept: str) -> str:
        if lexicon is not None and language is not None:
            try:
                return lexicon.representative(concept, language)[0]
            except Exception:
                return concept
        return concept

    lines = ["term1\tterm2\tb\tf\tb/f\tk\tM"]
    for s in stats:
        lines.append("\t".join([
            label(s.pair[0]), label(s.pair[1]),
            _fmt(s.b), _fmt(s.f), _fmt(s.b / s.f if s.f else 0.0),
            _fmt(s.k), _fmt(s.m),
        ]))
    return "\n".join(lines) + "\n"


# --- indexing ----------------------------------------------------------------


@dataclass(frozen=True)
class IndexParams:
    n: int = 3
    theta: float = 0.10
    cap: int = DEFAULT_CELL_CAP

    def __post_init__(self):
        if self.n < 1:
            raise IndexingError(f"n must be >= 1, got {self.n}")
        if self.theta <= 0:
            raise IndexingError(f"theta must be > 0, got {self.theta}")


@dataclass(frozen=True)
class DocumentStats:
    nd: int
    stats: tuple[PairStats, ...]
    significant: tuple[str, ...]


@dataclass(frozen=True)
class IndexingResult:
    documents: tuple[DocumentStats, ...]
    rectangles: tuple[Rectangle, ...]
    reports: tuple[InsertionReport, ...]


def index_documents(occurrences_by_doc: Mapping[int, Sequence[Occurrence]],
                    lexicon: Lexicon, params: IndexParams,
                    thesaurus: RectangularThesaurus | ThesaurusStore) -> IndexingResult:
    """Compute significant terms per document and insert rectangles.

    One document inserts its terms directly; several documents first
    decompose the combined term/document relation.
    """
    per_doc: list[DocumentStats] = []
    sig: dict[int, frozenset[str]] = {}
    for nd in sorted(occurrences_by_doc):
        stats = pair_statistics(occurrences_by_doc[nd], lexicon, params.n)
        terms = significant_terms(stats, params.theta)
        sig[nd] = terms
        per_doc.append(DocumentStats(nd, stats, tuple(sorted(terms))))

    if len(sig) == 1:
        (nd, terms), = sig.items()
        rects = (Rectangle(terms, {nd}),) if terms else ()
    else:
        pairs = [(c, nd) for nd, terms in sig.items() for c in terms]
        rects = decompose(BinaryRelation(pairs), params.cap) if pairs else ()

    def run(th: RectangularThesaurus) -> tuple[InsertionReport, ...]:
        return tuple(th.insert_rectangle(r) for r in rects)

    if isinstance(thesaurus, ThesaurusStore):
        reports = thesaurus.mutate(run)
    else:
        reports = run(thesaurus)
    return IndexingResult(tuple(per_doc), rects, reports)


# --- interactive sessions -----------------------------------------------------


@dataclass(frozen=True)
class SourceDocument:
    nd: int
    language: str
    text: str
    title: str | None = None
    uri: str | None = None


@dataclass(frozen=True)
class Resolution:
    concept: str | None        # None means discard
    context: str | None = None


class AmbiguitySession:
    """Holds analyzed documents until every ambiguity is settled.

    Phases move forward only: awaiting-resolutions -> committed.
    Resolving an item again before commit simply replaces the choice.
    """

    def __init__(self, documents: Sequence[SourceDocument], lexicon: Lexicon,
                 session_id: str | None = None):
        if not documents:
            raise IndexingError("a session needs at least one document")
        nds = [d.nd for d in documents]
        if len(nds) != len(set(nds)):
            raise IndexingError("duplicate document numbers in one session")
        self.id = session_id or uuid.uuid4().hex
        self.lexicon = lexicon
        self.documents = tuple(documents)
        self.phase = "awaiting-resolutions"
        self.result: IndexingResult | None = None
        self._items: dict[int, AmbiguityItem] = {}
        self._choices: dict[int, Resolution] = {}
        self.analyses: tuple[DocumentAnalysis, ...] = tuple(
            extract_occurrences(d.text, d.language, d.nd, lexicon)
            for d in documents)
        next_id = 1
        for analysis in self.analyses:
            for item in analysis.ambiguities:
                self._items[next_id] = replace(item, item_id=next_id)
                next_id += 1

    # --- inspection -------------------------------------------------

    @property
    def items(self) -> tuple[AmbiguityItem, ...]:
        return tuple(self._items[i] for i in sorted(self._items))

    @property
    def pending(self) -> tuple[AmbiguityItem, ...]:
        return tuple(self._items[i] for i in sorted(self._items)
                     if i not in self._choices)

    @property
    def resolved_count(self) -> int:
        return len(self._choices)

    def language_of(self, item: AmbiguityItem) -> str:
        for a in self.analyses:
            if a.nd == item.nd:
                return a.language
        raise UnknownItemError(item.item_id)

    # --- resolution --------------------------------------------------

    def resolve(self, item_id: int, *, context: str | None = None,
                concept: str | None = None, discard: bool = False,
                apply_to_all: bool = False) -> int:
        """Record one choice; returns how many items it settled."""
        if self.phase == "committed":
            raise SessionStateError("session already committed")
        item = self._items.get(item_id)
        if item is None:
            raise UnknownItemError(item_id)
        resolution = self._check_choice(item, context, concept, discard)
        touched = [item]
        if apply_to_all:
            touched.extend(
                other for i, other in sorted(self._items.items())
                if i != item_id and i not in self._choices
                and other.key == item.key
                and self.language_of(other) == self.language_of(item)
                and other.candidates == item.candidates)
        for t in touched:
            self._choices[t.item_id] = resolution
        return len(touched)

    def _check_choice(self, item: AmbiguityItem, context, concept,
                      discard) -> Resolution:
        given = sum(x is not None for x in (context, concept)) + bool(discard)
        if given != 1:
            raise InvalidResolutionError(
                "exactly one of context, concept or discard is required")
        if discard:
            return Resolution(None)
        if context is not None:
            for ctx, c in item.candidates:
                if ctx == context:
                    return Resolution(c, ctx)
            raise InvalidResolutionError(
                f"context {context!r} is not a candidate of item "
                f"{item.item_id} ({item.surface!r})")
        if item.candidates and concept not in {c for _, c in item.candidates}:
            raise InvalidResolutionError(
                f"concept {concept!r} is not a candidate of item "
                f"{item.item_id} ({item.surface!r})")
        return Resolution(concept)

    # --- commit -------------------------------------------------------

    def occurrences(self) -> dict[int, tuple[Occurrence, ...]]:
        if self.pending:
            raise PendingAmbiguities(len(self.pending), session_id=self.id)
        out: dict[int, list[Occurrence]] = {
            a.nd: list(a.occurrences) for a in self.analyses}
        for item_id, choice in self._choices.items():
            if choice.concept is None:
                continue
            item = self._items[item_id]
            out[item.nd].append(
                Occurrence(choice.concept, item.nd, item.nf, item.nt))
        return {nd: tuple(sorted(occs, key=lambda o: (o.nf, o.nt, o.concept)))
                for nd, occs in out.items()}

    def commit(self, store: ThesaurusStore | RectangularThesaurus,
               params: IndexParams) -> IndexingResult:
        if self.phase == "committed":
            return self.result
        occurrences = self.occurrences()

        def run(th: RectangularThesaurus) -> IndexingResult:
            for doc in self.documents:
                th.register_document(DocumentInfo(
                    id=doc.nd, uri=doc.uri, language=doc.language,
                    title=doc.title))
            return index_documents(occurrences, self.lexicon, params, th)

        if isinstance(store, ThesaurusStore):
            result = store.mutate(run)
        else:
            result = run(store)
        self.result = result
        self.phase = "committed"
        return result
