"""Dictionaries and the mapping from surface text to abstract concepts.

Per language three TSV files are loaded: lexical variations
(variant -> normal form), the main dictionary (normal form + context ->
concept, representative, category, related concepts), and stopwords.
Matching is case-folded; multi-token normal forms are found by
look-ahead with longest match winning.  Normalization precedence:
compound, then stopword, then variation, then single normal form;
anything left is an unknown token for the user to map or discard.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import (
    ConceptUnknownInLanguage,
    DictionaryParseError,
    InjectivityError,
    LexiconError,
    NoDictionaryForLanguage,
)

DEFAULT_CATEGORIES = ("noun", "adjective", "verb")
DEFAULT_DISTANCE = 5


@dataclass(frozen=True)
class VariationEntry:
    language: str
    variant: str
    normal_form: str


@dataclass(frozen=True)
class MainEntry:
    language: str
    normal_form: str
    context: str
    concept: str
    representative: str
    category: str
    related: tuple[str, ...] = ()


class DistMatrix:
    """Symmetric per-category-pair token window for the binding force."""

    def __init__(self, default: int = DEFAULT_DISTANCE,
                 overrides: Mapping[tuple[str, str], int] | None = None):
        if default < 1:
            raise LexiconError("distance matrix entries must be >= 1")
        self.default = default
        self._table: dict[tuple[str, str], int] = {}
        for (c1, c2), value in (overrides or {}).items():
            if value < 1:
                raise LexiconError("distance matrix entries must be >= 1")
            self._table[self._key(c1, c2)] = value

    @staticmethod
    def _key(c1: str, c2: str) -> tuple[str, str]:
        return (c1, c2) if c1 <= c2 else (c2, c1)

    def get(self, c1: str, c2: str) -> int:
        return self._table.get(self._key(c1, c2), self.default)


def pair_threshold(cat1: str, cat2: str, matrix: DistMatrix) -> int:
    return matrix.get(cat1, cat2)


# --- resolution outcomes (values, not exceptions) -----------------------


@dataclass(frozen=True)
class Resolved:
    concept: str
    entry: MainEntry


@dataclass(frozen=True)
class Ambiguous:
    normal_form: str
    candidates: tuple[tuple[str, str], ...]   # (context, concept), sorted


@dataclass(frozen=True)
class Unknown:
    normal_form: str


# --- normalization output ------------------------------------------------


@dataclass(frozen=True)
class TermSpan:
    normal_form: str
    start: int            # 0-based index into the raw token sequence
    token_count: int
    surface: str


@dataclass(frozen=True)
class UnknownToken:
    surface: str
    index: int


@dataclass(frozen=True)
class NormalizeResult:
    terms: tuple[TermSpan, ...]
    unknown: tuple[UnknownToken, ...]
    token_count: int

    @property
    def consumed(self) -> int:
        """Tokens accounted for by terms and unknowns (rest: stopwords)."""
        return sum(t.token_count for t in self.terms) + len(self.unknown)


# --- validation report ----------------------------------------------------


@dataclass(frozen=True)
class ValidationIssue:
    severity: str          # "error" | "warning"
    message: str
    path: str | None = None
    line: int | None = None


@dataclass
class ValidationReport:
    issues: list[ValidationIssue] = field(default_factory=list)

    @property
    def errors(self) -> list[ValidationIssue]:
        return [i for i in self.issues if i.severity == "error"]

    @property
    def warnings(self) -> list[ValidationIssue]:
        return [i for i in self.issues if i.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors


@dataclass(frozen=True)
class LanguagePaths:
    variations: Path
    main: Path
    stopwords: Path


class _LanguageLexicon:
    __slots__ = ("variations", "entries", "stopwords", "compounds",
                 "normal_forms")

    def __init__(self):
        self.variations: dict[str, str] = {}        # variant_cf -> normal form
        self.entries: dict[str, dict[str, MainEntry]] = {}  # nf_cf -> context -> entry
        self.stopwords: set[str] = set()
        # first-token_cf -> [(token_tuple_cf, normal form)], longest first
        self.compounds: dict[str, list[tuple[tuple[str, ...], str]]] = {}
        self.normal_forms: dict[str, str] = {}      # nf_cf -> original spelling

    def add_compound(self, tokens_cf: tuple[str, ...], normal_form: str) -> None:
        slot = self.compounds.setdefault(tokens_cf[0], [])
        item = (tokens_cf, normal_form)
        if item not in slot:
            slot.append(item)
            slot.sort(key=lambda t: (-len(t[0]), t[0]))


class Lexicon:
    """Immutable multi-language dictionary handle."""

    def __init__(self, languages: dict[str, _LanguageLexicon],
                 categories: Sequence[str], dist: DistMatrix):
        self._langs = languages
        self.categories = tuple(categories)
        self.dist = dist
        self.concepts = frozenset(
            e.concept
            for lang in languages.values()
            for ctxmap in lang.entries.values()
            for e in ctxmap.values())

    @property
    def languages(self) -> tuple[str, ...]:
        return tuple(sorted(self._langs))

    def _lang(self, language: str) -> _LanguageLexicon:
        try:
            return self._langs[language]
        except KeyError:
            raise NoDictionaryForLanguage(language) from None

    # --- normalization ------------------------------------------------

    def normalize(self, tokens: Sequence[str], language: str) -> NormalizeResult:
        lang = self._lang(language)
        cf = [t.casefold() for t in tokens]
        terms: list[TermSpan] = []
        unknown: list[UnknownToken] = []
        i = 0
        n = len(tokens)
        while i < n:
            matched = False
            for tup, nf in lang.compounds.get(cf[i], ()):
                k = len(tup)
                if i + k <= n and tuple(cf[i:i + k]) == tup:
                    terms.append(TermSpan(
                        normal_form=nf, start=i, token_count=k,
                        surface=" ".join(tokens[i:i + k])))
                    i += k
                    matched = True
                    break
            if matched:
                continue
            tok = cf[i]
            if tok in lang.stopwords:
                pass
            elif tok in lang.variations:
                terms.append(TermSpan(lang.variations[tok], i, 1, tokens[i]))
            elif tok in lang.normal_forms:
                terms.append(TermSpan(lang.normal_forms[tok], i, 1, tokens[i]))
            else:
                unknown.append(UnknownToken(tokens[i], i))
            i += 1
        return NormalizeResult(tuple(terms), tuple(unknown), n)

    # --- resolution ------------------------------------------------------

    def resolve(self, normal_form: str, language: str,
                context: str | None = None) -> Resolved | Ambiguous | Unknown:
        lang = self._lang(language)
        ctxmap = lang.entries.get(normal_form.casefold())
        if not ctxmap:
            return Unknown(normal_form)
        if context is not None:
            entry = ctxmap.get(context)
            if entry is None:
                return Unknown(normal_form)
            return Resolved(entry.concept, entry)
        if len(ctxmap) == 1:
            entry = next(iter(ctxmap.values()))
            return Resolved(entry.concept, entry)
        candidates = tuple(sorted(
            (ctx, e.concept) for ctx, e in ctxmap.items()))
        first = next(iter(sorted(ctxmap)))
        return Ambiguous(ctxmap[first].normal_form, candidates)

    def representative(self, concept: str, language: str) -> tuple[str, tuple[str, ...]]:
        lang = self._lang(language)
        best: MainEntry | None = None
        for nf_cf in sorted(lang.entries):
            for ctx in sorted(lang.entries[nf_cf]):
                e = lang.entries[nf_cf][ctx]
                if e.concept == concept:
                    best = e
                    break
            if best:
                break
        if best is None:
            raise ConceptUnknownInLanguage(concept, language)
        return best.representative, best.related

    def concept_category(self, concept: str) -> str:
        """Deterministic category for a concept: the category of its
        first entry by (language, normal form, context); concepts
        absent from every dictionary fall back to the first configured
        category."""
        for language in self.languages:
            lang = self._langs[language]
            for nf_cf in sorted(lang.entries):
                for ctx in sorted(lang.entries[nf_cf]):
                    e = lang.entries[nf_cf][ctx]
                    if e.concept == concept:
                        return e.category
        return self.categories[0]

    def pair_threshold(self, cat1: str, cat2: str) -> int:
        return pair_threshold(cat1, cat2, self.dist)

    def synonyms(self, concept: str, language: str) -> tuple[str, ...]:
        """All normal forms mapping to the concept in the language."""
        lang = self._lang(language)
        forms = {e.normal_form
                 for ctxmap in lang.entries.values()
                 for e in ctxmap.values() if e.concept == concept}
        return tuple(sorted(forms))


# --- loading ---------------------------------------------------------------


def _read_rows(path: Path, expected_cols: int, optional_tail: int = 0):
    """Yield (lineno, columns); editors often strip trailing tabs, so up
    to optional_tail missing trailing columns are padded with ''."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DictionaryParseError(str(e), path=path) from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        cols = raw.split("\t")
        if expected_cols - optional_tail <= len(cols) < expected_cols:
            cols = cols + [""] * (expected_cols - len(cols))
        if len(cols) != expected_cols:
            raise DictionaryParseError(
                f"expected {expected_cols} tab-separated columns, got {len(cols)}",
                path=path, line=lineno)
        yield lineno, [c.strip() for c in cols]


def load_dictionaries(paths: LanguagePaths, language: str,
                      categories: Sequence[str] = DEFAULT_CATEGORIES,
                      report: ValidationReport | None = None) -> _LanguageLexicon:
    """Load one language; structural problems raise, consistency
    problems accumulate in the report."""
    report = report if report is not None else ValidationReport()
    lang = _LanguageLexicon()

    for lineno, (row_lang, word) in _read_rows(paths.stopwords, 2):
        if row_lang != language:
            raise DictionaryParseError(
                f"row language {row_lang!r} does not match {language!r}",
                path=paths.stopwords, line=lineno)
        if not word:
            raise DictionaryParseError("empty stopword", path=paths.stopwords,
                                       line=lineno)
        lang.stopwords.add(word.casefold())

    for lineno, cols in _read_rows(paths.main, 7, optional_tail=1):
        row_lang, nf, context, concept, representative, category, related_csv = cols
        if row_lang != language:
            raise DictionaryParseError(
                f"row language {row_lang!r} does not match {language!r}",
                path=paths.main, line=lineno)
        if not nf or not context or not concept or not representative:
            raise DictionaryParseError(
                "normal_form, context, concept_id and representative are required",
                path=paths.main, line=lineno)
        if category not in categories:
            raise DictionaryParseError(
                f"category {category!r} not in configured set {tuple(categories)}",
                path=paths.main, line=lineno)
        related = tuple(r.strip() for r in related_csv.split(",") if r.strip())
        entry = MainEntry(language, nf, context, concept, representative,
                          category, related)
        nf_cf = nf.casefold()
        ctxmap = lang.entries.setdefault(nf_cf, {})
        if context in ctxmap:
            report.issues.append(ValidationIssue(
                "error",
                f"duplicate main entry ({language!r}, {nf!r}, {context!r})",
                path=str(paths.main), line=lineno))
            continue
        ctxmap[context] = entry
        lang.normal_forms.setdefault(nf_cf, nf)
        toks = tuple(nf_cf.split())
        if len(toks) > 1:
            lang.add_compound(toks, nf)

    for lineno, (row_lang, variant, nf) in _read_rows(paths.variations, 3):
        if row_lang != language:
            raise DictionaryParseError(
                f"row language {row_lang!r} does not match {language!r}",
                path=paths.variations, line=lineno)
        if not variant or not nf:
            raise DictionaryParseError("variant and normal_form are required",
                                       path=paths.variations, line=lineno)
        var_cf = variant.casefold()
        if var_cf in lang.variations:
            report.issues.append(ValidationIssue(
                "error",
                f"duplicate variation ({language!r}, {variant!r})",
                path=str(paths.variations), line=lineno))
            continue
        if nf.casefold() not in lang.normal_forms:
            report.issues.append(ValidationIssue(
                "warning",
                f"variation {variant!r} points at unlisted normal form {nf!r}",
                path=str(paths.variations), line=lineno))
        toks = tuple(var_cf.split())
        if len(toks) > 1:
            lang.add_compound(toks, lang.normal_forms.get(nf.casefold(), nf))
        else:
            lang.variations[var_cf] = lang.normal_forms.get(nf.casefold(), nf)

    overlap = lang.stopwords & (set(lang.variations) | set(lang.normal_forms))
    for word in sorted(overlap):
        report.issues.append(ValidationIssue(
            "warning",
            f"{word!r} is both a stopword and a dictionary form in "
            f"{language!r}; the stopword wins",
            path=str(paths.stopwords)))

    _check_injectivity(lang, language)
    return lang


def _check_injectivity(lang: _LanguageLexicon, language: str) -> None:
    # within one (language, context): representative <-> concept must be
    # one-to-one, or the canonical mapping is not a function into V
    per_context: dict[str, dict[str, str]] = {}
    reverse: dict[str, dict[str, str]] = {}
    for ctxmap in lang.entries.values():
        for ctx, e in ctxmap.items():
            rep_cf = e.representative.casefold()
            fwd = per_context.setdefault(ctx, {})
            if fwd.get(rep_cf, e.concept) != e.concept:
                raise InjectivityError(
                    f"({language!r}, {ctx!r}): representative "
                    f"{e.representative!r} maps to both {fwd[rep_cf]!r} "
                    f"and {e.concept!r}")
            fwd[rep_cf] = e.concept
            rev = reverse.setdefault(ctx, {})
            if rev.get(e.concept, rep_cf) != rep_cf:
                raise InjectivityError(
                    f"({language!r}, {ctx!r}): concept {e.concept!r} has "
                    f"two representatives, {rev[e.concept]!r} and "
                    f"{e.representative!r}")
            rev[e.concept] = rep_cf


def load_lexicon(languages: Mapping[str, LanguagePaths],
                 categories: Sequence[str] = DEFAULT_CATEGORIES,
                 dist: DistMatrix | None = None) -> tuple[Lexicon, ValidationReport]:
    report = ValidationReport()
    langs: dict[str, _LanguageLexicon] = {}
    for language in sorted(languages):
        langs[language] = load_dictionaries(
            languages[language], language, categories, report)

    lexicon = Lexicon(langs, categories, dist or DistMatrix())

    known = lexicon.concepts
    for language in sorted(langs):
        for ctxmap in langs[language].entries.values():
            for e in ctxmap.values():
                for rc in e.related:
                    if rc not in known:
                        report.issues.append(ValidationIssue(
                            "warning",
                            f"({language!r}, {e.normal_form!r}, {e.context!r}) "
                            f"lists unknown related concept {rc!r}"))
    return lexicon, report
