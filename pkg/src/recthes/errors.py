"""Exception hierarchy shared across the package.

Every error that can cross the CLI or HTTP boundary carries a stable
machine-readable ``code`` so front ends never have to parse messages.
"""

from __future__ import annotations


class RecthesError(Exception):
    """Base class for all package-specific errors."""

    code = "internal_error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details


# --- relations ---------------------------------------------------------


class RelationError(RecthesError):
    code = "relation_error"


class InvalidRectangleError(RelationError):
    """A claimed rectangle has cells outside the relation."""

    code = "invalid_rectangle"


class ElementNotInRelationError(RelationError):
    """An element or pair was expected inside the relation but is not."""

    code = "element_not_in_relation"


class EnumerationCapExceeded(RelationError):
    """Relation too large for exact maximal-rectangle enumeration."""

    code = "enumeration_cap_exceeded"

    def __init__(self, cells: int, cap: int):
        super().__init__(
            f"relation has {cells} cells, exceeding the enumeration cap of {cap}",
            cells=cells,
            cap=cap,
        )
        self.cells = cells
        self.cap = cap


# --- thesaurus ---------------------------------------------------------


class ThesaurusError(RecthesError):
    code = "thesaurus_error"


class EmptyRectangleError(ThesaurusError):
    """Rectangles stored in a thesaurus need both sides nonempty."""

    code = "empty_rectangle"


class UnknownNodeError(ThesaurusError):
    code = "unknown_node"

    def __init__(self, node_id):
        super().__init__(f"no thesaurus node with id {node_id!r}", node_id=node_id)
        self.node_id = node_id


class ThesaurusParseError(ThesaurusError):
    """Persisted thesaurus file is malformed."""

    code = "thesaurus_parse_error"

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, line=line)
        self.line = line


class VersionMismatchError(ThesaurusError):
    code = "version_mismatch"


class CyclicParentError(ThesaurusError):
    """Simplified representation has an unusable principal-parent chain."""

    code = "cyclic_parent"


# --- lexicon -----------------------------------------------------------


class LexiconError(RecthesError):
    code = "lexicon_error"


class DictionaryParseError(LexiconError):
    code = "dictionary_parse_error"

    def __init__(self, message: str, path=None, line: int | None = None):
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where = f"{where}{line}:"
        if where:
            message = f"{where} {message}"
        super().__init__(message, path=str(path) if path else None, line=line)
        self.path = path
        self.line = line


class InjectivityError(LexiconError):
    """Representative assignment for a language is not one-to-one."""

    code = "injectivity_violation"


class NoDictionaryForLanguage(LexiconError):
    code = "no_dictionary_for_language"

    def __init__(self, language: str):
        super().__init__(f"no dictionary configured for language {language!r}",
                         language=language)
        self.language = language


class ConceptUnknownInLanguage(LexiconError):
    code = "concept_unknown_in_language"

    def __init__(self, concept: str, language: str):
        super().__init__(
            f"concept {concept!r} has no entry in language {language!r}",
            concept=concept, language=language,
        )
        self.concept = concept
        self.language = language


# --- indexing / sessions ----------------------------------------------


class IndexingError(RecthesError):
    code = "indexing_error"


class PendingAmbiguities(IndexingError):
    """Commit attempted while ambiguity items are still unresolved."""

    code = "pending_ambiguities"

    def __init__(self, count: int, session_id: str | None = None):
        details = {"count": count}
        if session_id is not None:
            details["session_id"] = session_id
        super().__init__(f"{count} ambiguity item(s) still unresolved", **details)
        self.count = count
        self.session_id = session_id


class UnknownSessionError(IndexingError):
    code = "unknown_session"

    def __init__(self, session_id: str):
        super().__init__(f"no session with id {session_id!r}", session_id=session_id)
        self.session_id = session_id


class UnknownItemError(IndexingError):
    code = "unknown_item"

    def __init__(self, item_id):
        super().__init__(f"no ambiguity item with id {item_id!r}", item_id=item_id)
        self.item_id = item_id


class InvalidResolutionError(IndexingError):
    code = "invalid_resolution"


class SessionStateError(IndexingError):
    """Operation not valid in the session's current phase."""

    code = "session_state"


# --- retrieval ---------------------------------------------------------


class RetrievalError(RecthesError):
    code = "retrieval_error"


class EmptyQueryError(RetrievalError):
    """No query term resolved to a concept."""

    code = "empty_query"


class AmbiguousQueryError(RetrievalError):
    """Query terms need a context choice before matching can run."""

    code = "ambiguous_query"

    def __init__(self, message: str, ambiguities=()):
        super().__init__(message, ambiguities=list(ambiguities))
        self.ambiguities = list(ambiguities)


class TermNotInQueryError(RetrievalError):
    code = "term_not_in_query"


# --- config ------------------------------------------------------------


class ConfigError(RecthesError):
    code = "config_error"
