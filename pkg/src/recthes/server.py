"""HTTP service.

One process serves indexing sessions, thesaurus browsing and queries;
the browser UI is a static mount consuming the same endpoints the
tests and the CLI use.  Mutations go through the thesaurus store, so
concurrent queries read consistent snapshots.  Every response body
carries ``schema_version``; errors come back as a ``code`` plus a
human-readable message.
"""

from __future__ import annotations

import re
import threading
from pathlib import Path

from fastapi import FastAPI, Query as QueryParam, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .config import Config
from .errors import (
    ConceptUnknownInLanguage,
    IndexingError,
    NoDictionaryForLanguage,
    PendingAmbiguities,
    RecthesError,
    SessionStateError,
    UnknownItemError,
    UnknownNodeError,
    UnknownSessionError,
)
from .indexer import AmbiguitySession, IndexParams, SourceDocument
from .retrieval import match, representatives_for, resolve_query
from .thesaurus import RectangularThesaurus, ThesaurusStore

SCHEMA_VERSION = 1

_NOT_FOUND = (UnknownSessionError, UnknownItemError, UnknownNodeError,
              ConceptUnknownInLanguage, NoDictionaryForLanguage)
_CONFLICT = (PendingAmbiguities, SessionStateError)


class DocumentIn(BaseModel):
    language: str
    text: str
    id: int | None = None
    title: str | None = None
    uri: str | None = None


class SessionCreate(BaseModel):
    documents: list[DocumentIn] = Field(min_length=1)


class ResolutionIn(BaseModel):
    item_id: int
    context: str | None = None
    concept: str | None = None
    discard: bool = False
    apply_to_all: bool = False


class ResolutionsIn(BaseModel):
    resolutions: list[ResolutionIn] = Field(min_length=1)


def _status_for(exc: RecthesError) -> int:
    if isinstance(exc, _CONFLICT):
        return 409
    if isinstance(exc, _NOT_FOUND):
        return 404
    return 400


def _session_body(sess: AmbiguitySession) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "session": {
            "id": sess.id,
            "phase": sess.phase,
            "documents": [
                {"id": d.nd, "language": d.language, "title": d.title}
                for d in sess.documents],
            "items": len(sess.items),
            "pending": len(sess.pending),
            "resolved": sess.resolved_count,
        },
    }


def _commit_body(sess: AmbiguitySession) -> dict:
    result = sess.result
    return {
        "schema_version": SCHEMA_VERSION,
        "session_id": sess.id,
        "phase": sess.phase,
        "reports": [
            {"branch": r.branch, "node_id": r.node_id, "level": r.level,
             "created_level": r.created_level}
            for r in result.reports],
        "rectangles": [
            {"domain": sorted(r.domain), "documents": sorted(r.codomain)}
            for r in result.rectangles],
        "documents": [
            {"id": d.nd, "significant": list(d.significant)}
            for d in result.documents],
    }


def create_app(config: Config) -> FastAPI:
    lexicon, report = config.load_lexicon()
    if not report.ok:
        first = report.errors[0]
        raise IndexingError(f"dictionary validation failed: {first.message}")

    config.data_dir.mkdir(parents=True, exist_ok=True)
    if config.thesaurus_path.is_file():
        store = ThesaurusStore.load(config.thesaurus_path)
    else:
        store = ThesaurusStore(RectangularThesaurus())

    app = FastAPI(title="recthes", docs_url=None, redoc_url=None)
    app.state.config = config
    app.state.lexicon = lexicon
    app.state.store = store
    app.state.sessions = {}
    app.state.params = IndexParams(n=config.n, theta=config.theta,
                                   cap=config.cap)
    ids_lock = threading.Lock()

    @app.exception_handler(RecthesError)
    async def on_domain_error(request: Request, exc: RecthesError):
        return JSONResponse(
            status_code=_status_for(exc),
            content={
                "schema_version": SCHEMA_VERSION,
                "error": {"code": exc.code, "message": exc.message,
                          "details": exc.details},
            })

    @app.exception_handler(RequestValidationError)
    async def on_bad_request(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={
                "schema_version": SCHEMA_VERSION,
                "error": {"code": "malformed_body",
                          "message": "request did not validate",
                          "details": {"errors": [
                              {"loc": [str(p) for p in e["loc"]],
                               "msg": e["msg"]}
                              for e in exc.errors()]}},
            })

    def get_session(session_id: str) -> AmbiguitySession:
        sess = app.state.sessions.get(session_id)
        if sess is None:
            raise UnknownSessionError(session_id)
        return sess

    def assign_ids(docs: list[DocumentIn]) -> list[SourceDocument]:
        with ids_lock:
            taken = store.read(lambda th: set(th.documents)
                               | set(th.registry))
            for sess in app.state.sessions.values():
                taken.update(d.nd for d in sess.documents)
            out = []
            for doc in docs:
                if doc.language not in lexicon.languages:
                    raise NoDictionaryForLanguage(doc.language)
                nd = doc.id
                if nd is not None:
                    if nd < 1:
                        raise IndexingError(
                            f"document ids are positive, got {nd}")
                    if nd in taken:
                        raise IndexingError(
                            f"document id {nd} is already in use",
                            document=nd)
                else:
                    nd = max(taken, default=0) + 1
                taken.add(nd)
                out.append(SourceDocument(nd, doc.language, doc.text,
                                          title=doc.title, uri=doc.uri))
            return out

    # --- sessions -----------------------------------------------------

    @app.post("/sessions", status_code=201)
    def create_session(body: SessionCreate):
        docs = assign_ids(body.documents)
        sess = AmbiguitySession(docs, lexicon)
        app.state.sessions[sess.id] = sess
        return _session_body(sess)

    @app.get("/sessions/{session_id}")
    def session_state(session_id: str):
        return _session_body(get_session(session_id))

    @app.get("/sessions/{session_id}/ambiguities")
    def session_ambiguities(session_id: str):
        sess = get_session(session_id)
        items = []
        for item in sess.pending:
            language = sess.language_of(item)
            labels = representatives_for(
                [c for _, c in item.candidates], lexicon, language)
            items.append({
                "item_id": item.item_id,
                "document": item.nd,
                "phrase": item.nf,
                "position": item.nt,
                "surface": item.surface,
                "normal_form": item.normal_form,
                "language": language,
                "candidates": [
                    {"context": ctx, "concept": c,
                     "representative": labels[c]}
                    for ctx, c in item.candidates],
            })
        return {"schema_version": SCHEMA_VERSION, "session_id": sess.id,
                "pending": items, "resolved": sess.resolved_count}

    @app.post("/sessions/{session_id}/resolutions")
    def post_resolutions(session_id: str, body: ResolutionsIn):
        sess = get_session(session_id)
        settled = 0
        for r in body.resolutions:
            settled += sess.resolve(
                r.item_id, context=r.context, concept=r.concept,
                discard=r.discard, apply_to_all=r.apply_to_all)
        return {"schema_version": SCHEMA_VERSION, "session_id": sess.id,
                "settled": settled, "pending": len(sess.pending),
                "resolved": sess.resolved_count}

    @app.post("/sessions/{session_id}/commit")
    def commit_session(session_id: str):
        sess = get_session(session_id)
        already = sess.phase == "committed"
        sess.commit(store, app.state.params)
        if not already:
            store.save(config.thesaurus_path)
        return _commit_body(sess)

    # --- thesaurus and queries -----------------------------------------

    @app.get("/thesaurus")
    def thesaurus_view(lang: str):
        if lang not in lexicon.languages:
            raise NoDictionaryForLanguage(lang)
        simp = store.read(lambda th: th.simplify())
        labels = representatives_for(simp.concepts, lexicon, lang)
        levels: dict[int, list[dict]] = {}
        for node in simp.nodes:
            levels.setdefault(node.level, []).append({
                "id": node.id,
                "parent": node.parent,
                "added_terms": [
                    {"concept": c, "representative": labels[c]}
                    for c in node.added_terms],
                "removed_docs": list(node.removed_docs),
            })
        return {
            "schema_version": SCHEMA_VERSION,
            "language": lang,
            "levels": [
                {"level": lvl, "nodes": levels[lvl]}
                for lvl in sorted(levels)],
            "documents": [
                {"id": d.id, "language": d.language, "title": d.title,
                 "uri": d.uri}
                for d in simp.registry],
        }

    @app.get("/query")
    def run_query(lang: str, terms: list[str] = QueryParam(default=[])):
        split = [t for raw in terms for t in re.split(r",", raw)
                 if t.strip()]
        resolution = resolve_query(split, lang, lexicon)
        query = resolution.require_query()
        result = store.read(lambda th: match(th, query))
        mentioned = set(query.concepts)
        for hit in result.rectangles:
            mentioned.update(hit.domain)
        labels = representatives_for(sorted(mentioned), lexicon, lang)
        return {
            "schema_version": SCHEMA_VERSION,
            "language": lang,
            "concepts": sorted(query.concepts),
            "unknown": list(resolution.unknown),
            "labels": labels,
            "rectangles": [
                {"node_id": r.node_id, "domain": list(r.domain),
                 "documents": list(r.documents),
                 "feedback": list(r.feedback)}
                for r in result.rectangles],
            "documents": list(result.documents),
        }

    @app.get("/concepts/{concept}")
    def concept_view(concept: str, lang: str):
        display, related = lexicon.representative(concept, lang)
        labels = representatives_for(related, lexicon, lang)
        return {
            "schema_version": SCHEMA_VERSION,
            "concept": concept,
            "language": lang,
            "representative": display,
            "category": lexicon.concept_category(concept),
            "synonyms": list(lexicon.synonyms(concept, lang)),
            "related": [
                {"concept": c, "representative": labels[c]}
                for c in related],
        }

    frontend = config.frontend_dir
    if frontend is not None and Path(frontend).is_dir():
        app.mount("/", StaticFiles(directory=frontend, html=True),
                  name="frontend")

    return app
