"""Command line entry point.

Subcommands cover the whole pipeline: dictionary validation, corpus
indexing (interactive or scripted), querying, the HTTP server, and
import/export of the thesaurus and per-document statistics.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import Config, find_config, load_config
from .errors import IndexingError, RecthesError
from .indexer import (
    AmbiguitySession,
    IndexParams,
    SourceDocument,
    extract_occurrences,
    format_stats_tsv,
    pair_statistics,
)
from .retrieval import match, representatives_for, resolve_query
from .thesaurus import RectangularThesaurus, ThesaurusStore


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="recthes",
        description="rectangular thesaurus indexing and retrieval")
    parser.add_argument("--config", metavar="FILE",
                        help="config file (default: $RECTHES_CONFIG "
                             "or ./recthes.json)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", help="index a corpus manifest")
    p.add_argument("manifest", help="TSV: doc_id, language, path, title")
    p.add_argument("--resolutions", metavar="FILE",
                   help="TSV of scripted ambiguity choices: "
                        "surface, language, context|concept|-")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("query", help="run a query against the thesaurus")
    p.add_argument("--lang", required=True)
    p.add_argument("terms", nargs="+")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host")
    p.add_argument("--port", type=int)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("thesaurus", help="export or import the thesaurus")
    tsub = p.add_subparsers(dest="thesaurus_command", required=True)
    pe = tsub.add_parser("export")
    pe.add_argument("--simplified", action="store_true")
    pe.add_argument("-o", "--output", metavar="FILE")
    pe.set_defaults(func=cmd_thesaurus_export)
    pi = tsub.add_parser("import")
    pi.add_argument("file")
    pi.set_defaults(func=cmd_thesaurus_import)

    p = sub.add_parser("dict", help="dictionary maintenance")
    dsub = p.add_subparsers(dest="dict_command", required=True)
    pv = dsub.add_parser("validate")
    pv.set_defaults(func=cmd_dict_validate)

    p = sub.add_parser("stats", help="per-document statistics")
    ssub = p.add_subparsers(dest="stats_command", required=True)
    pe = ssub.add_parser("export")
    pe.add_argument("doc", type=int, help="document id")
    pe.add_argument("--lang", help="label language (default: the document's)")
    pe.add_argument("--resolutions", metavar="FILE")
    pe.set_defaults(func=cmd_stats_export)

    return parser


def load(args) -> Config:
    return load_config(find_config(args.config))


def open_store(config: Config) -> ThesaurusStore:
    if config.thesaurus_path.is_file():
        return ThesaurusStore.load(config.thesaurus_path)
    return ThesaurusStore(RectangularThesaurus())


def read_manifest(path: Path) -> list[SourceDocument]:
    docs = []
    base = path.resolve().parent
    for lineno, raw in enumerate(
            path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) not in (3, 4):
            raise RecthesError(
                f"{path}:{lineno}: manifest rows need doc_id, language, "
                f"path and an optional title")
        try:
            nd = int(cols[0])
        except ValueError:
            raise RecthesError(f"{path}:{lineno}: bad document id {cols[0]!r}")
        doc_path = Path(cols[2])
        if not doc_path.is_absolute():
            doc_path = base / doc_path
        title = cols[3] if len(cols) == 4 else None
        docs.append(SourceDocument(
            nd, cols[1], doc_path.read_text(encoding="utf-8"),
            title=title, uri=str(doc_path.resolve())))
    if not docs:
        raise RecthesError(f"{path}: manifest lists no documents")
    return docs


def read_resolutions(path: Path) -> list[tuple[str, str, str]]:
    rows = []
    for lineno, raw in enumerate(
            path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise RecthesError(
                f"{path}:{lineno}: expected surface, language, choice")
        rows.append((cols[0], cols[1], cols[2]))
    return rows


def apply_resolutions(session: AmbiguitySession,
                      rows: list[tuple[str, str, str]]) -> None:
    """Scripted choices; every row is applied to all matching items."""
    for surface, language, choice in rows:
        key = surface.casefold()
        item = next(
            (i for i in session.pending
             if session.language_of(i) == language
             and (i.surface.casefold() == key or i.key == key)),
            None)
        if item is None:
            print(f"note: resolution for {surface!r} ({language}) "
                  f"matched no pending item", file=sys.stderr)
            continue
        if choice == "-":
            session.resolve(item.item_id, discard=True, apply_to_all=True)
        elif any(ctx == choice for ctx, _ in item.candidates):
            session.resolve(item.item_id, context=choice, apply_to_all=True)
        else:
            session.resolve(item.item_id, concept=choice, apply_to_all=True)


def prompt_resolutions(session: AmbiguitySession) -> None:
    """Walk pending items on a terminal.

    Answers: a candidate number, a concept id, or "d" to discard;
    append "!" to apply the choice to every matching pending item.
    """
    while session.pending:
        item = session.pending[0]
        language = session.language_of(item)
        print(f"\ndocument {item.nd}, phrase {item.nf}: "
              f"{item.surface!r} ({language})")
        for i, (ctx, concept) in enumerate(item.candidates, start=1):
            print(f"  [{i}] {ctx} -> {concept}")
        print("  [d] discard   [<concept-id>] map   (append ! for all)")
        answer = input("> ").strip()
        everywhere = answer.endswith("!")
        answer = answer.rstrip("!").strip()
        try:
            if answer == "d":
                session.resolve(item.item_id, discard=True,
                                apply_to_all=everywhere)
            elif answer.isdigit() and 1 <= int(answer) <= len(item.candidates):
                ctx = item.candidates[int(answer) - 1][0]
                session.resolve(item.item_id, context=ctx,
                                apply_to_all=everywhere)
            elif answer:
                session.resolve(item.item_id, concept=answer,
                                apply_to_all=everywhere)
        except RecthesError as e:
            print(f"  {e.message}", file=sys.stderr)


def cmd_index(args) -> int:
    config = load(args)
    lexicon, report = config.load_lexicon()
    if not report.ok:
        for issue in report.errors:
            print(f"error: {issue.message}", file=sys.stderr)
        return 1
    docs = read_manifest(Path(args.manifest))
    store = open_store(config)
    session = AmbiguitySession(docs, lexicon)

    if args.resolutions:
        apply_resolutions(session, read_resolutions(Path(args.resolutions)))
    if session.pending:
        if sys.stdin.isatty():
            prompt_resolutions(session)
        else:
            print(f"{len(session.pending)} ambiguity item(s) need "
                  f"resolution; pass --resolutions or run on a terminal:",
                  file=sys.stderr)
            for item in session.pending:
                cands = ", ".join(ctx for ctx, _ in item.candidates) or "none"
                print(f"  doc {item.nd} phrase {item.nf}: {item.surface!r} "
                      f"(candidates: {cands})", file=sys.stderr)
            return 1

    params = IndexParams(n=config.n, theta=config.theta, cap=config.cap)
    result = session.commit(store, params)
    config.data_dir.mkdir(parents=True, exist_ok=True)
    store.save(config.thesaurus_path)

    for doc in result.documents:
        terms = ", ".join(doc.significant) or "-"
        print(f"doc {doc.nd}: significant terms: {terms}")
    print(f"inserted {len(result.rectangles)} rectangle(s); "
          f"thesaurus saved to {config.thesaurus_path}")
    return 0


def cmd_query(args) -> int:
    config = load(args)
    lexicon, _ = config.load_lexicon()
    store = open_store(config)
    resolution = resolve_query(args.terms, args.lang, lexicon)
    if resolution.ambiguities:
        print("ambiguous query terms:", file=sys.stderr)
        for amb in resolution.ambiguities:
            options = ", ".join(
                f"{amb.surface}:{ctx}" for ctx, _ in amb.candidates)
            print(f"  {amb.surface!r}: retry with one of {options}",
                  file=sys.stderr)
        return 2
    query = resolution.require_query()
    result = store.read(lambda th: match(th, query))

    labels = representatives_for(
        sorted(set(query.concepts)
               | {c for r in result.rectangles for c in r.domain}),
        lexicon, args.lang)
    print("concepts: " + ", ".join(
        f"{labels[c]} ({c})" for c in sorted(query.concepts)))
    if resolution.unknown:
        print("unknown terms: " + ", ".join(resolution.unknown))
    if not result.rectangles:
        print("no matching rectangle; broaden the query")
        return 0
    for hit in result.rectangles:
        feedback = ", ".join(labels[c] for c in hit.feedback) or "-"
        docs = ", ".join(str(d) for d in hit.documents)
        print(f"node {hit.node_id}: docs: {docs} | feedback: {feedback}")
    print("documents: " + " ".join(str(d) for d in result.documents))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    config = load(args)
    app = create_app(config)
    host = args.host or config.listen.host
    port = args.port if args.port is not None else config.listen.port
    uvicorn.run(app, host=host, port=port, log_level="info")
    return 0


def cmd_thesaurus_export(args) -> int:
    config = load(args)
    store = open_store(config)
    text = store.read(lambda th: th.dumps(simplified=args.simplified))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def cmd_thesaurus_import(args) -> int:
    config = load(args)
    th = RectangularThesaurus.load(Path(args.file))
    config.data_dir.mkdir(parents=True, exist_ok=True)
    th.save(config.thesaurus_path)
    print(f"imported {len(th.nodes())} node(s), "
          f"{len(th.documents)} document(s)")
    return 0


def cmd_dict_validate(args) -> int:
    config = load(args)
    _, report = config.load_lexicon()
    for issue in report.issues:
        where = f" ({issue.path}:{issue.line})" if issue.path else ""
        print(f"{issue.severity}: {issue.message}{where}")
    print(f"{len(report.errors)} error(s), {len(report.warnings)} warning(s)")
    return 0 if report.ok else 1


def cmd_stats_export(args) -> int:
    config = load(args)
    lexicon, _ = config.load_lexicon()
    store = open_store(config)
    info = store.read(lambda th: th.registry.get(args.doc))
    if info is None:
        raise IndexingError(f"document {args.doc} is not in the registry")
    if not info.uri:
        raise IndexingError(f"document {args.doc} has no stored path")
    text = Path(info.uri).read_text(encoding="utf-8")
    analysis = extract_occurrences(text, info.language, args.doc, lexicon)

    occurrences = list(analysis.occurrences)
    if analysis.ambiguities:
        session = AmbiguitySession(
            [SourceDocument(args.doc, info.language, text)], lexicon)
        if args.resolutions:
            apply_resolutions(session,
                              read_resolutions(Path(args.resolutions)))
        for item in session.pending:
            print(f"note: discarding unresolved {item.surface!r} "
                  f"(doc {item.nd}, phrase {item.nf})", file=sys.stderr)
            session.resolve(item.item_id, discard=True)
        occurrences = list(session.occurrences()[args.doc])

    stats = pair_statistics(occurrences, lexicon, config.n)
    sys.stdout.write(format_stats_tsv(stats, lexicon,
                                      args.lang or info.language))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RecthesError as e:
        print(f"error: {e.message}", file=sys.stderr)
        return 1
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
