"""Leveled rectangle graph: the thesaurus proper.

Nodes are rectangles (concept set, document set) grouped by domain
cardinality.  Generic edges are the covering pairs of the leq order;
neighbor edges connect incomparable nodes sharing elements.  Two
virtual bounds frame the graph: the infimum (no concepts, every
document) and the supremum (every concept, no documents).

Insertion follows four steps: find or create the cardinality level,
merge into a domain-identical node if one exists, rewire hierarchy
edges, and absorb unseen concepts into the supremum; a node with no
generic below it other than the infimum is linked to the infimum.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    CyclicParentError,
    EmptyRectangleError,
    ThesaurusParseError,
    UnknownNodeError,
    VersionMismatchError,
)
from .relations import BinaryRelation, Rectangle, is_neighbor, leq

INFIMUM_ID = 0
SUPREMUM_ID = 1
FORMAT_NAME = "recthes-thesaurus"
SCHEMA_VERSION = 1

DIRECTIONS = ("generics", "specifics", "neighbors")


@dataclass(frozen=True)
class DocumentInfo:
    id: int
    uri: str | None = None
    language: str | None = None
    title: str | None = None


@dataclass(frozen=True)
class ThesaurusNode:
    id: int
    rectangle: Rectangle

    @property
    def level(self) -> int:
        return len(self.rectangle.domain)


@dataclass(frozen=True)
class InsertionReport:
    branch: str                 # "created" or "merged"
    node_id: int
    level: int
    created_level: bool
    added_concepts: tuple
    added_documents: tuple
    linked_to_infimum: bool


@dataclass(frozen=True)
class SimplifiedNode:
    id: int
    level: int
    parent: int
    added_terms: tuple
    removed_docs: tuple


@dataclass(frozen=True)
class SimplifiedThesaurus:
    concepts: tuple
    documents: tuple
    nodes: tuple              # SimplifiedNode, ordered by (level, id)
    generic_edges: tuple
    neighbor_edges: tuple
    registry: tuple           # DocumentInfo, ordered by id


def _domain_key(rect: Rectangle) -> tuple:
    return tuple(sorted(rect.domain))


class RectangularThesaurus:
    """Mutable thesaurus graph.  Not thread-safe; see ThesaurusStore."""

    def __init__(self):
        self.concepts: set[str] = set()
        self.documents: set[int] = set()
        self._nodes: dict[int, ThesaurusNode] = {}
        self.generic_edges: set[tuple[int, int]] = set()
        self.neighbor_edges: set[tuple[int, int]] = set()
        self.registry: dict[int, DocumentInfo] = {}
        self._next_id = 2
        self._rebuild_edges()

    # --- bounds and access ----------------------------------------

    def infimum_rectangle(self) -> Rectangle:
        return Rectangle((), self.documents)

    def supremum_rectangle(self) -> Rectangle:
        return Rectangle(self.concepts, ())

    def node(self, node_id: int) -> ThesaurusNode:
        if node_id == INFIMUM_ID:
            return ThesaurusNode(INFIMUM_ID, self.infimum_rectangle())
        if node_id == SUPREMUM_ID:
            return ThesaurusNode(SUPREMUM_ID, self.supremum_rectangle())
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownNodeError(node_id) from None

    def __contains__(self, node_id: int) -> bool:
        return node_id in (INFIMUM_ID, SUPREMUM_ID) or node_id in self._nodes

    def nodes(self) -> tuple[ThesaurusNode, ...]:
        """Non-bound nodes, ordered by (level, domain)."""
        return tuple(sorted(self._nodes.values(),
                            key=lambda n: (n.level, _domain_key(n.rectangle))))

    def levels(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for n in self.nodes():
            out.setdefault(n.level, []).append(n.id)
        return {lvl: tuple(ids) for lvl, ids in sorted(out.items())}

    def __len__(self) -> int:
        return len(self._nodes)

    # --- mutation ---------------------------------------------------

    def register_document(self, info: DocumentInfo) -> None:
        self.registry[info.id] = info
        self.documents.add(info.id)

    def insert_rectangle(self, rect: Rectangle) -> InsertionReport:
        if not rect.domain or not rect.codomain:
            raise EmptyRectangleError(
                "thesaurus rectangles need a nonempty domain and codomain")
        for c in rect.domain:
            if not isinstance(c, str):
                raise EmptyRectangleError(
                    f"concept ids must be strings, got {c!r}")
        for d in rect.codomain:
            if not isinstance(d, int) or isinstance(d, bool):
                raise EmptyRectangleError(
                    f"document ids must be integers, got {d!r}")

        added_concepts = tuple(sorted(rect.domain - self.concepts))
        added_documents = tuple(sorted(rect.codomain - self.documents))
        level = len(rect.domain)
        created_level = all(n.level != level for n in self._nodes.values())

        existing = None
        for n in self._nodes.values():
            if n.rectangle.domain == rect.domain:
                existing = n
                break

        if existing is not None:
            merged = Rectangle(existing.rectangle.domain,
                               existing.rectangle.codomain | rect.codomain)
            self._nodes[existing.id] = ThesaurusNode(existing.id, merged)
            branch, node_id = "merged", existing.id
            created_level = False
        else:
            node_id = self._next_id
            self._next_id += 1
            self._nodes[node_id] = ThesaurusNode(node_id, rect)
            branch = "created"

        self.concepts |= rect.domain
        self.documents |= rect.codomain
        self._rebuild_edges()

        return InsertionReport(
            branch=branch,
            node_id=node_id,
            level=level,
            created_level=created_level,
            added_concepts=added_concepts,
            added_documents=added_documents,
            linked_to_infimum=(INFIMUM_ID, node_id) in self.generic_edges,
        )

    def _rebuild_edges(self) -> None:
        # Bounds are below/above everything by fiat, which only matters
        # for the empty graph where their rectangles coincide.
        rects = {nid: n.rectangle for nid, n in self._nodes.items()}
        ids = [INFIMUM_ID, SUPREMUM_ID, *rects]

        def below(a: int, b: int) -> bool:
            if a == b or a == SUPREMUM_ID or b == INFIMUM_ID:
                return False
            if a == INFIMUM_ID or b == SUPREMUM_ID:
                return True
            ra, rb = rects[a], rects[b]
            return leq(ra, rb) and ra != rb

        self.generic_edges = {
            (a, b)
            for a in ids for b in ids
            if below(a, b) and not any(below(a, c) and below(c, b) for c in ids)
        }
        self.neighbor_edges = {
            (a, b)
            for a in rects for b in rects
            if a < b and is_neighbor(rects[a], rects[b])
        }

    # --- views ------------------------------------------------------

    def flatten(self) -> BinaryRelation:
        pairs = [(c, d)
                 for n in self._nodes.values()
                 for c in n.rectangle.domain
                 for d in n.rectangle.codomain]
        return BinaryRelation(pairs, self.concepts, self.documents)

    def navigate(self, node_id: int, direction: str) -> tuple[int, ...]:
        if node_id not in self:
            raise UnknownNodeError(node_id)
        if direction not in DIRECTIONS:
            raise ValueError(
                f"direction must be one of {DIRECTIONS}, got {direction!r}")
        if direction == "generics":
            found = {a for a, b in self.generic_edges if b == node_id}
        elif direction == "specifics":
            found = {b for a, b in self.generic_edges if a == node_id}
        else:
            found = {b for a, b in self.neighbor_edges if a == node_id}
            found |= {a for a, b in self.neighbor_edges if b == node_id}
        return tuple(sorted(
            found,
            key=lambda i: (self.node(i).level, _domain_key(self.node(i).rectangle), i)))

    # --- equality ----------------------------------------------------

    def structurally_equal(self, other: "RectangularThesaurus") -> bool:
        return (self.concepts == other.concepts
                and self.documents == other.documents
                and {i: n.rectangle for i, n in self._nodes.items()}
                == {i: n.rectangle for i, n in other._nodes.items()}
                and self.generic_edges == other.generic_edges
                and self.neighbor_edges == other.neighbor_edges
                and self.registry == other.registry)

    def __eq__(self, other):
        if not isinstance(other, RectangularThesaurus):
            return NotImplemented
        return self.structurally_equal(other)

    def structure_signature(self) -> tuple:
        """Id-free shape: rectangle set plus universes.

        Edges are a deterministic function of the rectangle set, so two
        thesauri with equal signatures have isomorphic graphs.
        """
        rects = frozenset(
            (tuple(sorted(n.rectangle.domain)), tuple(sorted(n.rectangle.codomain)))
            for n in self._nodes.values())
        return (tuple(sorted(self.concepts)),
                tuple(sorted(self.documents)),
                rects)

    # --- simplified form ---------------------------------------------

    def principal_parent(self, node_id: int) -> int:
        """The generic with the largest domain; ties break to the
        lexicographically smallest domain, then id."""
        preds = [a for a, b in self.generic_edges if b == node_id]
        if not preds:
            raise UnknownNodeError(node_id)
        return min(preds, key=lambda i: (-self.node(i).level,
                                         _domain_key(self.node(i).rectangle), i))

    def simplify(self) -> SimplifiedThesaurus:
        nodes = []
        for n in self.nodes():
            parent_id = self.principal_parent(n.id)
            parent = self.node(parent_id)
            added = tuple(sorted(n.rectangle.domain - parent.rectangle.domain))
            removed = tuple(sorted(parent.rectangle.codomain - n.rectangle.codomain))
            nodes.append(SimplifiedNode(
                id=n.id, level=n.level, parent=parent_id,
                added_terms=added, removed_docs=removed))
        return SimplifiedThesaurus(
            concepts=tuple(sorted(self.concepts)),
            documents=tuple(sorted(self.documents)),
            nodes=tuple(sorted(nodes, key=lambda s: (s.level, s.id))),
            generic_edges=tuple(sorted(self.generic_edges)),
            neighbor_edges=tuple(sorted(self.neighbor_edges)),
            registry=tuple(self.registry[i] for i in sorted(self.registry)),
        )

    # --- persistence ---------------------------------------------------

    def to_dict(self, simplified: bool = False) -> dict:
        docs = []
        for d in sorted(self.documents):
            info = self.registry.get(d)
            docs.append({
                "id": d,
                "uri": info.uri if info else None,
                "language": info.language if info else None,
                "title": info.title if info else None,
            })
        out = {
            "format": FORMAT_NAME,
            "version": SCHEMA_VERSION,
            "form": "simplified" if simplified else "full",
            "concepts": sorted(self.concepts),
            "documents": docs,
            "generic_edges": sorted([a, b] for a, b in self.generic_edges),
            "neighbor_edges": sorted([a, b] for a, b in self.neighbor_edges),
        }
        levels = []
        if simplified:
            simp = self.simplify()
            by_level: dict[int, list[SimplifiedNode]] = {}
            for s in simp.nodes:
                by_level.setdefault(s.level, []).append(s)
            for lvl in sorted(by_level):
                levels.append({
                    "cardinality": lvl,
                    "nodes": [{
                        "id": s.id,
                        "parent": s.parent,
                        "added_terms": list(s.added_terms),
                        "removed_docs": list(s.removed_docs),
                    } for s in sorted(by_level[lvl], key=lambda s: s.id)],
                })
        else:
            for lvl, ids in self.levels().items():
                levels.append({
                    "cardinality": lvl,
                    "nodes": [{
                        "id": i,
                        "domain": sorted(self._nodes[i].rectangle.domain),
                        "codomain": sorted(self._nodes[i].rectangle.codomain),
                    } for i in ids],
                })
        out["levels"] = levels
        return out

    def dumps(self, simplified: bool = False) -> str:
        return json.dumps(self.to_dict(simplified), ensure_ascii=False,
                          sort_keys=True, indent=2) + "\n"

    def save(self, path, simplified: bool = False) -> None:
        Path(path).write_text(self.dumps(simplified), encoding="utf-8")

    @classmethod
    def from_dict(cls, data: dict) -> "RectangularThesaurus":
        if not isinstance(data, dict):
            raise ThesaurusParseError("top-level value must be an object")
        if data.get("format") != FORMAT_NAME:
            raise ThesaurusParseError(
                f"unrecognized format {data.get('format')!r}")
        if data.get("version") != SCHEMA_VERSION:
            raise VersionMismatchError(
                f"unsupported thesaurus version {data.get('version')!r}, "
                f"expected {SCHEMA_VERSION}")
        form = data.get("form", "full")
        try:
            concepts = {str(c) for c in data["concepts"]}
            doc_entries = list(data["documents"])
            level_entries = list(data["levels"])
        except KeyError as e:
            raise ThesaurusParseError(f"missing field {e.args[0]!r}") from None

        th = cls()
        th.concepts = concepts
        for entry in doc_entries:
            did = entry["id"]
            if not isinstance(did, int):
                raise ThesaurusParseError(f"document id {did!r} is not an integer")
            th.documents.add(did)
            if any(entry.get(k) is not None for k in ("uri", "language", "title")):
                th.registry[did] = DocumentInfo(
                    id=did, uri=entry.get("uri"),
                    language=entry.get("language"), title=entry.get("title"))

        if form == "simplified":
            cls._load_simplified_nodes(th, level_entries)
        elif form == "full":
            cls._load_full_nodes(th, level_entries)
        else:
            raise ThesaurusParseError(f"unknown form {form!r}")

        th._next_id = max(th._nodes, default=1) + 1
        th._rebuild_edges()
        for key in ("generic_edges", "neighbor_edges"):
            stored = {tuple(e) for e in data.get(key, [])}
            if stored != getattr(th, key):
                raise ThesaurusParseError(
                    f"{key} do not match the stored rectangles")
        for n in th._nodes.values():
            if not n.rectangle.domain <= th.concepts:
                raise ThesaurusParseError(
                    f"node {n.id} uses concepts missing from the concept list")
            if not n.rectangle.codomain <= th.documents:
                raise ThesaurusParseError(
                    f"node {n.id} uses documents missing from the document list")
        return th

    @staticmethod
    def _load_full_nodes(th: "RectangularThesaurus", level_entries) -> None:
        for level in level_entries:
            card = level.get("cardinality")
            for nd in level.get("nodes", ()):
                nid = nd["id"]
                if not isinstance(nid, int) or nid < 2:
                    raise ThesaurusParseError(f"bad node id {nid!r}")
                if nid in th._nodes:
                    raise ThesaurusParseError(f"duplicate node id {nid}")
                rect = Rectangle(map(str, nd["domain"]), nd["codomain"])
                if len(rect.domain) != card:
                    raise ThesaurusParseError(
                        f"node {nid} domain size {len(rect.domain)} does not "
                        f"match level cardinality {card}")
                if any(n.rectangle.domain == rect.domain
                       for n in th._nodes.values()):
                    raise ThesaurusParseError(
                        f"node {nid} duplicates another node's domain")
                th._nodes[nid] = ThesaurusNode(nid, rect)

    @staticmethod
    def _load_simplified_nodes(th: "RectangularThesaurus", level_entries) -> None:
        raw = []
        for level in level_entries:
            card = level.get("cardinality")
            for nd in level.get("nodes", ()):
                raw.append((card, nd))
        raw.sort(key=lambda x: (x[0], x[1].get("id", 0)))
        for card, nd in raw:
            nid = nd["id"]
            if not isinstance(nid, int) or nid < 2:
                raise ThesaurusParseError(f"bad node id {nid!r}")
            if nid in th._nodes:
                raise ThesaurusParseError(f"duplicate node id {nid}")
            parent = nd["parent"]
            if parent == INFIMUM_ID:
                pdom, pcod = frozenset(), frozenset(th.documents)
            elif parent in th._nodes:
                prect = th._nodes[parent].rectangle
                pdom, pcod = prect.domain, prect.codomain
                if len(pdom) >= card:
                    raise CyclicParentError(
                        f"node {nid}: parent {parent} is not at a lower level")
            else:
                raise CyclicParentError(
                    f"node {nid}: parent {parent} not reconstructed yet "
                    "(forward or cyclic reference)")
            domain = pdom | {str(t) for t in nd["added_terms"]}
            codomain = pcod - set(nd["removed_docs"])
            if len(domain) != card:
                raise ThesaurusParseError(
                    f"node {nid} reconstructs to domain size {len(domain)}, "
                    f"expected cardinality {card}")
            th._nodes[nid] = ThesaurusNode(nid, Rectangle(domain, codomain))

    @classmethod
    def loads(cls, text: str) -> "RectangularThesaurus":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ThesaurusParseError(e.msg, line=e.lineno) from None
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "RectangularThesaurus":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


def reconstruct(simp: SimplifiedThesaurus) -> RectangularThesaurus:
    """Expand a simplified thesaurus back to full domains/codomains."""
    th = RectangularThesaurus()
    th.concepts = set(simp.concepts)
    th.documents = set(simp.documents)
    for info in simp.registry:
        th.registry[info.id] = info
    for s in sorted(simp.nodes, key=lambda s: (s.level, s.id)):
        if s.parent == INFIMUM_ID:
            pdom, pcod = frozenset(), frozenset(th.documents)
        elif s.parent in th._nodes:
            prect = th._nodes[s.parent].rectangle
            pdom, pcod = prect.domain, prect.codomain
            if len(pdom) >= s.level:
                raise CyclicParentError(
                    f"node {s.id}: parent {s.parent} is not at a lower level")
        else:
            raise CyclicParentError(
                f"node {s.id}: parent {s.parent} unavailable "
                "(forward or cyclic reference)")
        domain = pdom | set(s.added_terms)
        codomain = pcod - set(s.removed_docs)
        if len(domain) != s.level:
            raise CyclicParentError(
                f"node {s.id} reconstructs to level {len(domain)}, "
                f"stored level is {s.level}")
        th._nodes[s.id] = ThesaurusNode(s.id, Rectangle(domain, codomain))
    th._next_id = max(th._nodes, default=1) + 1
    th._rebuild_edges()
    return th


class ThesaurusStore:
    """Single-writer, multi-reader guard around one thesaurus.

    Mutations and reads run under one lock, so a reader always sees the
    state between mutations, never a half-applied insertion.
    """

    def __init__(self, thesaurus: RectangularThesaurus | None = None):
        self._th = thesaurus if thesaurus is not None else RectangularThesaurus()
        self._lock = threading.RLock()

    def read(self, fn):
        with self._lock:
            return fn(self._th)

    def mutate(self, fn):
        with self._lock:
            return fn(self._th)

    def insert_rectangle(self, rect: Rectangle) -> InsertionReport:
        return self.mutate(lambda th: th.insert_rectangle(rect))

    def register_document(self, info: DocumentInfo) -> None:
        self.mutate(lambda th: th.register_document(info))

    def save(self, path, simplified: bool = False) -> None:
        self.read(lambda th: th.save(path, simplified))

    @classmethod
    def load(cls, path) -> "ThesaurusStore":
        return cls(RectangularThesaurus.load(path))
