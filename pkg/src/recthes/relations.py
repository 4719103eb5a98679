"""Binary relations and their decomposition into gain-optimal rectangles.

A rectangle of a relation R ⊆ E×G is a pair of sets (A, B) with A×B ⊆ R.
Maximal rectangles (no strict product superset inside R) are exactly the
formal concepts of R with both sides nonempty.  The decomposition keeps,
for every pair of R, the maximal rectangle of highest gain that covers
it, where gain(A, B) = |A|·|B| - (|A| + |B|).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import (
    ElementNotInRelationError,
    EnumerationCapExceeded,
    InvalidRectangleError,
    RelationError,
)

# Exact enumeration is intentionally desk-scale; larger relations must be
# split upstream rather than silently approximated.
DEFAULT_CELL_CAP = 4096

# Pathological dense relations can hold exponentially many maximal
# rectangles even under the cell cap; fail loudly instead of hanging.
_CONCEPT_GUARD = 1 << 17


def _sort_key(values: Iterable) -> tuple:
    return tuple(sorted(values, key=lambda v: (str(type(v).__name__), str(v), repr(v))))


@dataclass(frozen=True)
class Rectangle:
    """A pair of sets; only meaningful relative to some relation."""

    domain: frozenset
    codomain: frozenset

    def __init__(self, domain: Iterable, codomain: Iterable):
        object.__setattr__(self, "domain", frozenset(domain))
        object.__setattr__(self, "codomain", frozenset(codomain))

    @property
    def cells(self) -> int:
        return len(self.domain) * len(self.codomain)

    @property
    def gain(self) -> int:
        return self.cells - (len(self.domain) + len(self.codomain))

    def sort_key(self) -> tuple:
        return (_sort_key(self.domain), _sort_key(self.codomain))

    def pairs(self) -> frozenset:
        return frozenset((a, b) for a in self.domain for b in self.codomain)

    def __repr__(self):
        doms = "{%s}" % ", ".join(map(repr, _sort_key(self.domain)))
        cods = "{%s}" % ", ".join(map(repr, _sort_key(self.codomain)))
        return f"Rectangle({doms}, {cods})"


def gain(rect: Rectangle) -> int:
    return rect.gain


class BinaryRelation:
    """Finite binary relation with explicit universes on both sides.

    Universes may be larger than the support of the pair set; isolated
    elements matter for bounds and for the exchange format.
    """

    __slots__ = ("pairs", "left_universe", "right_universe", "_rows", "_cols")

    def __init__(self, pairs: Iterable[tuple], left: Iterable = (), right: Iterable = ()):
        pairset = frozenset((a, b) for a, b in pairs)
        left_u = frozenset(left) | frozenset(a for a, _ in pairset)
        right_u = frozenset(right) | frozenset(b for _, b in pairset)
        object.__setattr__(self, "pairs", pairset)
        object.__setattr__(self, "left_universe", left_u)
        object.__setattr__(self, "right_universe", right_u)
        rows: dict = {a: set() for a in left_u}
        cols: dict = {b: set() for b in right_u}
        for a, b in pairset:
            rows[a].add(b)
            cols[b].add(a)
        object.__setattr__(self, "_rows", {a: frozenset(s) for a, s in rows.items()})
        object.__setattr__(self, "_cols", {b: frozenset(s) for b, s in cols.items()})

    def __setattr__(self, name, value):
        raise AttributeError("BinaryRelation is immutable")

    @classmethod
    def from_mapping(cls, mapping: Mapping, left: Iterable = (), right: Iterable = ()) -> "BinaryRelation":
        pairs = [(a, b) for a, bs in mapping.items() for b in bs]
        lefts = set(left) | set(mapping.keys())
        return cls(pairs, lefts, right)

    def rights_of(self, a) -> frozenset:
        if a not in self.left_universe:
            raise ElementNotInRelationError(f"{a!r} is not a left element of the relation")
        return self._rows[a]

    def lefts_of(self, b) -> frozenset:
        if b not in self.right_universe:
            raise ElementNotInRelationError(f"{b!r} is not a right element of the relation")
        return self._cols[b]

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinaryRelation):
            return NotImplemented
        return (self.pairs == other.pairs
                and self.left_universe == other.left_universe
                and self.right_universe == other.right_universe)

    def __hash__(self):
        return hash((self.pairs, self.left_universe, self.right_universe))

    @property
    def cell_count(self) -> int:
        return len(self.left_universe) * len(self.right_universe)

    def __repr__(self):
        return (f"BinaryRelation({len(self.pairs)} pairs, "
                f"{len(self.left_universe)}x{len(self.right_universe)})")


def is_rectangle(rel: BinaryRelation, rect: Rectangle) -> bool:
    """True when every cell of rect lies inside rel.

    Sides must be drawn from the relation's universes; an empty side
    makes the product empty, hence trivially a rectangle.
    """
    if not rect.domain <= rel.left_universe or not rect.codomain <= rel.right_universe:
        return False
    return all(rect.codomain <= rel.rights_of(a) for a in rect.domain)


def is_maximal(rel: BinaryRelation, rect: Rectangle) -> bool:
    """True when no other rectangle's cell set strictly contains rect's.

    For rectangles with both sides nonempty this reduces to: no single
    element can be added to either side.  A rectangle with an empty side
    has an empty cell set, so it is maximal only in the degenerate empty
    relation over empty universes.
    """
    if not is_rectangle(rel, rect):
        raise InvalidRectangleError(
            f"{rect!r} is not a rectangle of the relation")
    if not rect.domain or not rect.codomain:
        return not rel.left_universe and not rel.right_universe
    for a in rel.left_universe - rect.domain:
        if rect.codomain <= rel.rights_of(a):
            return False
    for b in rel.right_universe - rect.codomain:
        if rect.domain <= rel.lefts_of(b):
            return False
    return True


def maximal_rectangles(rel: BinaryRelation, cap: int = DEFAULT_CELL_CAP) -> tuple[Rectangle, ...]:
    """Enumerate every maximal rectangle of rel, exactly.

    Works by closing the set of row codomains under intersection; each
    distinct nonempty closure is the codomain of exactly one maximal
    rectangle.  Refuses relations above `cap` cells.
    """
    if rel.cell_count > cap:
        raise EnumerationCapExceeded(rel.cell_count, cap)

    rights = _sort_key(rel.right_universe)
    bit_of = {b: 1 << i for i, b in enumerate(rights)}
    row_masks = {}
    for a in rel.left_universe:
        mask = 0
        for b in rel._rows[a]:
            mask |= bit_of[b]
        row_masks[a] = mask

    generators = [m for m in row_masks.values() if m]
    intents: set[int] = set()
    frontier = set(generators)
    while frontier:
        intents |= frontier
        if len(intents) > _CONCEPT_GUARD:
            raise RelationError(
                f"relation has more than {_CONCEPT_GUARD} maximal rectangles; "
                "refusing exact enumeration")
        nxt = set()
        for m in frontier:
            for g in generators:
                c = m & g
                if c and c not in intents:
                    nxt.add(c)
        frontier = nxt - intents

    out = []
    for intent in intents:
        extent = frozenset(a for a, m in row_masks.items() if m & intent == intent)
        codomain = frozenset(b for b in rel.right_universe if bit_of[b] & intent)
        # distinct intents can share an extent; only the intersection of
        # the extent's rows is the true codomain of the concept
        full = intent
        for a in extent:
            full &= row_masks[a]
        if full != intent:
            continue
        out.append(Rectangle(extent, codomain))
    out.sort(key=Rectangle.sort_key)
    return tuple(out)


def optimal_rectangle(rel: BinaryRelation, pair: tuple, cap: int = DEFAULT_CELL_CAP) -> Rectangle:
    """The highest-gain maximal rectangle covering the given pair.

    Ties break toward the larger domain, then the lexicographically
    smallest domain, so the result is deterministic.
    """
    if pair not in rel.pairs:
        raise ElementNotInRelationError(f"pair {pair!r} is not in the relation")
    a, b = pair
    best = None
    best_key = None
    for rect in maximal_rectangles(rel, cap):
        if a in rect.domain and b in rect.codomain:
            key = (-rect.gain, -len(rect.domain), _sort_key(rect.domain))
            if best is None or key < best_key:
                best, best_key = rect, key
    if best is None:  # unreachable: the pair's own row closure covers it
        raise RelationError(f"no maximal rectangle covers {pair!r}")
    return best


def decompose(rel: BinaryRelation, cap: int = DEFAULT_CELL_CAP) -> tuple[Rectangle, ...]:
    """Minimal deterministic cover of rel by gain-optimal rectangles.

    Every pair contributes its optimal rectangle; duplicates collapse.
    Output order: gain desc, cell count desc, then lexicographic sides.
    """
    if rel.cell_count > cap:
        raise EnumerationCapExceeded(rel.cell_count, cap)
    if not rel.pairs:
        return ()

    maximal = maximal_rectangles(rel, cap)
    chosen: dict[Rectangle, None] = {}
    for pair in rel.pairs:
        a, b = pair
        best = None
        best_key = None
        for rect in maximal:
            if a in rect.domain and b in rect.codomain:
                key = (-rect.gain, -len(rect.domain), _sort_key(rect.domain))
                if best is None or key < best_key:
                    best, best_key = rect, key
        chosen[best] = None
    out = sorted(chosen, key=lambda r: (-r.gain, -r.cells) + r.sort_key())
    return tuple(out)


def leq(first: Rectangle, second: Rectangle) -> bool:
    """Thesaurus order: smaller domain, larger codomain."""
    return first.domain <= second.domain and second.codomain <= first.codomain


def is_neighbor(first: Rectangle, second: Rectangle) -> bool:
    """Incomparable rectangles sharing domain or codomain elements."""
    if leq(first, second) or leq(second, first):
        return False
    return bool(first.domain & second.domain) or bool(first.codomain & second.codomain)


# --- exchange format ----------------------------------------------------
#
#   #LEFT a b c          optional universe header (isolated elements)
#   #RIGHT 1 2           optional universe header
#   a<TAB>1              one pair per line
#
# Blank lines and lines starting with "#" (other than the two headers)
# are ignored.  Elements are strings; tabs inside ids are not supported.


def parse_relation(text: str) -> BinaryRelation:
    pairs = []
    left: set = set()
    right: set = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#LEFT"):
            left.update(line[len("#LEFT"):].split())
            continue
        if line.startswith("#RIGHT"):
            right.update(line[len("#RIGHT"):].split())
            continue
        if line.startswith("#"):
            continue
        parts = raw.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise RelationError(
                f"line {lineno}: expected 'left<TAB>right', got {raw!r}")
        pairs.append((parts[0].strip(), parts[1].strip()))
    return BinaryRelation(pairs, left, right)


def format_relation(rel: BinaryRelation) -> str:
    lines = []
    isolated_left = rel.left_universe - {a for a, _ in rel.pairs}
    isolated_right = rel.right_universe - {b for _, b in rel.pairs}
    if isolated_left:
        lines.append("#LEFT " + " ".join(str(a) for a in _sort_key(isolated_left)))
    if isolated_right:
        lines.append("#RIGHT " + " ".join(str(b) for b in _sort_key(isolated_right)))
    for a, b in sorted(rel.pairs, key=lambda p: (str(p[0]), str(p[1]))):
        lines.append(f"{a}\t{b}")
    return "\n".join(lines) + ("\n" if lines else "")
