"""Edge-mark mixed graphs and the relational queries everything else builds on.

A graph stores at most one edge per unordered node pair, with a mark at each
endpoint.  The mark pair determines the edge kind:

    (TAIL, ARROW)     a --> b   directed
    (ARROW, ARROW)    a <-> b   bidirected
    (TAIL, TAIL)      a --- b   undirected
    (CIRCLE, CIRCLE)  a o-o b
    (CIRCLE, ARROW)   a o-> b

Orientation rules mutate one endpoint mark at a time, which is why marks are
the primitive rather than edge-type enums.
"""

from __future__ import annotations

import enum
import heapq
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator


class Mark(enum.IntEnum):
    TAIL = 0
    ARROW = 1
    CIRCLE = 2


TAIL = Mark.TAIL
ARROW = Mark.ARROW
CIRCLE = Mark.CIRCLE


class GraphError(ValueError):
    """Structurally invalid graph operation (self loop, unknown node, cycle...)."""


# token -> (mark at left node, mark at right node) for a line "A <tok> B"
_TOKEN_TO_MARKS = {
    "-->": (TAIL, ARROW),
    "<--": (ARROW, TAIL),
    "<->": (ARROW, ARROW),
    "---": (TAIL, TAIL),
    "o-o": (CIRCLE, CIRCLE),
    "o->": (CIRCLE, ARROW),
    "<-o": (ARROW, CIRCLE),
}

_MARKS_TO_TOKEN = {
    (TAIL, ARROW): "-->",
    (ARROW, ARROW): "<->",
    (TAIL, TAIL): "---",
    (CIRCLE, CIRCLE): "o-o",
    (CIRCLE, ARROW): "o->",
}


class MixedGraph:
    """Mutable mixed graph over a fixed node set.

    Nodes are dense integer ids 0..n-1 carrying unique string labels.  All
    iteration orders are sorted by node id so that identical inputs produce
    identical outputs.
    """

    __slots__ = ("labels", "_index", "_adj")

    def __init__(self, labels: Iterable[str]):
        self.labels: tuple[str, ...] = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise GraphError("node labels must be unique")
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        # _adj[u][v] = (mark at u, mark at v) for edge {u, v}
        self._adj: list[dict[int, tuple[Mark, Mark]]] = [dict() for _ in self.labels]

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_edges(cls, labels: Iterable[str],
                   edges: Iterable[tuple[int, int, Mark, Mark]]) -> "MixedGraph":
        g = cls(labels)
        for a, b, ma, mb in edges:
            g.set_edge(a, b, ma, mb)
        return g

    @classmethod
    def complete(cls, labels: Iterable[str], mark: Mark = CIRCLE) -> "MixedGraph":
        g = cls(labels)
        for a, b in combinations(range(g.n), 2):
            g.set_edge(a, b, mark, mark)
        return g

    def copy(self) -> "MixedGraph":
        g = MixedGraph.__new__(MixedGraph)
        g.labels = self.labels
        g._index = self._index
        g._adj = [dict(d) for d in self._adj]
        return g

    # -- basic accessors -------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.labels)

    def nodes(self) -> range:
        return range(self.n)

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise GraphError(f"unknown node label {label!r}") from None

    def _check(self, x: int) -> None:
        if not 0 <= x < self.n:
            raise GraphError(f"unknown node id {x}")

    def set_edge(self, a: int, b: int, mark_a: Mark, mark_b: Mark) -> None:
        """Set the edge {a, b} to carry exactly these marks, replacing any prior edge."""
        self._check(a)
        self._check(b)
        if a == b:
            raise GraphError(f"self loop on node {a} rejected")
        if {mark_a, mark_b} == {TAIL, CIRCLE}:
            # selection-variable edge kinds (o- / -o) are outside this system
            raise GraphError("tail-circle edges are not supported")
        self._adj[a][b] = (mark_a, mark_b)
        self._adj[b][a] = (mark_b, mark_a)

    def set_mark(self, a: int, b: int, mark: Mark) -> None:
        """Rewrite only the mark at a's end of the existing edge {a, b}."""
        cur = self._adj[a].get(b)
        if cur is None:
            raise GraphError(f"no edge between {a} and {b}")
        self._adj[a][b] = (mark, cur[1])
        self._adj[b][a] = (cur[1], mark)

    def remove_edge(self, a: int, b: int) -> None:
        self._adj[a].pop(b, None)
        self._adj[b].pop(a, None)

    def has_edge(self, a: int, b: int) -> bool:
        return b in self._adj[a]

    def marks(self, a: int, b: int) -> tuple[Mark, Mark] | None:
        """(mark at a, mark at b) for edge {a, b}, or None when non-adjacent."""
        return self._adj[a].get(b)

    def mark_at(self, a: int, b: int) -> Mark | None:
        """The mark at a's end of edge {a, b}, or None when non-adjacent."""
        m = self._adj[a].get(b)
        return None if m is None else m[0]

    def edges(self) -> list[tuple[int, int, Mark, Mark]]:
        """Sorted list of (a, b, mark_a, mark_b) with a < b."""
        out = []
        for a in range(self.n):
            for b, (ma, mb) in self._adj[a].items():
                if a < b:
                    out.append((a, b, ma, mb))
        out.sort()
        return out

    def n_edges(self) -> int:
        return sum(len(d) for d in self._adj) // 2

    def neighbor_items(self, x: int) -> Iterator[tuple[int, tuple[Mark, Mark]]]:
        return iter(self._adj[x].items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return self.labels == other.labels and self._adj == other._adj

    def __repr__(self) -> str:
        return f"MixedGraph(n={self.n}, edges={self.n_edges()})"

    # -- relational queries ----------------------------------------------------

    def adjacents(self, x: int) -> set[int]:
        self._check(x)
        return set(self._adj[x])

    def parents(self, x: int) -> set[int]:
        """Nodes y with y --> x or y o-> x (an o-> origin counts as a parent)."""
        self._check(x)
        return {y for y, (mx, my) in self._adj[x].items()
                if mx == ARROW and my != ARROW}

    def children(self, x: int) -> set[int]:
        self._check(x)
        return {y for y, (mx, my) in self._adj[x].items()
                if my == ARROW and mx != ARROW}

    def siblings(self, x: int) -> set[int]:
        """Nodes y with y <-> x."""
        self._check(x)
        return {y for y, (mx, my) in self._adj[x].items()
                if mx == ARROW and my == ARROW}

    def non_children(self, x: int) -> set[int]:
        """Adjacent nodes that are not children of x (the nch conditioning pool)."""
        self._check(x)
        return {y for y, (mx, my) in self._adj[x].items()
                if not (my == ARROW and mx != ARROW)}

    def undirected_neighbors(self, x: int) -> set[int]:
        return {y for y, (mx, my) in self._adj[x].items()
                if mx == TAIL and my == TAIL}

    def _directed_parents(self, x: int, partial: bool) -> Iterator[int]:
        # y such that the edge contributes y -> x ancestry
        for y, (mx, my) in self._adj[x].items():
            if mx == ARROW and (my == TAIL or (partial and my == CIRCLE)):
                yield y

    def ancestors(self, x: int, partial: bool = False) -> set[int]:
        """Reflexive-transitive closure over directed edges into x.

        With partial=True, o-> edges contribute ancestry through their
        parent reading as well.
        """
        self._check(x)
        seen = {x}
        stack = [x]
        while stack:
            v = stack.pop()
            for y in self._directed_parents(v, partial):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def descendants(self, x: int, partial: bool = False) -> set[int]:
        self._check(x)
        seen = {x}
        stack = [x]
        while stack:
            v = stack.pop()
            for y, (mv, my) in self._adj[v].items():
                if my == ARROW and (mv == TAIL or (partial and mv == CIRCLE)):
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
        return seen

    def ancestors_of_set(self, xs: Iterable[int], partial: bool = False) -> set[int]:
        out: set[int] = set()
        for x in xs:
            out |= self.ancestors(x, partial)
        return out

    def has_directed_edge(self, a: int, b: int) -> bool:
        """True iff a --> b with a tail at a and an arrow at b."""
        m = self._adj[a].get(b)
        return m is not None and m[0] == TAIL and m[1] == ARROW

    def directed_edge_list(self) -> list[tuple[int, int]]:
        return [(a, b) for a, b, ma, mb in self.edges() if (ma, mb) == (TAIL, ARROW)] + \
               [(b, a) for a, b, ma, mb in self.edges() if (ma, mb) == (ARROW, TAIL)]

    def topological_order(self) -> list[int]:
        """Topological order over the directed edges, ties broken by node index.

        Non-directed edges are ignored.  Raises GraphError on a directed cycle.
        """
        indeg = [0] * self.n
        for a, b in self.directed_edge_list():
            indeg[b] += 1
        heap = [v for v in range(self.n) if indeg[v] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for y, (mv, my) in self._adj[v].items():
                if mv == TAIL and my == ARROW:
                    indeg[y] -= 1
                    if indeg[y] == 0:
                        heapq.heappush(heap, y)
        if len(order) != self.n:
            raise GraphError("directed cycle detected")
        return order

    def has_directed_cycle(self) -> bool:
        try:
            self.topological_order()
            return False
        except GraphError:
            return True

    # -- mark-kind summaries ---------------------------------------------------

    def mark_kinds(self) -> set[tuple[Mark, Mark]]:
        kinds = set()
        for _, _, ma, mb in self.edges():
            kinds.add(tuple(sorted((ma, mb))))
        return kinds

    def has_circle_marks(self) -> bool:
        return any(CIRCLE in (ma, mb) for _, _, ma, mb in self.edges())


@dataclass(frozen=True)
class GraphKindReport:
    is_dag: bool
    is_admg: bool
    is_ancestral: bool
    is_maximal: bool | None
    has_almost_directed_cycle: bool


def has_almost_directed_cycle(g: MixedGraph) -> bool:
    """X <-> Y with X an ancestor of Y (over directed edges)."""
    for a, b, ma, mb in g.edges():
        if ma == ARROW and mb == ARROW:
            if a in g.ancestors(b) or b in g.ancestors(a):
                return True
    return False


def classify(g: MixedGraph, check_maximality: bool = True) -> GraphKindReport:
    """Exhaustive kind checks; maximality enumerates all conditioning subsets.

    Maximality on graphs with circle marks is undefined and raises.
    """
    if check_maximality and g.has_circle_marks():
        raise GraphError("maximality check undefined on graphs with circle marks")
    kinds = g.mark_kinds()
    directed_only = kinds <= {(TAIL, ARROW)}
    acyclic = not g.has_directed_cycle()
    is_dag = directed_only and acyclic
    is_admg = kinds <= {(TAIL, ARROW), (ARROW, ARROW)} and acyclic
    almost = has_almost_directed_cycle(g)
    # ancestral: no directed cycle, no almost directed cycle, and for any
    # undirected edge its endpoints have no parents or siblings
    undirected_ok = True
    for a, b, ma, mb in g.edges():
        if (ma, mb) == (TAIL, TAIL):
            for e in (a, b):
                if g.parents(e) or g.siblings(e):
                    undirected_ok = False
    is_ancestral = (kinds <= {(TAIL, ARROW), (ARROW, ARROW), (TAIL, TAIL)}
                    and acyclic and not almost and undirected_ok)
    is_maximal: bool | None = None
    if check_maximality and is_ancestral:
        from .separation import m_separated  # local import, avoids module cycle

        is_maximal = True
        all_nodes = set(g.nodes())
        for a, b in combinations(range(g.n), 2):
            if g.has_edge(a, b):
                continue
            rest = sorted(all_nodes - {a, b})
            if not any(m_separated(g, a, b, s)
                       for k in range(len(rest) + 1)
                       for s in combinations(rest, k)):
                is_maximal = False
                break
    return GraphKindReport(is_dag, is_admg, is_ancestral, is_maximal, almost)


# -- text edge-list format -----------------------------------------------------


def parse_graph(text: str) -> MixedGraph:
    """Parse the one-edge-per-line format.

    Lines: `A --> B`, `A <-> B`, `A --- B`, `A o-o B`, `A o-> B`, optional
    `node X` declarations, comments starting with `#`.  The node set is the
    union of mentioned labels plus declarations, in first-mention order.
    """
    labels: list[str] = []
    seen: set[str] = set()
    triples: list[tuple[str, str, Mark, Mark]] = []

    def intern(lab: str) -> None:
        if lab not in seen:
            seen.add(lab)
            labels.append(lab)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "node":
            if len(parts) != 2:
                raise GraphError(f"line {lineno}: expected 'node LABEL'")
            intern(parts[1])
            continue
        if len(parts) != 3:
            raise GraphError(f"line {lineno}: expected 'A <edge> B', got {raw!r}")
        a, tok, b = parts
        if tok not in _TOKEN_TO_MARKS:
            raise GraphError(f"line {lineno}: unknown edge token {tok!r}")
        intern(a)
        intern(b)
        ma, mb = _TOKEN_TO_MARKS[tok]
        triples.append((a, b, ma, mb))

    g = MixedGraph(labels)
    for a, b, ma, mb in triples:
        g.set_edge(g.index_of(a), g.index_of(b), ma, mb)
    return g


def format_graph(g: MixedGraph) -> str:
    """Serialize to the edge-list format, one canonical token per edge."""
    lines = [f"node {lab}" for lab in g.labels]
    for a, b, ma, mb in g.edges():
        if (ma, mb) in _MARKS_TO_TOKEN:
            lines.append(f"{g.labels[a]} {_MARKS_TO_TOKEN[(ma, mb)]} {g.labels[b]}")
        else:
            lines.append(f"{g.labels[b]} {_MARKS_TO_TOKEN[(mb, ma)]} {g.labels[a]}")
    return "\n".join(lines) + "\n"


def default_labels(n: int) -> list[str]:
    return [f"X{i + 1}" for i in range(n)]
