"""Exact separation semantics: d-/m-separation, cluster-level d-separation,
inducing and discriminating paths, possible-d-sep sets and minimal neighbor
separators.

Separation queries run as reachability over (node, arrived-with-arrowhead)
states rather than path enumeration; a collider passes iff it is an ancestor
of the conditioning set, a non-collider iff it is outside it.  On circle-free
graphs this is m-separation; restricted to DAGs it coincides with
d-separation.  Colliders always require two literal ARROW marks, circles
never count.
"""

from __future__ import annotations

from itertools import combinations
from typing import TYPE_CHECKING, Iterable

from .graphs import ARROW, CIRCLE, TAIL, GraphError, Mark, MixedGraph

if TYPE_CHECKING:
    from .clusters import ClusterGraph


def _as_set(x: int | Iterable[int]) -> frozenset[int]:
    if isinstance(x, int):
        return frozenset((x,))
    return frozenset(x)


def _validate_query(g: MixedGraph, left: frozenset[int], right: frozenset[int],
                    given: frozenset[int]) -> None:
    for v in left | right | given:
        if not 0 <= v < g.n:
            raise GraphError(f"unknown node id {v}")
    if left & right or left & given or right & given:
        raise GraphError("query sets must be pairwise disjoint")
    if not left or not right:
        raise GraphError("query sets must be non-empty")


def _reachable(g: MixedGraph, sources: frozenset[int], targets: frozenset[int],
               given: frozenset[int]) -> bool:
    """True iff some m-connecting walk runs from sources to targets given `given`."""
    anc_given = g.ancestors_of_set(given)
    visited: set[tuple[int, bool]] = set()
    stack: list[tuple[int, bool]] = []
    for s in sources:
        for w, (_ms, mw) in g.neighbor_items(s):
            if w in targets:
                return True
            state = (w, mw == ARROW)
            if state not in visited:
                visited.add(state)
                stack.append(state)
    while stack:
        v, in_arrow = stack.pop()
        for w, (mv, mw) in g.neighbor_items(v):
            collider = in_arrow and mv == ARROW
            if collider:
                passable = v in anc_given
            else:
                passable = v not in given
            if not passable:
                continue
            if w in targets:
                return True
            state = (w, mw == ARROW)
            if state not in visited:
                visited.add(state)
                stack.append(state)
    return False


def m_separated(g: MixedGraph, left: int | Iterable[int], right: int | Iterable[int],
                given: Iterable[int] = ()) -> bool:
    """No m-connecting path between the sets given the conditioning set."""
    if g.has_circle_marks():
        raise GraphError("m-separation undefined on graphs with circle marks")
    ls, rs, gs = _as_set(left), _as_set(right), _as_set(given)
    _validate_query(g, ls, rs, gs)
    return not _reachable(g, ls, rs, gs)


def d_separated(g: MixedGraph, left: int | Iterable[int], right: int | Iterable[int],
                given: Iterable[int] = ()) -> bool:
    """d-separation on a DAG; every path between the sets is blocked."""
    for _, _, ma, mb in g.edges():
        if (ma, mb) != (TAIL, ARROW) and (ma, mb) != (ARROW, TAIL):
            raise GraphError("d-separation requires a purely directed graph")
    ls, rs, gs = _as_set(left), _as_set(right), _as_set(given)
    _validate_query(g, ls, rs, gs)
    return not _reachable(g, ls, rs, gs)


def cluster_d_separated(gc: "ClusterGraph", left: int | Iterable[int],
                        right: int | Iterable[int],
                        given: Iterable[int] = ()) -> bool:
    """Cluster-level d-separation with clusters as nodes.

    Bidirected cluster edges carry arrowheads at both ends; a pair of clusters
    may be linked by a directed and a bidirected edge at once, and a path may
    traverse either.
    """
    ls, rs, gs = _as_set(left), _as_set(right), _as_set(given)
    for c in ls | rs | gs:
        if not 0 <= c < gc.r:
            raise GraphError(f"unknown cluster id {c}")
    if ls & rs or ls & gs or rs & gs:
        raise GraphError("query sets must be pairwise disjoint")

    # parallel-edge adjacency: u -> list of (v, mark_u, mark_v)
    adj: list[list[tuple[int, Mark, Mark]]] = [[] for _ in range(gc.r)]
    for a, b in gc.directed:
        adj[a].append((b, TAIL, ARROW))
        adj[b].append((a, ARROW, TAIL))
    for a, b in gc.bidirected:
        adj[a].append((b, ARROW, ARROW))
        adj[b].append((a, ARROW, ARROW))

    anc_given: set[int] = set()
    for c in gs:
        anc_given |= gc.cluster_ancestors(c)

    visited: set[tuple[int, bool]] = set()
    stack: list[tuple[int, bool]] = []
    for s in ls:
        for w, _mu, mw in adj[s]:
            if w in rs:
                return False
            state = (w, mw == ARROW)
            if state not in visited:
                visited.add(state)
                stack.append(state)
    while stack:
        v, in_arrow = stack.pop()
        for w, mv, mw in adj[v]:
            collider = in_arrow and mv == ARROW
            passable = (v in anc_given) if collider else (v not in gs)
            if not passable:
                continue
            if w in rs:
                return False
            state = (w, mw == ARROW)
            if state not in visited:
                visited.add(state)
                stack.append(state)
    return True


# -- inducing paths -------------------------------------------------------------


def inducing_path_exists(g: MixedGraph, x: int, y: int,
                         latents: Iterable[int] = ()) -> bool:
    """Path whose non-endpoints are latent or colliders, with every collider
    an ancestor of x or y.  With empty latents this is a primitive inducing
    path."""
    g._check(x)
    g._check(y)
    if x == y:
        raise GraphError("endpoints must differ")
    lat = frozenset(latents)
    if g.has_edge(x, y):
        return True
    anc_xy = g.ancestors(x) | g.ancestors(y)

    on_path = {x}

    def extend(u: int, v: int) -> bool:
        # path ... u, v; decide v's interior validity when stepping to w
        for w in sorted(g.adjacents(v)):
            if w in on_path:
                continue
            collider = g.mark_at(v, u) == ARROW and g.mark_at(v, w) == ARROW
            if not (collider or v in lat):
                continue
            if collider and v not in anc_xy:
                continue
            if w == y:
                return True
            on_path.add(w)
            if extend(v, w):
                return True
            on_path.discard(w)
        return False

    for w in sorted(g.adjacents(x)):
        if w == y:
            return True
        on_path.add(w)
        if extend(x, w):
            return True
        on_path.discard(w)
    return False


def primitive_inducing_path(g: MixedGraph, x: int, y: int) -> bool:
    """Inducing path relative to (emptyset, emptyset)."""
    if g.has_circle_marks():
        raise GraphError("primitive inducing path needs a circle-free graph")
    return inducing_path_exists(g, x, y, ())


# -- possible d-separating sets ---------------------------------------------------


def possible_d_sep(g: MixedGraph, xi: int, xj: int) -> set[int]:
    """Nodes X with a path from xi on which every triple (k, l, m) has l a
    collider or k, m adjacent.  Endpoints themselves are excluded."""
    g._check(xi)
    g._check(xj)
    if xi == xj:
        raise GraphError("endpoints must differ")
    result: set[int] = set()
    path = [xi]
    on_path = {xi}

    def dfs() -> None:
        l = path[-1]
        k = path[-2] if len(path) >= 2 else None
        for m in sorted(g.adjacents(l)):
            if m in on_path:
                continue
            if k is not None:
                collider = g.mark_at(l, k) == ARROW and g.mark_at(l, m) == ARROW
                if not collider and not g.has_edge(k, m):
                    continue
            result.add(m)
            path.append(m)
            on_path.add(m)
            dfs()
            path.pop()
            on_path.discard(m)

    dfs()
    result.discard(xi)
    result.discard(xj)
    return result


# -- discriminating paths ---------------------------------------------------------


def discriminating_path(g: MixedGraph, x: int, y: int, s: int) -> tuple[int, ...] | None:
    """Shortest discriminating path (x, ..., s, y) for s, or None.

    Requirements: at least three edges, x and y non-adjacent, s adjacent to y
    on the path, and every vertex strictly between x and s a collider on the
    path and a parent of y.  Ties break lexicographically so rule
    applications stay reproducible.
    """
    for v in (x, y, s):
        g._check(v)
    if len({x, y, s}) != 3:
        raise GraphError("x, y, s must be distinct")
    if not g.has_edge(s, y) or g.has_edge(x, y):
        return None

    def parent_of_y(v: int) -> bool:
        m = g.marks(v, y)
        return m is not None and m[0] == TAIL and m[1] == ARROW

    # grow chains (s, c1, ..., ct) backwards; interiors ci are colliders and
    # parents of y, so consecutive interiors are linked by <-> edges
    start: list[tuple[int, ...]] = []
    for c in sorted(g.adjacents(s)):
        if c in (x, y):
            continue
        if parent_of_y(c) and g.mark_at(c, s) == ARROW:
            start.append((s, c))
    queue = start
    seen = set(start)
    while queue:
        next_queue: list[tuple[int, ...]] = []
        for chain in queue:
            head = chain[-1]
            # close with x?
            mx = g.marks(x, head)
            if mx is not None and mx[1] == ARROW:
                return (x,) + chain[::-1] + (y,)
            for w in sorted(g.adjacents(head)):
                if w == y or w in chain:
                    continue
                mm = g.marks(w, head)
                if mm != (ARROW, ARROW):
                    continue
                if not parent_of_y(w):
                    continue
                nxt = chain + (w,)
                if nxt not in seen:
                    seen.add(nxt)
                    next_queue.append(nxt)
        queue = next_queue
    return None


# -- Markov equivalence of MAGs ----------------------------------------------------


def _unshielded_colliders(g: MixedGraph) -> set[tuple[int, int, int]]:
    out = set()
    for j in g.nodes():
        adj = sorted(g.adjacents(j))
        for a, b in combinations(adj, 2):
            if g.has_edge(a, b):
                continue
            if g.mark_at(j, a) == ARROW and g.mark_at(j, b) == ARROW:
                out.add((a, j, b))
    return out


def _all_simple_paths(g: MixedGraph, x: int, y: int):
    path = [x]
    on_path = {x}

    def dfs():
        for w in sorted(g.adjacents(path[-1])):
            if w in on_path:
                continue
            path.append(w)
            on_path.add(w)
            if w == y:
                yield tuple(path)
            else:
                yield from dfs()
            path.pop()
            on_path.discard(w)

    yield from dfs()


def _is_discriminating(g: MixedGraph, path: tuple[int, ...], s: int) -> bool:
    if len(path) < 4 or path[-2] != s:
        return False
    x, y = path[0], path[-1]
    if g.has_edge(x, y):
        return False
    for i in range(1, len(path) - 2):
        v = path[i]
        collider = (g.mark_at(v, path[i - 1]) == ARROW
                    and g.mark_at(v, path[i + 1]) == ARROW)
        m = g.marks(v, y)
        if not collider or m is None or m != (TAIL, ARROW):
            return False
    return True


def mags_markov_equivalent(g1: MixedGraph, g2: MixedGraph) -> bool:
    """Same adjacencies, same unshielded colliders, and agreeing collider
    status on every path discriminating in both graphs."""
    from .graphs import classify

    for g in (g1, g2):
        rep = classify(g, check_maximality=True)
        if not (rep.is_ancestral and rep.is_maximal):
            raise GraphError("inputs must be MAGs")
    if g1.labels != g2.labels:
        raise GraphError("node sets differ")
    adj1 = {(a, b) for a, b, _, _ in g1.edges()}
    adj2 = {(a, b) for a, b, _, _ in g2.edges()}
    if adj1 != adj2:
        return False
    if _unshielded_colliders(g1) != _unshielded_colliders(g2):
        return False
    for x in g1.nodes():
        for y in g1.nodes():
            if x == y or g1.has_edge(x, y):
                continue
            for path in _all_simple_paths(g1, x, y):
                if len(path) < 4:
                    continue
                s = path[-2]
                if _is_discriminating(g1, path, s) and _is_discriminating(g2, path, s):
                    col1 = (g1.mark_at(s, path[-3]) == ARROW
                            and g1.mark_at(s, y) == ARROW)
                    col2 = (g2.mark_at(s, path[-3]) == ARROW
                            and g2.mark_at(s, y) == ARROW)
                    if col1 != col2:
                        return False
    return True


# -- minimal neighbor separator -----------------------------------------------------


def mns(g: MixedGraph, x: int, a: int) -> frozenset[int]:
    """Unique minimal subset of x's neighbors d-separating a from x.

    Defined for DAGs when a is neither a descendant of x nor in x's closed
    neighborhood; the result is always a subset of pa(x), found by greedily
    shrinking the parent set.
    """
    g._check(x)
    g._check(a)
    nb_plus = g.adjacents(x) | {x}
    if a in g.descendants(x) or a in nb_plus:
        raise GraphError("mns requires a outside de(x) and nb+(x)")
    sep = set(g.parents(x))
    if not d_separated(g, a, x, sep):
        raise GraphError("parents of x fail to separate; input is not a DAG?")
    for p in sorted(sep):
        trial = sep - {p}
        if d_separated(g, a, x, trial):
            sep = trial
    return frozenset(sep)
