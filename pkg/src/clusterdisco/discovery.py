"""The four discovery algorithms: PC, Cluster-PC, FCI and Cluster-FCI, plus
Meek closure and the FCI orientation rules R0-R4, R8-R10.

Conventions shared by all runs:
  * skeleton deletions are batched per conditioning-set size k,
  * subset enumeration is over sorted pools, deduplicated across the two
    endpoint pools, so identical inputs give identical CI-test sequences,
  * collider conflicts resolve first-fired-wins under the deterministic
    triple ordering, and marks placed by background knowledge are never
    overwritten by collider, Meek or FCI rules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .ci import CiStats, CiTester
from .clusters import ClusterGraph, _cadmg_pair_marks, cadmg_to_partial_mixed, cdag_to_mpdag
from .graphs import ARROW, CIRCLE, TAIL, GraphError, MixedGraph, default_labels
from .separation import discriminating_path, possible_d_sep

SepSets = dict[frozenset[int], tuple[int, ...]]


@dataclass
class DiscoveryOutput:
    algorithm: str
    graph: MixedGraph
    sepsets: SepSets
    ci_stats: CiStats | None = None
    pag_mode: bool | None = None
    warnings: list[str] = field(default_factory=list)


def _as_labels(nodes: Sequence[str] | int) -> list[str]:
    if isinstance(nodes, int):
        return default_labels(nodes)
    return list(nodes)


def _stats_of(tester: CiTester) -> CiStats | None:
    return getattr(tester, "stats", None)


# -- skeleton search --------------------------------------------------------------


def _try_separate(g: MixedGraph, tester: CiTester, sepsets: SepSets,
                  a: int, b: int,
                  pool_a: set[int] | None, pool_b: set[int] | None, k: int) -> bool:
    """Test a ⊥ b | S over size-k subsets of the two pools (deduplicated);
    record the first separating set found."""
    seen: set[tuple[int, ...]] = set()
    for pool in (pool_a, pool_b):
        if pool is None:
            continue
        sp = sorted(pool)
        if len(sp) < k:
            continue
        for cond in combinations(sp, k):
            if cond in seen:
                continue
            seen.add(cond)
            if tester.test(a, b, cond).independent:
                sepsets[frozenset((a, b))] = cond
                return True
    return False


def _adjacency_skeleton(g: MixedGraph, tester: CiTester, sepsets: SepSets) -> None:
    """PC-style sweep: growing k, pools are current adjacency sets of either
    endpoint, deletions batched per k."""
    n = g.n
    for k in range(max(0, n - 1)):
        pairs = [(a, b) for a, b, _, _ in g.edges()]
        if not any(len(g.adjacents(a)) - 1 >= k or len(g.adjacents(b)) - 1 >= k
                   for a, b in pairs):
            break
        deleted: list[tuple[int, int]] = []
        for a, b in pairs:
            if _try_separate(g, tester, sepsets, a, b,
                             g.adjacents(a) - {b}, g.adjacents(b) - {a}, k):
                deleted.append((a, b))
        for a, b in deleted:
            g.remove_edge(a, b)


# -- collider orientation and Meek closure ------------------------------------------


def _orient_colliders_pc(g: MixedGraph, sepsets: SepSets, warnings: list[str]) -> None:
    """Orient unshielded triples i *- j -* k with no arrow out of j and at
    least one undirected edge as i -> j <- k when j is outside the recorded
    separator.  Triples whose pair was never tested are skipped."""
    for j in g.nodes():
        for i, k in combinations(sorted(g.adjacents(j)), 2):
            if g.has_edge(i, k):
                continue
            mi = g.marks(i, j)
            mk = g.marks(k, j)
            ok_i = mi in ((TAIL, TAIL), (TAIL, ARROW))
            ok_k = mk in ((TAIL, TAIL), (TAIL, ARROW))
            if not (ok_i and ok_k):
                continue
            if mi == (TAIL, ARROW) and mk == (TAIL, ARROW):
                continue  # already a collider
            key = frozenset((i, k))
            if key not in sepsets:
                warnings.append(
                    f"triple ({i},{j},{k}): pair separated by background knowledge "
                    "alone, no recorded separator; orientation skipped")
                continue
            if j in sepsets[key]:
                continue
            g.set_edge(i, j, TAIL, ARROW)
            g.set_edge(k, j, TAIL, ARROW)


def _meek_r1(g: MixedGraph, x: int, y: int) -> bool:
    # a -> x - y with a, y non-adjacent forces x -> y
    for a, (mx, ma) in g.neighbor_items(x):
        if a != y and (ma, mx) == (TAIL, ARROW) and not g.has_edge(a, y):
            return True
    return False


def _meek_r2(g: MixedGraph, x: int, y: int) -> bool:
    # x -> b -> y with x - y forces x -> y
    for b in sorted(g.adjacents(x)):
        if b != y and g.has_directed_edge(x, b) and g.has_directed_edge(b, y):
            return True
    return False


def _meek_r3(g: MixedGraph, x: int, y: int) -> bool:
    # x - c -> y and x - d -> y with c, d non-adjacent forces x -> y
    cands = [c for c in sorted(g.adjacents(x))
             if c != y and g.marks(x, c) == (TAIL, TAIL) and g.has_directed_edge(c, y)]
    for c, d in combinations(cands, 2):
        if not g.has_edge(c, d):
            return True
    return False


def _meek_r4(g: MixedGraph, x: int, y: int) -> bool:
    # x - c, c -> d -> y with c, y non-adjacent forces x -> y
    for c in sorted(g.adjacents(x)):
        if c == y or g.marks(x, c) != (TAIL, TAIL) or g.has_edge(c, y):
            continue
        for d in sorted(g.adjacents(c)):
            if d not in (x, y) and g.has_directed_edge(c, d) and g.has_directed_edge(d, y):
                return True
    return False


def _meek_inplace(g: MixedGraph) -> None:
    changed = True
    while changed:
        changed = False
        for a, b, _, _ in g.edges():
            for x, y in ((a, b), (b, a)):
                if g.marks(x, y) != (TAIL, TAIL):
                    continue
                if (_meek_r1(g, x, y) or _meek_r2(g, x, y)
                        or _meek_r3(g, x, y) or _meek_r4(g, x, y)):
                    g.set_edge(x, y, TAIL, ARROW)
                    changed = True


def meek_closure(g: MixedGraph) -> MixedGraph:
    """Fixed point of the four Meek orientation rules on a tail/arrow graph."""
    for _, _, ma, mb in g.edges():
        if CIRCLE in (ma, mb):
            raise GraphError("Meek closure is defined on tail/arrow graphs")
    h = g.copy()
    _meek_inplace(h)
    return h


def cpdag_from_dag(dag: MixedGraph) -> MixedGraph:
    """Skeleton plus unshielded colliders of the DAG, closed under Meek."""
    h = MixedGraph(dag.labels)
    for a, b, ma, mb in dag.edges():
        h.set_edge(a, b, TAIL, TAIL)
    for j in dag.nodes():
        for i, k in combinations(sorted(dag.parents(j)), 2):
            if not dag.has_edge(i, k):
                h.set_edge(i, j, TAIL, ARROW)
                h.set_edge(k, j, TAIL, ARROW)
    _meek_inplace(h)
    return h


def impose_background(g: MixedGraph, gc: ClusterGraph) -> MixedGraph:
    """Orient every edge of g that the cluster graph directs, then close under
    Meek.  Used to post-process a CPDAG with cluster knowledge."""
    ref = cdag_to_mpdag(gc)
    h = g.copy()
    for a, b, ma, mb in h.edges():
        rm = ref.marks(a, b)
        if rm in ((TAIL, ARROW), (ARROW, TAIL)) and (ma, mb) == (TAIL, TAIL):
            h.set_edge(a, b, rm[0], rm[1])
    _meek_inplace(h)
    return h


# -- PC and Cluster-PC ---------------------------------------------------------------


def pc(tester: CiTester, nodes: Sequence[str] | int) -> DiscoveryOutput:
    """Baseline PC: skeleton over a complete undirected graph, collider
    orientation from recorded separators, Meek closure."""
    g = MixedGraph.complete(_as_labels(nodes), TAIL)
    sepsets: SepSets = {}
    warnings: list[str] = []
    _adjacency_skeleton(g, tester, sepsets)
    _orient_colliders_pc(g, sepsets, warnings)
    _meek_inplace(g)
    return DiscoveryOutput("pc", g, sepsets, _stats_of(tester), None, warnings)


def cluster_pc(tester: CiTester, gc: ClusterGraph) -> DiscoveryOutput:
    """Cluster-PC: start from the cluster-knowledge MPDAG and test per cluster
    along the topological ordering.

    Per cluster C_m with locale L_m = C_m plus its parent clusters, and for
    k = 0..|L_m|-2: edges from a parent into C_m are tested against subsets of
    the child's non-children, within-cluster edges against either endpoint's
    non-children, deletions applied per k."""
    if gc.bidirected:
        raise GraphError("cluster graph has bidirected edges; use cluster_fci")
    g = cdag_to_mpdag(gc)
    part = gc.partition
    sepsets: SepSets = {}
    warnings: list[str] = []
    for m in gc.topological_clusters():
        members = sorted(part.clusters[m])
        locale = set(members)
        for p in gc.cluster_parents(m):
            locale |= part.clusters[p]
        for k in range(max(0, len(locale) - 1)):
            deleted: list[tuple[int, int]] = []
            for xj in members:
                for xi in sorted(g.parents(xj)):
                    if _try_separate(g, tester, sepsets, xi, xj,
                                     g.non_children(xj) - {xi}, None, k):
                        deleted.append((xi, xj))
            for a, b in combinations(members, 2):
                if not g.has_edge(a, b):
                    continue
                if _try_separate(g, tester, sepsets, a, b,
                                 g.non_children(a) - {b}, g.non_children(b) - {a}, k):
                    deleted.append((a, b))
            for a, b in deleted:
                g.remove_edge(a, b)
    for ci, cj in sorted(gc.directed):
        if not any(g.has_directed_edge(a, b)
                   for a in part.clusters[ci] for b in part.clusters[cj]):
            warnings.append(
                f"background-knowledge violation: no surviving edge realizes "
                f"{part.names[ci]} -> {part.names[cj]}")
    _orient_colliders_pc(g, sepsets, warnings)
    _meek_inplace(g)
    return DiscoveryOutput("cpc", g, sepsets, _stats_of(tester), None, warnings)


# -- FCI orientation rules ------------------------------------------------------------


def _set_mark_guarded(g: MixedGraph, at: int, other: int, mark,
                      warnings: list[str], rule: str) -> bool:
    """Orient a circle endpoint; refuse to rewrite tails or arrows."""
    cur = g.mark_at(at, other)
    if cur == mark:
        return False
    if cur != CIRCLE:
        warnings.append(f"{rule}: mark at {at} on edge ({at},{other}) already "
                        f"{cur.name}, not rewritten to {mark.name}")
        return False
    g.set_mark(at, other, mark)
    return True


def _fci_r0(g: MixedGraph, sepsets: SepSets, warnings: list[str]) -> None:
    """Collider rule: for each unshielded triple (i, j, k) with j outside the
    recorded separator, place arrowheads at j on both edges.  Circle marks are
    the only ones rewritten, so an o-> middle edge becomes bidirected."""
    for j in g.nodes():
        for i, k in combinations(sorted(g.adjacents(j)), 2):
            if g.has_edge(i, k):
                continue
            needs_i = g.mark_at(j, i) == CIRCLE
            needs_k = g.mark_at(j, k) == CIRCLE
            if not (needs_i or needs_k):
                continue
            key = frozenset((i, k))
            if key not in sepsets:
                warnings.append(
                    f"triple ({i},{j},{k}): pair separated by background knowledge "
                    "alone, no recorded separator; collider check skipped")
                continue
            if j in sepsets[key]:
                continue
            if needs_i:
                g.set_mark(j, i, ARROW)
            if needs_k:
                g.set_mark(j, k, ARROW)


def _fci_r1(g: MixedGraph, warnings: list[str]) -> bool:
    # a *-> b o-* c, a and c non-adjacent: orient b -> c
    changed = False
    for b in g.nodes():
        for c in sorted(g.adjacents(b)):
            if g.mark_at(b, c) != CIRCLE:
                continue
            for a in sorted(g.adjacents(b)):
                if a == c or g.has_edge(a, c):
                    continue
                if g.mark_at(b, a) == ARROW:
                    changed |= _set_mark_guarded(g, c, b, ARROW, warnings, "R1")
                    changed |= _set_mark_guarded(g, b, c, TAIL, warnings, "R1")
                    break
    return changed


def _fci_r2(g: MixedGraph, warnings: list[str]) -> bool:
    # (a -> b *-> c or a *-> b -> c) and a *-o c: orient a *-> c
    changed = False
    for a in g.nodes():
        for c in sorted(g.adjacents(a)):
            if g.mark_at(c, a) != CIRCLE:
                continue
            for b in sorted(g.adjacents(a) & g.adjacents(c)):
                chain1 = g.has_directed_edge(a, b) and g.mark_at(c, b) == ARROW
                chain2 = g.mark_at(b, a) == ARROW and g.has_directed_edge(b, c)
                if chain1 or chain2:
                    changed |= _set_mark_guarded(g, c, a, ARROW, warnings, "R2")
                    break
    return changed


def _fci_r3(g: MixedGraph, warnings: list[str]) -> bool:
    # a *-> b <-* c, a *-o d o-* c, a, c non-adjacent, d *-o b: orient d *-> b
    changed = False
    for b in g.nodes():
        into_b = [v for v in sorted(g.adjacents(b)) if g.mark_at(b, v) == ARROW]
        circ_b = [v for v in sorted(g.adjacents(b)) if g.mark_at(b, v) == CIRCLE]
        for d in circ_b:
            for a, c in combinations(into_b, 2):
                if g.has_edge(a, c):
                    continue
                if g.mark_at(d, a) == CIRCLE and g.mark_at(d, c) == CIRCLE:
                    changed |= _set_mark_guarded(g, b, d, ARROW, warnings, "R3")
                    break
    return changed


def _fci_r4(g: MixedGraph, sepsets: SepSets, warnings: list[str]) -> bool:
    # discriminating path (t, ..., a, b, c) for b with b o-* c: orient by
    # membership of b in the separator of (t, c)
    changed = False
    for c in g.nodes():
        for b in sorted(g.adjacents(c)):
            if g.mark_at(b, c) != CIRCLE:
                continue
            for t in g.nodes():
                if t in (b, c) or g.has_edge(t, c):
                    continue
                path = discriminating_path(g, t, c, b)
                if path is None:
                    continue
                key = frozenset((t, c))
                if key not in sepsets:
                    warnings.append(
                        f"R4: no recorded separator for ({t},{c}); skipped")
                    continue
                if b in sepsets[key]:
                    changed |= _set_mark_guarded(g, c, b, ARROW, warnings, "R4")
                    changed |= _set_mark_guarded(g, b, c, TAIL, warnings, "R4")
                else:
                    a = path[-3]
                    changed |= _set_mark_guarded(g, a, b, ARROW, warnings, "R4")
                    changed |= _set_mark_guarded(g, b, a, ARROW, warnings, "R4")
                    changed |= _set_mark_guarded(g, b, c, ARROW, warnings, "R4")
                    changed |= _set_mark_guarded(g, c, b, ARROW, warnings, "R4")
                break
    return changed


def _fci_r8(g: MixedGraph, warnings: list[str]) -> bool:
    # (a -> b -> c or a -o b -> c) and a o-> c: orient a -> c
    changed = False
    for a in g.nodes():
        for c in sorted(g.adjacents(a)):
            if g.marks(a, c) != (CIRCLE, ARROW):
                continue
            for b in sorted(g.adjacents(a) & g.adjacents(c)):
                first = (g.has_directed_edge(a, b)
                         or g.marks(a, b) == (TAIL, CIRCLE))
                if first and g.has_directed_edge(b, c):
                    changed |= _set_mark_guarded(g, a, c, TAIL, warnings, "R8")
                    break
    return changed


def _is_pd_edge(g: MixedGraph, u: int, v: int) -> bool:
    # potentially directed u -> v: no arrow at u, no tail at v
    m = g.marks(u, v)
    return m is not None and m[0] != ARROW and m[1] != TAIL


def _uncovered_pd_path_exists(g: MixedGraph, first: int, second: int,
                              target: int) -> bool:
    """Uncovered potentially-directed path (first, second, ..., target); the
    first edge is assumed already checked."""
    if second == target:
        return True
    path = [first, second]
    on = {first, second}

    def dfs() -> bool:
        u, v = path[-2], path[-1]
        for w in sorted(g.adjacents(v)):
            if w in on or g.has_edge(u, w):
                continue
            if not _is_pd_edge(g, v, w):
                continue
            if w == target:
                return True
            path.append(w)
            on.add(w)
            if dfs():
                return True
            path.pop()
            on.discard(w)
        return False

    return dfs()


def _fci_r9(g: MixedGraph, warnings: list[str]) -> bool:
    # a o-> c with an uncovered pd path (a, b, ..., c), b, c non-adjacent:
    # orient a -> c
    changed = False
    for a in g.nodes():
        for c in sorted(g.adjacents(a)):
            if g.marks(a, c) != (CIRCLE, ARROW):
                continue
            for b in sorted(g.adjacents(a)):
                if b == c or g.has_edge(b, c):
                    continue
                if not _is_pd_edge(g, a, b):
                    continue
                if _uncovered_pd_path_exists(g, a, b, c):
                    changed |= _set_mark_guarded(g, a, c, TAIL, warnings, "R9")
                    break
    return changed


def _fci_r10(g: MixedGraph, warnings: list[str]) -> bool:
    # a o-> c, b -> c <- d, uncovered pd paths a..b and a..d whose first hops
    # are distinct and non-adjacent: orient a -> c
    changed = False
    for c in g.nodes():
        parents_c = [v for v in sorted(g.adjacents(c))
                     if g.marks(v, c) == (TAIL, ARROW)]
        if len(parents_c) < 2:
            continue
        for a in sorted(g.adjacents(c)):
            if g.marks(a, c) != (CIRCLE, ARROW):
                continue
            hops = [m for m in sorted(g.adjacents(a))
                    if m != c and _is_pd_edge(g, a, m)]
            done = False
            for b, d in combinations(parents_c, 2):
                if done or a in (b, d):
                    continue
                mus = [m for m in hops if _uncovered_pd_path_exists(g, a, m, b)]
                oms = [m for m in hops if _uncovered_pd_path_exists(g, a, m, d)]
                for mu in mus:
                    for om in oms:
                        if mu != om and not g.has_edge(mu, om):
                            changed |= _set_mark_guarded(g, a, c, TAIL, warnings, "R10")
                            done = True
                            break
                    if done:
                        break
    return changed


def _fci_rules(g: MixedGraph, sepsets: SepSets, warnings: list[str]) -> None:
    changed = True
    while changed:
        changed = False
        changed |= _fci_r1(g, warnings)
        changed |= _fci_r2(g, warnings)
        changed |= _fci_r3(g, warnings)
        changed |= _fci_r4(g, sepsets, warnings)
        changed |= _fci_r8(g, warnings)
        changed |= _fci_r9(g, warnings)
        changed |= _fci_r10(g, warnings)


# -- FCI and Cluster-FCI ----------------------------------------------------------------


def _pds_stage(g: MixedGraph, tester: CiTester, sepsets: SepSets) -> None:
    """Re-test every ordered adjacent pair against subsets of its
    possible-d-separating set, deleting immediately on independence.

    Sizes start at 1: the skeleton phase already ran every pair marginally
    and the tests are deterministic, so re-testing the empty set cannot
    change any decision."""
    d = g.n
    for xi in g.nodes():
        for xj in sorted(g.adjacents(xi)):
            if not g.has_edge(xi, xj):
                continue
            pds = sorted(possible_d_sep(g, xi, xj))
            removed = False
            for k in range(1, max(1, d - 1)):
                if k > len(pds):
                    break
                for cond in combinations(pds, k):
                    if tester.test(xi, xj, cond).independent:
                        g.remove_edge(xi, xj)
                        sepsets[frozenset((xi, xj))] = cond
                        removed = True
                        break
                if removed:
                    break


def _reorient_all_circles(g: MixedGraph) -> None:
    for a, b, _, _ in g.edges():
        g.set_edge(a, b, CIRCLE, CIRCLE)


def fci(tester: CiTester, nodes: Sequence[str] | int) -> DiscoveryOutput:
    """Baseline FCI: skeleton from the complete o-o graph, colliders,
    possible-d-sep re-testing, full re-orientation to circles, colliders
    again, then rules R1-R4 and R8-R10 to a fixed point."""
    g = MixedGraph.complete(_as_labels(nodes), CIRCLE)
    sepsets: SepSets = {}
    warnings: list[str] = []
    _adjacency_skeleton(g, tester, sepsets)
    _fci_r0(g, sepsets, warnings)
    _pds_stage(g, tester, sepsets)
    _reorient_all_circles(g)
    _fci_r0(g, sepsets, warnings)
    _fci_rules(g, sepsets, warnings)
    return DiscoveryOutput("fci", g, sepsets, _stats_of(tester), None, warnings)


def _reorient_per_cluster_graph(g: MixedGraph, gc: ClusterGraph,
                                warnings: list[str]) -> None:
    """Reset surviving edges to the marks the cluster graph assigns, without
    adding edges.  Collider-stage arrowheads win over circles and an arrow is
    never downgraded to a tail; disagreements are logged."""
    bk = _cadmg_pair_marks(gc)
    for a, b, ma, mb in g.edges():
        target = bk.get((a, b))
        if target is None:
            warnings.append(f"edge ({a},{b}) survived outside the background "
                            "knowledge support; marks left unchanged")
            continue
        for at, other, cur, tgt in ((a, b, ma, target[0]), (b, a, mb, target[1])):
            if tgt == cur or tgt == CIRCLE:
                continue
            if cur == ARROW and tgt == TAIL:
                warnings.append(f"reorientation: arrow at {at} on edge "
                                f"({at},{other}) kept against background tail")
                continue
            if cur == CIRCLE:
                g.set_mark(at, other, tgt)
            else:
                warnings.append(f"reorientation: tail at {at} on edge "
                                f"({at},{other}) conflicts with background arrow")


def _repair_almost_directed_cycles(g: MixedGraph) -> None:
    """Turn x <-> y into x -> y whenever x is a directed-edge ancestor of y,
    repeating until no almost directed cycle remains."""
    changed = True
    while changed:
        changed = False
        for a, b, ma, mb in g.edges():
            if (ma, mb) != (ARROW, ARROW):
                continue
            if a in g.ancestors(b):
                g.set_edge(a, b, TAIL, ARROW)
                changed = True
            elif b in g.ancestors(a):
                g.set_edge(a, b, ARROW, TAIL)
                changed = True


def cluster_fci(tester: CiTester, gc: ClusterGraph,
                pag_mode: bool = True) -> DiscoveryOutput:
    """Cluster-FCI: start from the C-ADMG's partial mixed graph, test per
    cluster (locale = cluster plus parent and sibling clusters) over
    non-child pools, orient colliders, re-test over possible-d-sep sets,
    re-orient per the cluster graph, optionally repair almost directed
    cycles (PAG mode), then apply R0-R4 and R8-R10."""
    g = cadmg_to_partial_mixed(gc)
    part = gc.partition
    sepsets: SepSets = {}
    warnings: list[str] = []
    for m in gc.topological_clusters():
        members = sorted(part.clusters[m])
        locale = set(members)
        for p in gc.cluster_parents(m):
            locale |= part.clusters[p]
        for s in gc.cluster_siblings(m):
            locale |= part.clusters[s]
        for k in range(max(0, len(locale) - 1)):
            deleted: list[tuple[int, int]] = []
            seen_pairs: set[tuple[int, int]] = set()
            for xi in members:
                for xj in sorted(g.non_children(xi)):
                    pair = (min(xi, xj), max(xi, xj))
                    if pair in seen_pairs:
                        continue
                    seen_pairs.add(pair)
                    a, b = pair
                    if _try_separate(g, tester, sepsets, a, b,
                                     g.non_children(a) - {b},
                                     g.non_children(b) - {a}, k):
                        deleted.append(pair)
            for a, b in deleted:
                g.remove_edge(a, b)
    _fci_r0(g, sepsets, warnings)
    _pds_stage(g, tester, sepsets)
    _reorient_per_cluster_graph(g, gc, warnings)
    if pag_mode:
        _repair_almost_directed_cycles(g)
    _fci_r0(g, sepsets, warnings)
    _fci_rules(g, sepsets, warnings)
    for ci, cj in sorted(gc.directed):
        if not any(g.has_edge(a, b)
                   for a in part.clusters[ci] for b in part.clusters[cj]):
            warnings.append(
                f"background-knowledge violation: no surviving edge between "
                f"{part.names[ci]} and {part.names[cj]}")
    return DiscoveryOutput("cfci", g, sepsets, _stats_of(tester), pag_mode, warnings)
