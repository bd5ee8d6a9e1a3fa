"""Cluster-level background knowledge: cluster graphs over a node partition,
their compilation to micro-level start graphs, compatibility predicates,
pairwise-constraint compilation and tier derivation.

A cluster pair may carry a directed and a bidirected edge at the same time,
which the micro mark-pair encoding cannot express; cluster graphs therefore
use their own per-pair record.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Literal

from .graphs import ARROW, CIRCLE, TAIL, GraphError, Mark, MixedGraph


class InadmissiblePartitionError(GraphError):
    """The directed part of the induced cluster graph has a cycle."""


@dataclass(frozen=True)
class ClusterPartition:
    """Disjoint non-empty node sets covering 0..n-1, with display names."""

    labels: tuple[str, ...]                 # micro node labels, id = position
    clusters: tuple[frozenset[int], ...]
    names: tuple[str, ...]

    def __post_init__(self):
        n = len(self.labels)
        seen: set[int] = set()
        for c in self.clusters:
            if not c:
                raise GraphError("empty cluster")
            if c & seen:
                raise GraphError("clusters must be disjoint")
            seen |= c
        if seen != set(range(n)):
            raise GraphError("clusters must cover all nodes")
        if len(self.names) != len(self.clusters) or len(set(self.names)) != len(self.names):
            raise GraphError("cluster names must be unique, one per cluster")
        assignment = {}
        for ci, members in enumerate(self.clusters):
            for v in members:
                assignment[v] = ci
        object.__setattr__(self, "_assignment", assignment)

    @property
    def r(self) -> int:
        return len(self.clusters)

    def cluster_of(self, node: int) -> int:
        return self._assignment[node]

    @classmethod
    def from_sets(cls, labels: Iterable[str], sets: Iterable[Iterable[int]],
                  names: Iterable[str] | None = None) -> "ClusterPartition":
        sets = tuple(frozenset(s) for s in sets)
        if names is None:
            names = [f"C{i + 1}" for i in range(len(sets))]
        return cls(tuple(labels), sets, tuple(names))


class ClusterGraph:
    """A cluster partition plus per-pair directed/bidirected edge records.

    The directed part must be acyclic (the partition is then admissible).
    """

    def __init__(self, partition: ClusterPartition,
                 directed: Iterable[tuple[int, int]] = (),
                 bidirected: Iterable[tuple[int, int]] = ()):
        self.partition = partition
        self.directed: frozenset[tuple[int, int]] = frozenset(directed)
        self.bidirected: frozenset[tuple[int, int]] = frozenset(
            (min(a, b), max(a, b)) for a, b in bidirected)
        r = partition.r
        for a, b in self.directed | self.bidirected:
            if not (0 <= a < r and 0 <= b < r) or a == b:
                raise GraphError(f"bad cluster edge ({a}, {b})")
        if self._has_directed_cycle():
            raise InadmissiblePartitionError(
                "directed cluster edges form a cycle; partition is not admissible")

    # -- structure queries ----------------------------------------------------

    @property
    def r(self) -> int:
        return self.partition.r

    @property
    def labels(self) -> tuple[str, ...]:
        return self.partition.labels

    def cluster_parents(self, c: int) -> set[int]:
        return {a for a, b in self.directed if b == c}

    def cluster_children(self, c: int) -> set[int]:
        return {b for a, b in self.directed if a == c}

    def cluster_siblings(self, c: int) -> set[int]:
        out = set()
        for a, b in self.bidirected:
            if a == c:
                out.add(b)
            elif b == c:
                out.add(a)
        return out

    def adjacent(self, a: int, b: int) -> bool:
        key = (min(a, b), max(a, b))
        return (a, b) in self.directed or (b, a) in self.directed or key in self.bidirected

    def cluster_ancestors(self, c: int) -> set[int]:
        """Reflexive-transitive closure over the directed part only."""
        seen = {c}
        stack = [c]
        while stack:
            v = stack.pop()
            for p in self.cluster_parents(v):
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return seen

    def _has_directed_cycle(self) -> bool:
        indeg = [0] * self.r
        for _a, b in self.directed:
            indeg[b] += 1
        queue = [c for c in range(self.r) if indeg[c] == 0]
        done = 0
        while queue:
            v = queue.pop()
            done += 1
            for b in self.cluster_children(v):
                indeg[b] -= 1
                if indeg[b] == 0:
                    queue.append(b)
        return done != self.r

    def topological_clusters(self) -> list[int]:
        """Topological order of clusters over directed edges, index tie-break."""
        indeg = [0] * self.r
        for _a, b in self.directed:
            indeg[b] += 1
        heap = [c for c in range(self.r) if indeg[c] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for b in sorted(self.cluster_children(v)):
                indeg[b] -= 1
                if indeg[b] == 0:
                    heapq.heappush(heap, b)
        return order

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClusterGraph):
            return NotImplemented
        return (self.partition == other.partition and self.directed == other.directed
                and self.bidirected == other.bidirected)

    def __repr__(self) -> str:
        return (f"ClusterGraph(r={self.r}, directed={sorted(self.directed)}, "
                f"bidirected={sorted(self.bidirected)})")


def build_cluster_graph(g: MixedGraph, partition: ClusterPartition) -> ClusterGraph:
    """Induce the cluster graph of g: a directed (bidirected) cluster edge is
    present iff some cross-cluster micro edge of that kind exists.  Raises
    when the directed part is cyclic."""
    if g.has_circle_marks():
        raise GraphError("cluster graph construction needs a circle-free graph")
    if tuple(g.labels) != partition.labels:
        raise GraphError("partition labels do not match the graph")
    directed: set[tuple[int, int]] = set()
    bidirected: set[tuple[int, int]] = set()
    for a, b, ma, mb in g.edges():
        ca, cb = partition.cluster_of(a), partition.cluster_of(b)
        if ca == cb:
            continue
        if (ma, mb) == (TAIL, ARROW):
            directed.add((ca, cb))
        elif (ma, mb) == (ARROW, TAIL):
            directed.add((cb, ca))
        elif (ma, mb) == (ARROW, ARROW):
            bidirected.add((min(ca, cb), max(ca, cb)))
        else:
            raise GraphError("undirected micro edges cannot induce a cluster graph")
    return ClusterGraph(partition, directed, bidirected)


# -- transformations -----------------------------------------------------------


def cdag_to_mpdag(gc: ClusterGraph) -> MixedGraph:
    """Start graph for Cluster-PC: within-cluster pairs undirected, adjacent
    cluster pairs directed per the cluster edge, non-adjacent pairs deleted."""
    if gc.bidirected:
        raise GraphError("cluster graph has bidirected edges; "
                         "use cadmg_to_partial_mixed instead")
    g = MixedGraph(gc.labels)
    part = gc.partition
    for members in part.clusters:
        for a, b in combinations(sorted(members), 2):
            g.set_edge(a, b, TAIL, TAIL)
    for ci, cj in gc.directed:
        for a in sorted(part.clusters[ci]):
            for b in sorted(part.clusters[cj]):
                g.set_edge(a, b, TAIL, ARROW)
    return g


def _cluster_inducing_path(gc: ClusterGraph, ci: int, cj: int) -> bool:
    """Primitive inducing path between clusters, walking the parallel-edge
    cluster graph; colliders need arrowheads from the traversed edges and must
    be directed-part ancestors of an endpoint."""
    if gc.adjacent(ci, cj):
        return True
    anc = gc.cluster_ancestors(ci) | gc.cluster_ancestors(cj)
    adj: list[list[tuple[int, Mark, Mark]]] = [[] for _ in range(gc.r)]
    for a, b in gc.directed:
        adj[a].append((b, TAIL, ARROW))
        adj[b].append((a, ARROW, TAIL))
    for a, b in gc.bidirected:
        adj[a].append((b, ARROW, ARROW))
        adj[b].append((a, ARROW, ARROW))

    on_path = {ci}

    def extend(mark_in: Mark, v: int) -> bool:
        for w, mv, mw in sorted(adj[v]):
            if w in on_path:
                continue
            collider = mark_in == ARROW and mv == ARROW
            if not collider or v not in anc:
                continue
            if w == cj:
                return True
            on_path.add(w)
            if extend(mw, w):
                return True
            on_path.discard(w)
        return False

    for w, _mv, mw in sorted(adj[ci]):
        if w == cj:
            return True
        on_path.add(w)
        if extend(mw, w):
            return True
        on_path.discard(w)
    return False


def _cadmg_pair_marks(gc: ClusterGraph) -> dict[tuple[int, int], tuple[Mark, Mark]]:
    """Micro mark assignment per node pair implied by the C-ADMG.

    Pairs keyed (a, b) with a < b; pairs mapped nowhere get no edge.
    """
    part = gc.partition
    marks: dict[tuple[int, int], tuple[Mark, Mark]] = {}

    def put(a: int, b: int, ma: Mark, mb: Mark) -> None:
        if a < b:
            marks[(a, b)] = (ma, mb)
        else:
            marks[(b, a)] = (mb, ma)

    for members in part.clusters:
        for a, b in combinations(sorted(members), 2):
            put(a, b, CIRCLE, CIRCLE)
    for ci, cj in combinations(range(gc.r), 2):
        has_dir_ij = (ci, cj) in gc.directed
        has_dir_ji = (cj, ci) in gc.directed
        has_bi = (ci, cj) in gc.bidirected
        if not (has_dir_ij or has_dir_ji or has_bi):
            continue
        for a in sorted(part.clusters[ci]):
            for b in sorted(part.clusters[cj]):
                if has_dir_ij and not has_bi:
                    put(a, b, TAIL, ARROW)
                elif has_dir_ji and not has_bi:
                    put(a, b, ARROW, TAIL)
                elif has_dir_ij and has_bi:
                    put(a, b, CIRCLE, ARROW)
                elif has_dir_ji and has_bi:
                    put(a, b, ARROW, CIRCLE)
                else:
                    put(a, b, ARROW, ARROW)
    for ci, cj in combinations(range(gc.r), 2):
        if gc.adjacent(ci, cj):
            continue
        if not _cluster_inducing_path(gc, ci, cj):
            continue
        i_anc_of_j = ci in gc.cluster_ancestors(cj)
        j_anc_of_i = cj in gc.cluster_ancestors(ci)
        for a in sorted(part.clusters[ci]):
            for b in sorted(part.clusters[cj]):
                if i_anc_of_j:
                    put(a, b, TAIL, ARROW)
                elif j_anc_of_i:
                    put(a, b, ARROW, TAIL)
                else:
                    put(a, b, ARROW, ARROW)
    return marks


def cadmg_to_partial_mixed(gc: ClusterGraph) -> MixedGraph:
    """Start graph for Cluster-FCI: within-cluster o-o, adjacent cluster pairs
    mapped to -->, <->, o-> per the edge combination, and non-adjacent cluster
    pairs connected by a cluster-level inducing path to -->/<-> per ancestry."""
    g = MixedGraph(gc.labels)
    for (a, b), (ma, mb) in sorted(_cadmg_pair_marks(gc).items()):
        g.set_edge(a, b, ma, mb)
    return g


# -- compatibility ---------------------------------------------------------------

CompatKind = Literal["auto", "admg", "mpdag", "pm"]


def is_compatible_graph(g: MixedGraph, gc: ClusterGraph,
                        kind: CompatKind = "auto") -> bool:
    """Whether g is consistent with the cluster-level background knowledge.

    Dispatches on g's marks: circle marks use the partial-mixed-graph clauses,
    undirected edges the MPDAG clauses, everything else the DAG/ADMG rebuild
    check.  A MAG can be checked against the partial-mixed clauses explicitly
    with kind="pm".
    """
    if tuple(g.labels) != gc.labels:
        raise GraphError("node set mismatch between graph and cluster graph")
    if kind == "auto":
        if g.has_circle_marks():
            kind = "pm"
        elif any((ma, mb) == (TAIL, TAIL) for _, _, ma, mb in g.edges()):
            kind = "mpdag"
        else:
            kind = "admg"
    if kind == "admg":
        return _compatible_admg(g, gc)
    if kind == "mpdag":
        return _compatible_mpdag(g, gc)
    if kind == "pm":
        return _compatible_partial_mixed(g, gc)
    raise GraphError(f"unknown compatibility kind {kind!r}")


def _compatible_admg(g: MixedGraph, gc: ClusterGraph) -> bool:
    part = gc.partition
    realized: set[tuple[int, int]] = set()
    for a, b, ma, mb in g.edges():
        ca, cb = part.cluster_of(a), part.cluster_of(b)
        if ca == cb:
            continue
        if (ma, mb) == (TAIL, ARROW):
            if (ca, cb) not in gc.directed:
                return False
            realized.add((ca, cb))
        elif (ma, mb) == (ARROW, TAIL):
            if (cb, ca) not in gc.directed:
                return False
            realized.add((cb, ca))
        elif (ma, mb) == (ARROW, ARROW):
            if (min(ca, cb), max(ca, cb)) not in gc.bidirected:
                return False
        else:
            return False
    # every directed cluster edge needs at least one realizing micro edge;
    # bidirected cluster edges are permissive only
    return realized >= gc.directed


def _compatible_mpdag(g: MixedGraph, gc: ClusterGraph) -> bool:
    ref = cdag_to_mpdag(gc)
    for a, b, ma, mb in g.edges():
        rm = ref.marks(a, b)
        if rm is None:
            return False
        if (ma, mb) == (TAIL, TAIL):
            if rm != (TAIL, TAIL):
                return False
        elif (ma, mb) in ((TAIL, ARROW), (ARROW, TAIL)):
            # a directed edge may come from orienting an undirected reference
            # edge or from an identically directed one
            if rm != (TAIL, TAIL) and rm != (ma, mb):
                return False
        else:
            return False
    return True


def _compatible_partial_mixed(g: MixedGraph, gc: ClusterGraph) -> bool:
    ref = cadmg_to_partial_mixed(gc)
    for a, b, ma, mb in g.edges():
        rm = ref.marks(a, b)
        if rm is None:
            return False
        pair = (ma, mb)
        if pair == (CIRCLE, CIRCLE):
            if rm != (CIRCLE, CIRCLE):
                return False
        elif pair in ((CIRCLE, ARROW), (ARROW, CIRCLE)):
            if rm != (CIRCLE, CIRCLE) and rm != pair:
                return False
        elif pair == (ARROW, ARROW):
            if rm not in ((CIRCLE, CIRCLE), (CIRCLE, ARROW), (ARROW, CIRCLE),
                          (ARROW, ARROW)):
                return False
        elif pair in ((TAIL, ARROW), (ARROW, TAIL)):
            # a directed edge a -> b requires a in nch(b) of the reference graph
            child, parent = (b, a) if pair == (TAIL, ARROW) else (a, b)
            if parent not in ref.non_children(child):
                return False
        else:
            return False
    return True


def explain_incompatibility(g: MixedGraph, gc: ClusterGraph,
                            kind: CompatKind = "auto") -> str | None:
    """Human-readable reason g fails the compatibility check, or None."""
    if is_compatible_graph(g, gc, kind):
        return None
    part = gc.partition
    names = part.names

    def edge_desc(a, b, ma, mb):
        la, lb = part.labels[a], part.labels[b]
        if (ma, mb) == (TAIL, ARROW):
            return f"edge {la}->{lb}"
        if (ma, mb) == (ARROW, TAIL):
            return f"edge {lb}->{la}"
        return f"edge between {la} and {lb}"

    if kind == "auto":
        if g.has_circle_marks():
            kind = "pm"
        elif any((ma, mb) == (TAIL, TAIL) for _, _, ma, mb in g.edges()):
            kind = "mpdag"
        else:
            kind = "admg"
    for a, b, ma, mb in g.edges():
        trial = MixedGraph(part.labels)
        trial.set_edge(a, b, ma, mb)
        if kind == "admg":
            licensed = _compatible_admg_edges_only(trial, gc)
        else:
            licensed = is_compatible_graph(trial, gc, kind)
        if not licensed:
            ca, cb = part.cluster_of(a), part.cluster_of(b)
            rel = f"{names[ca]}/{names[cb]}" if ca != cb else names[ca]
            return f"{edge_desc(a, b, ma, mb)} violates {rel} cluster knowledge"
    for ci, cj in sorted(gc.directed):
        if not any(g.has_directed_edge(x, y)
                   for x in part.clusters[ci] for y in part.clusters[cj]):
            return (f"no surviving edge realizes the cluster edge "
                    f"{names[ci]} --> {names[cj]}")
    return "graph violates the cluster-level background knowledge"


def _compatible_admg_edges_only(g: MixedGraph, gc: ClusterGraph) -> bool:
    """ADMG-route licensing of the edges present, ignoring realization."""
    part = gc.partition
    for a, b, ma, mb in g.edges():
        ca, cb = part.cluster_of(a), part.cluster_of(b)
        if ca == cb:
            continue
        if (ma, mb) == (TAIL, ARROW):
            if (ca, cb) not in gc.directed:
                return False
        elif (ma, mb) == (ARROW, TAIL):
            if (cb, ca) not in gc.directed:
                return False
        elif (ma, mb) == (ARROW, ARROW):
            if (min(ca, cb), max(ca, cb)) not in gc.bidirected:
                return False
        else:
            return False
    return True


# -- pairwise constraint compilation ----------------------------------------------


@dataclass(frozen=True)
class PairwiseClause:
    """One cluster-pair clause of the compiled background knowledge.

    kind 'dir':  no member of cj is an ancestor of a member of ci, and at
                 least one micro edge ci -> cj exists.
    kind 'anc':  no member of cj is an ancestor of a member of ci, and no
                 direct micro edge ci -> cj exists.
    kind 'nrel': no ancestry between members in either direction.
    kind 'nlat': no bidirected micro edge between members.
    """

    kind: Literal["dir", "anc", "nrel", "nlat"]
    ci: int
    cj: int


@dataclass(frozen=True)
class PairwiseConstraintSet:
    partition: ClusterPartition
    clauses: tuple[PairwiseClause, ...]

    def describe(self) -> list[str]:
        names = self.partition.names
        return [f"{c.kind}({names[c.ci]},{names[c.cj]})" for c in self.clauses]


def pairwise_constraints(gc: ClusterGraph,
                         include_latent_clauses: bool = True) -> PairwiseConstraintSet:
    """Compile the cluster graph into its conjunction of pairwise clauses.

    dir for each directed cluster edge, anc for strictly-ancestral
    non-adjacent ordered pairs, nrel for mutually non-ancestral pairs, and
    (in C-ADMG mode) nlat for every pair without a bidirected cluster edge.
    """
    clauses: list[PairwiseClause] = []
    for ci, cj in sorted(gc.directed):
        clauses.append(PairwiseClause("dir", ci, cj))
    for ci in range(gc.r):
        for cj in range(gc.r):
            if ci == cj or (ci, cj) in gc.directed or (cj, ci) in gc.directed:
                continue
            i_anc_j = ci in gc.cluster_ancestors(cj)
            j_anc_i = cj in gc.cluster_ancestors(ci)
            if i_anc_j:
                clauses.append(PairwiseClause("anc", ci, cj))
            elif not j_anc_i and ci < cj:
                clauses.append(PairwiseClause("nrel", ci, cj))
    if include_latent_clauses:
        for ci, cj in combinations(range(gc.r), 2):
            if (ci, cj) not in gc.bidirected:
                clauses.append(PairwiseClause("nlat", ci, cj))
    return PairwiseConstraintSet(gc.partition, tuple(clauses))


def evaluate_constraints(bk: PairwiseConstraintSet, g: MixedGraph) -> bool:
    """Evaluate the compiled clauses against a DAG or ADMG."""
    if g.has_circle_marks():
        raise GraphError("constraint evaluation needs a circle-free graph")
    if tuple(g.labels) != bk.partition.labels:
        raise GraphError("node set mismatch")
    part = bk.partition
    anc = [g.ancestors(v) for v in g.nodes()]

    def has_dir_edge(a: int, b: int) -> bool:
        return g.has_directed_edge(a, b)

    def has_bi_edge(a: int, b: int) -> bool:
        return g.marks(a, b) == (ARROW, ARROW)

    for cl in bk.clauses:
        mi = sorted(part.clusters[cl.ci])
        mj = sorted(part.clusters[cl.cj])
        if cl.kind == "dir":
            if any(b in anc[a] for a in mi for b in mj):
                return False
            if not any(has_dir_edge(a, b) for a in mi for b in mj):
                return False
        elif cl.kind == "anc":
            if any(b in anc[a] for a in mi for b in mj):
                return False
            if any(has_dir_edge(a, b) for a in mi for b in mj):
                return False
        elif cl.kind == "nrel":
            if any(b in anc[a] or a in anc[b] for a in mi for b in mj):
                return False
        elif cl.kind == "nlat":
            if any(has_bi_edge(a, b) for a in mi for b in mj):
                return False
    return True


# -- tiers -----------------------------------------------------------------------


@dataclass(frozen=True)
class TierList:
    """Ordered disjoint node sets covering all nodes."""

    labels: tuple[str, ...]
    tiers: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for t in self.tiers:
            if not t or t & seen:
                raise GraphError("tiers must be disjoint and non-empty")
            seen |= t
        if seen != set(range(len(self.labels))):
            raise GraphError("tiers must cover all nodes")


def tiers_from_cluster_graph(gc: ClusterGraph) -> TierList:
    """Merge clusters along bidirected connectivity, then along any directed
    cycles the merging created, then sort topologically."""
    # union-find over bidirected components
    parent = list(range(gc.r))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for a, b in gc.bidirected:
        union(a, b)

    def merged_edges() -> set[tuple[int, int]]:
        out = set()
        for a, b in gc.directed:
            ra, rb = find(a), find(b)
            if ra != rb:
                out.add((ra, rb))
        return out

    # collapse strongly connected components of the merged directed graph
    while True:
        edges = merged_edges()
        roots = sorted({find(c) for c in range(gc.r)})
        sccs = _strongly_connected(roots, edges)
        changed = False
        for comp in sccs:
            if len(comp) > 1:
                base = min(comp)
                for c in comp:
                    union(base, c)
                changed = True
        if not changed:
            break

    groups: dict[int, set[int]] = {}
    for c in range(gc.r):
        groups.setdefault(find(c), set()).add(c)
    edges = merged_edges()
    roots = sorted(groups)
    indeg = {r_: 0 for r_ in roots}
    children: dict[int, list[int]] = {r_: [] for r_ in roots}
    for a, b in edges:
        indeg[b] += 1
        children[a].append(b)
    heap = [r_ for r_ in roots if indeg[r_] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for b in sorted(children[v]):
            indeg[b] -= 1
            if indeg[b] == 0:
                heapq.heappush(heap, b)
    tiers = []
    for r_ in order:
        members: set[int] = set()
        for c in groups[r_]:
            members |= gc.partition.clusters[c]
        tiers.append(frozenset(members))
    return TierList(gc.labels, tuple(tiers))


def _strongly_connected(nodes: list[int], edges: set[tuple[int, int]]) -> list[set[int]]:
    """Iterative Tarjan over a small explicit digraph."""
    succ: dict[int, list[int]] = {v: [] for v in nodes}
    for a, b in sorted(edges):
        succ[a].append(b)
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    sccs: list[set[int]] = []
    counter = [0]

    def strongconnect(v0: int) -> None:
        work = [(v0, iter(succ[v0]))]
        index[v0] = low[v0] = counter[0]
        counter[0] += 1
        stack.append(v0)
        on_stack.add(v0)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                sccs.append(comp)

    for v in nodes:
        if v not in index:
            strongconnect(v)
    return sccs


def satisfies_tiered_bk(g: MixedGraph, tiers: TierList) -> bool:
    """Every cross-tier pair (A earlier, B later) has A an ancestor of B or
    A, B non-adjacent."""
    from .graphs import classify

    if tuple(g.labels) != tiers.labels:
        raise GraphError("node set mismatch")
    rep = classify(g, check_maximality=False)
    if not rep.is_ancestral or g.has_circle_marks():
        raise GraphError("tiered background knowledge is defined on MAGs")
    anc = [g.ancestors(v) for v in g.nodes()]
    for i, ti in enumerate(tiers.tiers):
        for tj in tiers.tiers[i + 1:]:
            for a in ti:
                for b in tj:
                    if a in anc[b]:
                        continue
                    if not g.has_edge(a, b):
                        continue
                    return False
    return True


# -- cluster file format ----------------------------------------------------------


def parse_cluster_file(text: str) -> ClusterGraph:
    """Parse `cluster NAME: LAB1 LAB2 ...` lines followed by cluster edges in
    the edge-list syntax over cluster names (`C1 --> C2`, `C1 <-> C2`)."""
    from .graphs import _TOKEN_TO_MARKS

    names: list[str] = []
    member_labels: list[list[str]] = []
    edge_lines: list[tuple[str, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("cluster"):
            head, _, rest = line.partition(":")
            name = head[len("cluster"):].strip()
            labs = rest.split()
            if not name or not labs:
                raise GraphError(f"line {lineno}: expected 'cluster NAME: LABELS'")
            names.append(name)
            member_labels.append(labs)
            continue
        parts = line.split()
        if len(parts) != 3 or parts[1] not in _TOKEN_TO_MARKS:
            raise GraphError(f"line {lineno}: expected a cluster edge, got {raw!r}")
        edge_lines.append((parts[0], parts[1], parts[2]))

    labels: list[str] = []
    for labs in member_labels:
        labels.extend(labs)
    if len(set(labels)) != len(labels):
        raise GraphError("node label repeated across clusters")
    lab_index = {lab: i for i, lab in enumerate(labels)}
    sets = []
    pos = 0
    for labs in member_labels:
        sets.append(frozenset(lab_index[l] for l in labs))
        pos += len(labs)
    part = ClusterPartition(tuple(labels), tuple(sets), tuple(names))
    name_index = {nm: i for i, nm in enumerate(names)}

    directed: set[tuple[int, int]] = set()
    bidirected: set[tuple[int, int]] = set()
    for a, tok, b in edge_lines:
        if a not in name_index or b not in name_index:
            raise GraphError(f"unknown cluster name in edge '{a} {tok} {b}'")
        ca, cb = name_index[a], name_index[b]
        ma, mb = _TOKEN_TO_MARKS[tok]
        if (ma, mb) == (TAIL, ARROW):
            directed.add((ca, cb))
        elif (ma, mb) == (ARROW, TAIL):
            directed.add((cb, ca))
        elif (ma, mb) == (ARROW, ARROW):
            bidirected.add((ca, cb))
        else:
            raise GraphError(f"cluster edges must be --> or <->, got {tok!r}")
    return ClusterGraph(part, directed, bidirected)


def format_cluster_file(gc: ClusterGraph) -> str:
    part = gc.partition
    lines = []
    for name, members in zip(part.names, part.clusters):
        labs = " ".join(part.labels[v] for v in sorted(members))
        lines.append(f"cluster {name}: {labs}")
    for a, b in sorted(gc.directed):
        lines.append(f"{part.names[a]} --> {part.names[b]}")
    for a, b in sorted(gc.bidirected):
        lines.append(f"{part.names[a]} <-> {part.names[b]}")
    return "\n".join(lines) + "\n"
