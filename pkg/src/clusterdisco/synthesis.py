"""Ground-truth generation: random DAG ensembles, cluster partitions carved
dag-first or cdag-first, linear-SEM sampling under three noise families, and
latent projection to MAGs for the partially observed studies.

Everything is a pure function of (config, seed); replications derive child
seeds with numpy SeedSequence spawning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Literal

import numpy as np

from .clusters import ClusterGraph, ClusterPartition, build_cluster_graph
from .graphs import ARROW, TAIL, GraphError, MixedGraph, default_labels
from .separation import _reachable

GraphMethod = Literal["erdos_renyi", "scale_free", "hierarchical"]
ClusterMethod = Literal["dag_first", "cdag_first"]
Noise = Literal["gaussian", "exponential", "gumbel"]


@dataclass(frozen=True)
class GenConfig:
    n_nodes: int = 15
    n_edges: int = 30
    n_clusters: int = 3
    graph_method: GraphMethod = "erdos_renyi"
    cluster_method: ClusterMethod = "dag_first"
    noise: Noise = "gaussian"
    weight_low: float = -1.0
    weight_high: float = 2.0
    n_samples: int = 1000
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.n_clusters <= self.n_nodes:
            raise ValueError("need 1 <= n_clusters <= n_nodes")
        if self.n_edges > self.n_nodes * (self.n_nodes - 1) // 2:
            raise ValueError("n_edges exceeds the simple-graph maximum")
        if not self.weight_low < self.weight_high:
            raise ValueError("need weight_low < weight_high")


@dataclass(frozen=True)
class GroundTruth:
    dag: MixedGraph                      # over observed + latent nodes
    latents: frozenset[int]
    observed: tuple[int, ...]            # full-graph ids, sorted
    observed_mag: MixedGraph | None
    cluster_graph: ClusterGraph          # over observed nodes
    dataset: "Dataset"

    @property
    def observed_dag(self) -> MixedGraph:
        return restrict_to_observed(self.dag, self.latents)


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


# -- random DAGs -------------------------------------------------------------------


def gen_dag(cfg: GenConfig, rng: np.random.Generator | None = None) -> MixedGraph:
    """Random DAG with exactly cfg.n_edges edges (where feasible)."""
    rng = _rng(cfg.seed) if rng is None else rng
    n, m = cfg.n_nodes, cfg.n_edges
    labels = default_labels(n)
    if cfg.graph_method == "erdos_renyi":
        return _gen_erdos_renyi(labels, n, m, rng)
    if cfg.graph_method == "scale_free":
        return _gen_scale_free(labels, n, m, rng)
    if cfg.graph_method == "hierarchical":
        return _gen_hierarchical(labels, n, m, rng)
    raise ValueError(f"unknown graph method {cfg.graph_method!r}")


def _gen_erdos_renyi(labels, n, m, rng) -> MixedGraph:
    order = rng.permutation(n)
    rank = np.empty(n, dtype=int)
    rank[order] = np.arange(n)
    pairs = list(combinations(range(n), 2))
    chosen = rng.choice(len(pairs), size=m, replace=False)
    g = MixedGraph(labels)
    for idx in sorted(chosen):
        u, v = pairs[idx]
        if rank[u] > rank[v]:
            u, v = v, u
        g.set_edge(u, v, TAIL, ARROW)
    return g


def _gen_scale_free(labels, n, m, rng) -> MixedGraph:
    # preferential attachment: later nodes link back to earlier ones drawn
    # with probability proportional to degree + 1; edges point along the
    # insertion order
    if m > n * (n - 1) // 2:
        raise ValueError("infeasible edge count")
    g = MixedGraph(labels)
    degree = np.zeros(n)
    added = 0
    attempts = 0
    while added < m:
        attempts += 1
        if attempts > 50 * m + 100:
            raise GraphError("scale-free generation stalled")
        open_targets = [v for v in range(1, n)
                        if len(g.parents(v)) < v]
        if not open_targets:
            break
        v = int(rng.choice(open_targets))
        cands = [u for u in range(v) if not g.has_edge(u, v)]
        w = degree[cands] + 1.0
        u = int(rng.choice(cands, p=w / w.sum()))
        g.set_edge(u, v, TAIL, ARROW)
        degree[u] += 1
        degree[v] += 1
        added += 1
    return g


def _gen_hierarchical(labels, n, m, rng) -> MixedGraph:
    # layered DAG: nodes split over ceil(sqrt(n)) layers, edges only from
    # earlier to later layers
    n_layers = math.ceil(math.sqrt(n))
    perm = rng.permutation(n)
    layer = np.empty(n, dtype=int)
    sizes = [len(chunk) for chunk in np.array_split(np.arange(n), n_layers)]
    pos = 0
    for li, size in enumerate(sizes):
        for v in perm[pos:pos + size]:
            layer[v] = li
        pos += size
    pairs = [(u, v) for u, v in combinations(range(n), 2) if layer[u] != layer[v]]
    pairs = [((u, v) if layer[u] < layer[v] else (v, u)) for u, v in pairs]
    if m > len(pairs):
        raise ValueError("infeasible edge count for the layered structure")
    chosen = rng.choice(len(pairs), size=m, replace=False)
    g = MixedGraph(labels)
    for idx in sorted(chosen):
        u, v = pairs[idx]
        g.set_edge(u, v, TAIL, ARROW)
    return g


# -- cluster carving ----------------------------------------------------------------


def partition_dag_first(g: MixedGraph, r: int,
                        rng: np.random.Generator) -> tuple[ClusterPartition, ClusterGraph]:
    """Slice the topological ordering into r contiguous clusters at r-1
    distinct random cut points; admissible by construction."""
    n = g.n
    if not 1 <= r <= n:
        raise ValueError("need 1 <= r <= n")
    topo = g.topological_order()
    cuts = sorted(rng.choice(np.arange(2, n + 1), size=r - 1, replace=False)) if r > 1 else []
    bounds = [0] + [c - 1 for c in cuts] + [n]
    sets = [frozenset(topo[bounds[i]:bounds[i + 1]]) for i in range(r)]
    part = ClusterPartition.from_sets(g.labels, sets)
    return part, build_cluster_graph(g, part)


def gen_cdag_first(cfg: GenConfig,
                   rng: np.random.Generator | None = None) -> tuple[ClusterGraph, MixedGraph]:
    """Sample a cluster-level DAG first, instantiate the maximal compatible
    micro DAG, then drop micro edges so the expected count matches
    cfg.n_edges.  The returned cluster graph is re-induced from the thinned
    DAG, so compatibility holds by construction; no bidirected edges."""
    rng = _rng(cfg.seed) if rng is None else rng
    n, r = cfg.n_nodes, cfg.n_clusters
    if r > n:
        raise ValueError("more clusters than nodes")
    # random composition of n into r positive parts
    cuts = sorted(rng.choice(np.arange(1, n), size=r - 1, replace=False)) if r > 1 else []
    bounds = [0] + list(cuts) + [n]
    sizes = [bounds[i + 1] - bounds[i] for i in range(r)]
    members = []
    pos = 0
    for size in sizes:
        members.append(frozenset(range(pos, pos + size)))
        pos += size
    labels = default_labels(n)
    part = ClusterPartition.from_sets(labels, members)
    # cluster-level Erdos-Renyi DAG along the index order
    cluster_edges = [(i, j) for i, j in combinations(range(r), 2)
                     if rng.random() < 0.5]
    # maximal compatible micro DAG
    full = MixedGraph(labels)
    for ci in range(r):
        for a, b in combinations(sorted(members[ci]), 2):
            full.set_edge(a, b, TAIL, ARROW)
    for ci, cj in cluster_edges:
        for a in sorted(members[ci]):
            for b in sorted(members[cj]):
                full.set_edge(a, b, TAIL, ARROW)
    total = full.n_edges()
    keep = min(1.0, cfg.n_edges / total) if total else 0.0
    g = MixedGraph(labels)
    for a, b, ma, mb in full.edges():
        if rng.random() < keep:
            g.set_edge(a, b, ma, mb)
    return build_cluster_graph(g, part), g


# -- linear SEM sampling ---------------------------------------------------------------


def _standardized_noise(noise: Noise, size, rng: np.random.Generator) -> np.ndarray:
    if noise == "gaussian":
        return rng.standard_normal(size)
    if noise == "exponential":
        return rng.exponential(1.0, size) - 1.0
    if noise == "gumbel":
        euler_gamma = 0.5772156649015329
        return (rng.gumbel(0.0, 1.0, size) - euler_gamma) / (math.pi / math.sqrt(6.0))
    raise ValueError(f"unknown noise family {noise!r}")


def draw_weights(g: MixedGraph, cfg: GenConfig,
                 rng: np.random.Generator) -> dict[tuple[int, int], float]:
    weights = {}
    for a, b, ma, mb in g.edges():
        u, v = (a, b) if (ma, mb) == (TAIL, ARROW) else (b, a)
        weights[(u, v)] = float(rng.uniform(cfg.weight_low, cfg.weight_high))
    return weights


def sample_sem(g: MixedGraph, cfg: GenConfig, rng: np.random.Generator | None = None,
               weights: dict[tuple[int, int], float] | None = None) -> "Dataset":
    """Each variable is a weighted sum of its parents plus standardized noise;
    columns ordered by node index."""
    from .ci import Dataset

    rng = _rng(cfg.seed) if rng is None else rng
    if weights is None:
        weights = draw_weights(g, cfg, rng)
    n = g.n
    data = np.zeros((cfg.n_samples, n))
    for v in g.topological_order():
        col = _standardized_noise(cfg.noise, cfg.n_samples, rng)
        for u in sorted(g.parents(v)):
            col = col + weights[(u, v)] * data[:, u]
        data[:, v] = col
    return Dataset(tuple(g.labels), data)


def analytic_covariance(g: MixedGraph, weights: dict[tuple[int, int], float]) -> np.ndarray:
    """Population covariance of the linear SEM with unit-variance noise."""
    n = g.n
    w = np.zeros((n, n))
    for (u, v), val in weights.items():
        w[u, v] = val
    eye = np.eye(n)
    m = np.linalg.inv(eye - w)  # rows: noise -> columns: variables
    return m.T @ m


# -- latent projection ------------------------------------------------------------------


def restrict_to_observed(g: MixedGraph, latents: frozenset[int]) -> MixedGraph:
    observed = [v for v in g.nodes() if v not in latents]
    sub = MixedGraph([g.labels[v] for v in observed])
    pos = {v: i for i, v in enumerate(observed)}
    for a, b, ma, mb in g.edges():
        if a in pos and b in pos:
            sub.set_edge(pos[a], pos[b], ma, mb)
    return sub


def project_to_mag(g: MixedGraph, latents: frozenset[int]) -> MixedGraph:
    """Latent projection of a DAG: observed x, y are adjacent iff they cannot
    be separated by observed ancestors of the pair; the edge is directed by
    full-graph ancestry, bidirected when neither end is an ancestor."""
    observed = sorted(v for v in g.nodes() if v not in latents)
    mag = MixedGraph([g.labels[v] for v in observed])
    pos = {v: i for i, v in enumerate(observed)}
    anc = {v: g.ancestors(v) for v in observed}
    for x, y in combinations(observed, 2):
        dsep_pool = frozenset((anc[x] | anc[y]) - {x, y} - latents)
        if _reachable(g, frozenset((x,)), frozenset((y,)), dsep_pool):
            if x in anc[y]:
                mag.set_edge(pos[x], pos[y], TAIL, ARROW)
            elif y in anc[x]:
                mag.set_edge(pos[x], pos[y], ARROW, TAIL)
            else:
                mag.set_edge(pos[x], pos[y], ARROW, ARROW)
    return mag


# -- ground-truth assembly ----------------------------------------------------------------


def _choose_latents_anywhere(n: int, rng: np.random.Generator) -> frozenset[int]:
    # each node latent with probability 0.15, redrawn to keep 1 <= |L| <= n/3
    for _ in range(1000):
        lat = frozenset(int(v) for v in np.flatnonzero(rng.random(n) < 0.15))
        if 1 <= len(lat) <= n // 3:
            return lat
    raise GraphError("latent drawing failed to satisfy the size bounds")


def _add_within_cluster_confounders(g: MixedGraph, part: ClusterPartition,
                                    n_conf: int, rng: np.random.Generator
                                    ) -> tuple[MixedGraph, frozenset[int]]:
    """Append latent nodes, each a parent of two distinct nodes in one
    cluster, so the projected MAG confounds only within clusters."""
    n = g.n
    labels = list(g.labels) + [f"L{i + 1}" for i in range(n_conf)]
    big = MixedGraph(labels)
    for a, b, ma, mb in g.edges():
        big.set_edge(a, b, ma, mb)
    eligible = [ci for ci, mem in enumerate(part.clusters) if len(mem) >= 2]
    latents = []
    for i in range(n_conf):
        if not eligible:
            break
        ci = int(rng.choice(eligible))
        pair = rng.choice(sorted(part.clusters[ci]), size=2, replace=False)
        lid = n + len(latents)
        big.set_edge(lid, int(pair[0]), TAIL, ARROW)
        big.set_edge(lid, int(pair[1]), TAIL, ARROW)
        latents.append(lid)
    used = MixedGraph(list(g.labels) + [f"L{i + 1}" for i in range(len(latents))])
    for a, b, ma, mb in big.edges():
        if a < n + len(latents) and b < n + len(latents):
            used.set_edge(a, b, ma, mb)
    return used, frozenset(latents)


def gen_ground_truth(cfg: GenConfig, with_latents: bool = False,
                     latent_mode: Literal["anywhere", "within_cluster"] = "anywhere"
                     ) -> GroundTruth:
    """Compose generation, clustering, optional latent designation and
    projection, and SEM sampling into one instance."""
    ss = np.random.SeedSequence(cfg.seed)
    rng_graph, rng_cluster, rng_latent, rng_data = [
        np.random.default_rng(s) for s in ss.spawn(4)]

    if not with_latents:
        if cfg.cluster_method == "dag_first":
            dag = gen_dag(cfg, rng_graph)
            part, gc = partition_dag_first(dag, cfg.n_clusters, rng_cluster)
        else:
            gc, dag = gen_cdag_first(cfg, rng_graph)
        dataset = sample_sem(dag, cfg, rng_data)
        return GroundTruth(dag, frozenset(), tuple(range(dag.n)), None, gc, dataset)

    if latent_mode == "anywhere":
        dag = gen_dag(cfg, rng_graph)
        latents = _choose_latents_anywhere(dag.n, rng_latent)
        observed = tuple(v for v in dag.nodes() if v not in latents)
        mag = project_to_mag(dag, latents)
        # contiguous slices of the topological order restricted to observed nodes
        topo_obs = [v for v in dag.topological_order() if v not in latents]
        r = min(cfg.n_clusters, len(observed))
        cuts = sorted(rng_cluster.choice(np.arange(2, len(topo_obs) + 1),
                                         size=r - 1, replace=False)) if r > 1 else []
        bounds = [0] + [c - 1 for c in cuts] + [len(topo_obs)]
        pos = {v: i for i, v in enumerate(sorted(observed))}
        sets = [frozenset(pos[v] for v in topo_obs[bounds[i]:bounds[i + 1]])
                for i in range(r)]
        part = ClusterPartition.from_sets(mag.labels, sets)
        gc = build_cluster_graph(mag, part)
        full_data = sample_sem(dag, cfg, rng_data)
        dataset = _observed_columns(full_data, observed)
        return GroundTruth(dag, latents, tuple(sorted(observed)), mag, gc, dataset)

    if latent_mode == "within_cluster":
        base_cfg = cfg
        for attempt in range(50):
            gc0, obs_dag = gen_cdag_first(base_cfg, rng_graph)
            n_conf = max(1, round(0.15 * cfg.n_nodes))
            dag, latents = _add_within_cluster_confounders(
                obs_dag, gc0.partition, n_conf, rng_latent)
            observed = tuple(range(obs_dag.n))
            mag = project_to_mag(dag, latents)
            part = gc0.partition
            gc = build_cluster_graph(mag, part)
            if not gc.bidirected:
                full_data = sample_sem(dag, cfg, rng_data)
                dataset = _observed_columns(full_data, observed)
                return GroundTruth(dag, latents, observed, mag, gc, dataset)
        raise GraphError("within-cluster confounding kept leaking across "
                         "clusters; instance rejected")

    raise ValueError(f"unknown latent mode {latent_mode!r}")


def _observed_columns(dataset, observed: tuple[int, ...]):
    from .ci import Dataset

    idx = sorted(observed)
    return Dataset(tuple(dataset.labels[i] for i in idx), dataset.samples[:, idx])
