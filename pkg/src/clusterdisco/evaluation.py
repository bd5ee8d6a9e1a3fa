"""Metrics (adjacency/arrow precision, recall, F1, SHD, CI counts) and the
experiment runner that reproduces the simulation studies at configurable
scale.

Estimates are scored against equivalence-class references: the CPDAG of the
true DAG for the PC family, the maximally informative PAG of the true MAG
(an oracle FCI run) for the FCI family.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Literal

from .ci import CountingCI, FisherZCI, OracleCI
from .discovery import cluster_fci, cluster_pc, cpdag_from_dag, fci, pc
from .graphs import ARROW, GraphError, MixedGraph
from .synthesis import GenConfig, GroundTruth, gen_ground_truth

Mode = Literal["adjacency", "arrow"]


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int
    mode: Mode


def confusion(est: MixedGraph, ref: MixedGraph, mode: Mode) -> ConfusionCounts:
    """Adjacency mode counts unordered pairs; arrow mode counts endpoint
    marks on pairs with an edge in either graph, an arrow being the positive
    class and a missing edge counting as two non-arrow marks."""
    if est.labels != ref.labels:
        raise GraphError("node set mismatch")
    tp = fp = fn = tn = 0
    if mode == "adjacency":
        for a, b in combinations(range(est.n), 2):
            e, r = est.has_edge(a, b), ref.has_edge(a, b)
            if e and r:
                tp += 1
            elif e:
                fp += 1
            elif r:
                fn += 1
            else:
                tn += 1
        return ConfusionCounts(tp, fp, fn, tn, mode)
    if mode != "arrow":
        raise ValueError(f"unknown mode {mode!r}")
    for a, b in combinations(range(est.n), 2):
        em, rm = est.marks(a, b), ref.marks(a, b)
        if em is None and rm is None:
            continue
        for end in (0, 1):
            e_arrow = em is not None and em[end] == ARROW
            r_arrow = rm is not None and rm[end] == ARROW
            if e_arrow and r_arrow:
                tp += 1
            elif e_arrow:
                fp += 1
            elif r_arrow:
                fn += 1
            else:
                tn += 1
    return ConfusionCounts(tp, fp, fn, tn, mode)


def precision_recall_f1(c: ConfusionCounts,
                        conventional: bool = False) -> tuple[float, float, float]:
    """Precision, recall and F1.  The default F1 is precision*recall /
    (precision+recall); conventional=True doubles it to the usual harmonic
    mean.  Zero denominators yield 0."""
    p = c.tp / (c.tp + c.fp) if c.tp + c.fp else 0.0
    r = c.tp / (c.tp + c.fn) if c.tp + c.fn else 0.0
    f1 = p * r / (p + r) if p + r else 0.0
    if conventional:
        f1 *= 2.0
    return p, r, f1


def shd(g1: MixedGraph, g2: MixedGraph) -> int:
    """Edge insertions/deletions plus one per present-in-both pair whose mark
    pair differs in any way."""
    if g1.labels != g2.labels:
        raise GraphError("node set mismatch")
    total = 0
    for a, b in combinations(range(g1.n), 2):
        m1, m2 = g1.marks(a, b), g2.marks(a, b)
        if (m1 is None) != (m2 is None):
            total += 1
        elif m1 is not None and m1 != m2:
            total += 1
    return total


def reference_graph(truth: GroundTruth, family: Literal["pc", "fci"],
                    restrict_to_background: bool = False) -> MixedGraph:
    """CPDAG of the true DAG for the PC family; the maximally informative PAG
    of the true MAG, computed by an oracle FCI run, for the FCI family.

    restrict_to_background scores against the background-restricted MPDAG
    instead (PC family only); the default keeps one shared target for PC and
    Cluster-PC."""
    if family == "pc":
        ref = cpdag_from_dag(truth.observed_dag)
        if restrict_to_background:
            from .discovery import impose_background
            ref = impose_background(ref, truth.cluster_graph)
        return ref
    if family == "fci":
        if truth.observed_mag is None:
            raise GraphError("no observed MAG on this ground truth")
        return fci(OracleCI(truth.observed_mag), truth.observed_mag.labels).graph
    raise ValueError(f"unknown family {family!r}")


# -- study definitions ------------------------------------------------------------


@dataclass(frozen=True)
class StudySpec:
    name: str
    algorithms: tuple[str, ...]
    n_nodes: int
    edge_counts: tuple[int, ...]
    cluster_counts: tuple[int, ...]
    alphas: tuple[float, ...]
    distributions: tuple[str, ...]
    graph_methods: tuple[str, ...]
    n_samples: int
    reps: int
    cluster_method: str = "dag_first"
    with_latents: bool = False
    latent_mode: str = "anywhere"
    weight_low: float = -1.0
    weight_high: float = 2.0


STUDIES: dict[str, StudySpec] = {
    "sim1": StudySpec(
        "sim1", ("pc", "cpc"), 15, (15, 30, 50, 80, 150), (1, 2, 3, 4, 5, 6, 7),
        (0.01, 0.05, 0.1, 0.25, 0.5), ("gaussian",), ("erdos_renyi",), 1000, 10),
    "sim2": StudySpec(
        "sim2", ("pc", "cpc"), 15, (15, 30, 50, 80), (1, 2, 3, 4, 5, 6),
        (0.01, 0.05, 0.1, 0.25, 0.5), ("exponential", "gaussian", "gumbel"),
        ("erdos_renyi", "hierarchical", "scale_free"), 1000, 1),
    "sim3": StudySpec(
        "sim3", ("fci", "cfci", "cfci_nonpag"), 18, (18, 24, 30), (2, 3, 4, 5, 6, 7),
        (0.05,), ("gaussian",), ("erdos_renyi",), 1000, 10,
        with_latents=True, latent_mode="anywhere"),
    "sim4": StudySpec(
        "sim4", ("fci", "cfci", "cfci_nonpag"), 15, (15, 20, 25), (3, 4, 5),
        (0.05,), ("gaussian",), ("erdos_renyi",), 1000, 5,
        cluster_method="cdag_first", with_latents=True, latent_mode="within_cluster"),
}

CSV_COLUMNS = ("study", "config_id", "seed", "algorithm", "n_nodes", "n_edges",
               "n_clusters", "alpha", "distribution", "graph_method",
               "adj_precision", "adj_recall", "adj_f1", "arrow_precision",
               "arrow_recall", "arrow_f1", "shd", "ci_total", "ci_unique",
               "runtime_ms")


@dataclass(frozen=True)
class ResultRow:
    study: str
    config_id: str
    seed: int
    algorithm: str
    n_nodes: int
    n_edges: int
    n_clusters: int
    alpha: float
    distribution: str
    graph_method: str
    adj_precision: float
    adj_recall: float
    adj_f1: float
    arrow_precision: float
    arrow_recall: float
    arrow_f1: float
    shd: int
    ci_total: int
    ci_unique: int
    runtime_ms: float
    adj_f1_halved: float = 0.0   # in-memory only: the printed-definition F1
    arrow_f1_halved: float = 0.0

    def csv_values(self) -> list[str]:
        out = []
        for col in CSV_COLUMNS:
            v = getattr(self, col)
            if isinstance(v, float):
                out.append(f"{v:.6f}")
            else:
                out.append(str(v))
        return out


@dataclass
class ExperimentReport:
    study: str
    seed: int
    scale: float
    rows: list[ResultRow]
    skipped: list[str] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for row in self.rows:
            w.writerow(row.csv_values())
        return buf.getvalue()

    def mean(self, algorithm: str, column: str,
             where: dict | None = None) -> float:
        vals = [getattr(r, column) for r in self.rows
                if r.algorithm == algorithm
                and all(getattr(r, k) == v for k, v in (where or {}).items())]
        if not vals:
            raise ValueError(f"no rows for {algorithm}/{column}")
        return sum(vals) / len(vals)


@dataclass(frozen=True)
class InstanceTask:
    study: str
    base_seed: int
    config_id: str
    cfg: GenConfig
    alpha: float
    algorithms: tuple[str, ...]
    with_latents: bool
    latent_mode: str
    conventional_f1: bool
    measure_runtime: bool
    row_seed: int


def _instance_tasks(spec: StudySpec, scale: float, seed: int,
                    conventional_f1: bool, measure_runtime: bool
                    ) -> tuple[list[InstanceTask], list[str]]:
    """Expand the full configuration grid; infeasible cells (for example an
    edge count beyond the simple-graph maximum) are reported, not raised."""
    reps = max(1, round(spec.reps * scale))
    tasks: list[InstanceTask] = []
    infeasible: list[str] = []
    study_idx = sorted(STUDIES).index(spec.name) if spec.name in STUDIES else 99
    for mi, method in enumerate(spec.graph_methods):
        for di, dist in enumerate(spec.distributions):
            for n_edges in spec.edge_counts:
                for rep in range(reps):
                    # the graph/data seed excludes cluster count and alpha so
                    # those cells share one underlying instance
                    entropy = (seed, study_idx, spec.n_nodes, n_edges, mi, di, rep)
                    for n_clusters in spec.cluster_counts:
                        for alpha in spec.alphas:
                            config_id = (f"e{n_edges}_c{n_clusters}_a{alpha}"
                                         f"_{dist}_{method}")
                            try:
                                cfg = GenConfig(
                                    n_nodes=spec.n_nodes, n_edges=n_edges,
                                    n_clusters=n_clusters, graph_method=method,
                                    cluster_method=spec.cluster_method,
                                    noise=dist, n_samples=spec.n_samples,
                                    weight_low=spec.weight_low,
                                    weight_high=spec.weight_high,
                                    seed=entropy)
                            except ValueError as exc:
                                infeasible.append(f"{config_id} rep{rep}: {exc}")
                                continue
                            row_seed = abs(hash(entropy)) % (2 ** 31)
                            tasks.append(InstanceTask(
                                spec.name, seed, config_id, cfg, alpha,
                                spec.algorithms, spec.with_latents,
                                spec.latent_mode, conventional_f1,
                                measure_runtime, row_seed))
    return tasks, infeasible


def _run_algorithm(name: str, truth: GroundTruth, alpha: float):
    tester = CountingCI(FisherZCI(truth.dataset, alpha))
    if name == "pc":
        return pc(tester, truth.dataset.labels), tester
    if name == "cpc":
        return cluster_pc(tester, truth.cluster_graph), tester
    if name == "fci":
        return fci(tester, truth.dataset.labels), tester
    if name == "cfci":
        return cluster_fci(tester, truth.cluster_graph, pag_mode=True), tester
    if name == "cfci_nonpag":
        return cluster_fci(tester, truth.cluster_graph, pag_mode=False), tester
    raise ValueError(f"unknown algorithm {name!r}")


def _run_instance(task: InstanceTask) -> list[ResultRow]:
    truth = gen_ground_truth(task.cfg, with_latents=task.with_latents,
                             latent_mode=task.latent_mode)
    refs: dict[str, MixedGraph] = {}
    rows = []
    for name in task.algorithms:
        family = "pc" if name in ("pc", "cpc") else "fci"
        if family not in refs:
            refs[family] = reference_graph(truth, family)
        ref = refs[family]
        t0 = time.perf_counter()
        out, tester = _run_algorithm(name, truth, task.alpha)
        elapsed_ms = (time.perf_counter() - t0) * 1000.0
        adj = confusion(out.graph, ref, "adjacency")
        arr = confusion(out.graph, ref, "arrow")
        ap, ar, af_h = precision_recall_f1(adj)
        bp, br, bf_h = precision_recall_f1(arr)
        af = 2 * af_h if task.conventional_f1 else af_h
        bf = 2 * bf_h if task.conventional_f1 else bf_h
        rows.append(ResultRow(
            task.study, task.config_id, task.row_seed, name,
            task.cfg.n_nodes, task.cfg.n_edges, task.cfg.n_clusters,
            task.alpha, task.cfg.noise, task.cfg.graph_method,
            ap, ar, af, bp, br, bf, shd(out.graph, ref),
            tester.stats.total_invocations, tester.stats.unique_queries,
            elapsed_ms if task.measure_runtime else 0.0,
            adj_f1_halved=af_h, arrow_f1_halved=bf_h))
    return rows


def run_study(study: str, scale: float = 1.0, seed: int = 0, jobs: int = 1,
              conventional_f1: bool = True, measure_runtime: bool = True,
              spec: StudySpec | None = None) -> ExperimentReport:
    """Iterate the study's configuration grid with replication counts scaled
    by `scale`; deterministic under (study, scale, seed) apart from the
    measured runtime column."""
    if spec is None:
        if study not in STUDIES:
            raise ValueError(f"unknown study {study!r}; pass spec= for custom runs")
        spec = STUDIES[study]
    if not 0.0 < scale <= 1.0:
        raise ValueError("scale must lie in (0, 1]")
    tasks, skipped = _instance_tasks(spec, scale, seed, conventional_f1,
                                     measure_runtime)
    rows: list[ResultRow] = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for task, result in zip(tasks, pool.map(_run_instance, tasks)):
                rows.extend(result)
    else:
        for task in tasks:
            try:
                rows.extend(_run_instance(task))
            except (GraphError, ValueError) as exc:
                skipped.append(f"{task.config_id}: {exc}")
    return ExperimentReport(spec.name, seed, scale, rows, skipped)


def summarize(report: ExperimentReport) -> list[dict]:
    """Per-algorithm means of every metric column (the table aggregation)."""
    algos = sorted({r.algorithm for r in report.rows})
    cols = ("adj_precision", "adj_recall", "adj_f1", "arrow_precision",
            "arrow_recall", "arrow_f1", "adj_f1_halved", "arrow_f1_halved",
            "shd", "ci_total", "ci_unique")
    out = []
    for algo in algos:
        entry = {"algorithm": algo}
        for col in cols:
            entry[col] = report.mean(algo, col)
        out.append(entry)
    return out
