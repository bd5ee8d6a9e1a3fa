import numpy as np
import pytest

from clusterdisco.ci import Dataset
from clusterdisco.clusters import ClusterGraph, ClusterPartition
from clusterdisco.evaluation import (STUDIES, ConfusionCounts, StudySpec,
                                     _instance_tasks, confusion,
                                     precision_recall_f1, reference_graph,
                                     run_study, shd, summarize)
from clusterdisco.graphs import ARROW, CIRCLE, TAIL, GraphError, MixedGraph, default_labels
from clusterdisco.synthesis import GroundTruth


def g_of(n, *edges):
    g = MixedGraph(default_labels(n))
    for a, b, ma, mb in edges:
        g.set_edge(a, b, ma, mb)
    return g


def make_truth(dag=None, mag=None, n=3):
    labels = default_labels(n)
    base = dag if dag is not None else MixedGraph(labels)
    part = ClusterPartition.from_sets(labels, [set(range(n))])
    gc = ClusterGraph(part, (), ())
    data = Dataset(tuple(labels), np.random.default_rng(0).standard_normal((50, n)))
    return GroundTruth(base, frozenset(), tuple(range(n)), mag, gc, data)


class TestReferenceGraph:
    def test_collider_dag_identified(self):
        dag = g_of(3, (0, 1, TAIL, ARROW), (2, 1, TAIL, ARROW))
        assert reference_graph(make_truth(dag=dag), "pc") == dag

    def test_chain_reference_undirected(self):
        dag = g_of(3, (0, 1, TAIL, ARROW), (1, 2, TAIL, ARROW))
        ref = reference_graph(make_truth(dag=dag), "pc")
        assert ref == g_of(3, (0, 1, TAIL, TAIL), (1, 2, TAIL, TAIL))

    def test_lone_bidirected_mag_gives_circles(self):
        mag = g_of(3, (0, 1, ARROW, ARROW))
        ref = reference_graph(make_truth(mag=mag), "fci")
        assert ref == g_of(3, (0, 1, CIRCLE, CIRCLE))

    def test_fci_family_needs_mag(self):
        with pytest.raises(GraphError):
            reference_graph(make_truth(), "fci")


class TestConfusion:
    def test_exact_match_adjacency(self):
        g = g_of(2, (0, 1, TAIL, ARROW))
        c = confusion(g, g.copy(), "adjacency")
        assert (c.tp, c.fp, c.fn, c.tn) == (1, 0, 0, 0)

    def test_reversed_edge_arrow_mode(self):
        est = g_of(2, (0, 1, TAIL, ARROW))
        ref = g_of(2, (0, 1, ARROW, TAIL))
        c = confusion(est, ref, "arrow")
        assert (c.tp, c.fp, c.fn, c.tn) == (0, 1, 1, 0)

    def test_missing_edge_adjacency(self):
        c = confusion(MixedGraph(default_labels(2)),
                      g_of(2, (0, 1, TAIL, ARROW)), "adjacency")
        assert (c.tp, c.fp, c.fn, c.tn) == (0, 0, 1, 0)

    def test_pairs_absent_everywhere_excluded_in_arrow_mode(self):
        est = g_of(3, (0, 1, TAIL, ARROW))
        ref = g_of(3, (0, 1, TAIL, ARROW))
        c = confusion(est, ref, "arrow")
        assert c.tp + c.fp + c.fn + c.tn == 2

    def test_extra_edge_arrows_are_false_positives(self):
        est = g_of(2, (0, 1, ARROW, ARROW))
        ref = MixedGraph(default_labels(2))
        c = confusion(est, ref, "arrow")
        assert (c.tp, c.fp, c.fn, c.tn) == (0, 2, 0, 0)


class TestMetrics:
    def test_perfect_counts_give_half_f1(self):
        p, r, f1 = precision_recall_f1(ConfusionCounts(1, 0, 0, 0, "adjacency"))
        assert (p, r, f1) == (1.0, 1.0, 0.5)

    def test_zero_tp(self):
        assert precision_recall_f1(ConfusionCounts(0, 3, 2, 0, "adjacency")) == \
            (0.0, 0.0, 0.0)

    def test_balanced(self):
        p, r, f1 = precision_recall_f1(ConfusionCounts(2, 2, 2, 0, "adjacency"))
        assert (p, r, f1) == (0.5, 0.5, 0.25)

    def test_conventional_flag_doubles(self):
        _, _, f1 = precision_recall_f1(ConfusionCounts(1, 0, 0, 0, "adjacency"),
                                       conventional=True)
        assert f1 == 1.0


class TestShd:
    def test_flip_counts_one(self):
        assert shd(g_of(2, (0, 1, TAIL, ARROW)), g_of(2, (0, 1, ARROW, TAIL))) == 1

    def test_deletions(self):
        g = g_of(3, (0, 1, TAIL, ARROW), (1, 2, TAIL, ARROW))
        assert shd(g, MixedGraph(default_labels(3))) == 2

    def test_identical(self):
        g = g_of(3, (0, 1, TAIL, ARROW))
        assert shd(g, g.copy()) == 0

    def test_symmetric(self):
        a = g_of(3, (0, 1, TAIL, ARROW), (1, 2, CIRCLE, ARROW))
        b = g_of(3, (0, 2, ARROW, ARROW))
        assert shd(a, b) == shd(b, a)


class TestStudyGrids:
    def test_sim1_full_scale_instance_count(self):
        # the 150-edge cells exceed the 15-node simple-graph maximum and are
        # reported as infeasible, but the grid still totals 1750
        tasks, infeasible = _instance_tasks(STUDIES["sim1"], 1.0, 0, True, False)
        assert len(tasks) + len(infeasible) == 1750
        assert all("e150" in line for line in infeasible)

    def test_sim1_single_rep_count(self):
        tasks, infeasible = _instance_tasks(STUDIES["sim1"], 0.1, 0, True, False)
        assert len(tasks) + len(infeasible) == 175

    def test_sim2_full_scale_instance_count(self):
        tasks, infeasible = _instance_tasks(STUDIES["sim2"], 1.0, 0, True, False)
        assert len(tasks) + len(infeasible) == 1080

    def test_sim3_full_scale_instance_count(self):
        tasks, infeasible = _instance_tasks(STUDIES["sim3"], 1.0, 0, True, False)
        assert len(tasks) == 180 and not infeasible

    def test_graph_seed_shared_across_cluster_and_alpha_cells(self):
        tasks, _ = _instance_tasks(STUDIES["sim1"], 0.1, 7, True, False)
        seeds = {}
        for t in tasks:
            seeds.setdefault((t.cfg.n_edges,), set()).add(t.cfg.seed)
        for key, s in seeds.items():
            assert len(s) == 1


CUSTOM = StudySpec("custom", ("pc", "cpc"), 8, (8,), (1, 3), (0.05,),
                   ("gaussian",), ("erdos_renyi",), 400, 2)


class TestRunStudy:
    def test_custom_study_rows(self):
        report = run_study("custom", seed=5, spec=CUSTOM, measure_runtime=False)
        # 1 edge count x 2 cluster counts x 1 alpha x 2 reps x 2 algorithms
        assert len(report.rows) == 8
        assert not report.skipped
        for row in report.rows:
            assert 0.0 <= row.adj_precision <= 1.0
            assert row.ci_total >= row.ci_unique > 0
        csv_text = report.to_csv()
        assert csv_text.splitlines()[0].startswith("study,config_id,seed")

    def test_deterministic_output(self):
        r1 = run_study("custom", seed=5, spec=CUSTOM, measure_runtime=False)
        r2 = run_study("custom", seed=5, spec=CUSTOM, measure_runtime=False)
        assert r1.to_csv() == r2.to_csv()

    def test_fci_family_study(self):
        spec = StudySpec("custom", ("fci", "cfci", "cfci_nonpag"), 8, (10,),
                         (2,), (0.05,), ("gaussian",), ("erdos_renyi",), 400, 1,
                         with_latents=True, latent_mode="anywhere")
        report = run_study("custom", seed=3, spec=spec, measure_runtime=False)
        assert len(report.rows) == 3
        assert {r.algorithm for r in report.rows} == {"fci", "cfci", "cfci_nonpag"}

    def test_summarize_means(self):
        report = run_study("custom", seed=5, spec=CUSTOM, measure_runtime=False)
        summary = summarize(report)
        algos = [e["algorithm"] for e in summary]
        assert algos == ["cpc", "pc"]
        pc_rows = [r.shd for r in report.rows if r.algorithm == "pc"]
        assert summary[1]["shd"] == pytest.approx(sum(pc_rows) / len(pc_rows))

    def test_unknown_study(self):
        with pytest.raises(ValueError):
            run_study("sim9")
