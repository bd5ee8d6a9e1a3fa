import math

import numpy as np
import pytest

from clusterdisco.ci import (CiDecision, CountingCI, Dataset, FisherZCI,
                             OracleCI, counted)
from clusterdisco.graphs import ARROW, TAIL, MixedGraph, default_labels


def g_of(n, *edges):
    g = MixedGraph(default_labels(n))
    for a, b, ma, mb in edges:
        g.set_edge(a, b, ma, mb)
    return g


class TestOracle:
    def test_chain(self):
        o = OracleCI(g_of(3, (0, 1, TAIL, ARROW), (1, 2, TAIL, ARROW)))
        assert o.test(0, 2, {1}).independent
        assert o.test(0, 2, ()).independent is False

    def test_collider(self):
        o = OracleCI(g_of(3, (0, 1, TAIL, ARROW), (2, 1, TAIL, ARROW)))
        assert not o.test(0, 2, {1}).independent
        assert o.test(0, 2, ()).independent

    def test_mag_bidirected(self):
        o = OracleCI(g_of(2, (0, 1, ARROW, ARROW)))
        assert not o.test(0, 1, ()).independent

    def test_oracle_has_no_pvalue(self):
        dec = OracleCI(g_of(2, (0, 1, TAIL, ARROW))).test(0, 1, ())
        assert dec.p_value is None and dec.statistic is None

    def test_symmetry(self):
        rng = np.random.default_rng(30)
        from oracles import random_admg
        for _ in range(30):
            g = random_admg(6, 0.25, 0.15, rng)
            o = OracleCI(g)
            x, y = (int(v) for v in rng.choice(6, size=2, replace=False))
            s = frozenset(int(v) for v in rng.choice(6, size=2)) - {x, y}
            assert o.test(x, y, s).independent == o.test(y, x, s).independent


def _exact_corr_dataset(n=100, r=0.5):
    # x and e orthogonal with zero mean and equal norms, so corr(x, y) = r
    x = np.tile([1.0, 1.0, -1.0, -1.0], n // 4)
    e = np.tile([1.0, -1.0, 1.0, -1.0], n // 4)
    y = r * x + math.sqrt(1 - r * r) * e
    return Dataset(("A", "B"), np.column_stack([x, y]))


class TestFisherZ:
    def test_closed_form_statistic(self):
        # r = 0.5, n = 100, no conditioning: z = atanh(0.5) = 0.5493,
        # statistic = sqrt(97) * z = 5.410, far into the rejection region
        t = FisherZCI(_exact_corr_dataset(), alpha=0.05)
        dec = t.test(0, 1, ())
        assert dec.statistic == pytest.approx(5.410, abs=2e-3)
        assert dec.p_value < 1e-6
        assert not dec.independent

    def test_duplicated_column_degenerates_to_dependence(self):
        x = np.random.default_rng(0).standard_normal(50)
        t = FisherZCI(Dataset(("A", "B"), np.column_stack([x, x])), alpha=0.05)
        dec = t.test(0, 1, ())
        assert not dec.independent
        assert dec.p_value == 0.0

    def test_rejection_rate_near_alpha(self):
        rng = np.random.default_rng(31)
        rejections = 0
        trials = 400
        for _ in range(trials):
            data = Dataset(("A", "B"), rng.standard_normal((200, 2)))
            if not FisherZCI(data, alpha=0.05).test(0, 1, ()).independent:
                rejections += 1
        assert abs(rejections / trials - 0.05) < 0.03

    def test_query_validation(self):
        data = Dataset(tuple("ABCDEF"), np.random.default_rng(1).standard_normal((10, 6)))
        t = FisherZCI(data, alpha=0.05)
        with pytest.raises(ValueError):
            t.test(0, 1, {9})  # unknown index
        with pytest.raises(ValueError):
            t.test(0, 1, {2, 0})  # overlapping query

    def test_alpha_validated(self):
        data = Dataset(("A", "B"), np.zeros((8, 2)) + np.arange(8)[:, None])
        with pytest.raises(ValueError):
            FisherZCI(data, alpha=1.5)


class TestCounting:
    def test_repeated_queries(self):
        c = counted(OracleCI(g_of(2, (0, 1, TAIL, ARROW))))
        for _ in range(3):
            c.test(0, 1, ())
        assert c.stats.total_invocations == 3
        assert c.stats.unique_queries == 1

    def test_zero_queries(self):
        c = CountingCI(OracleCI(g_of(2, (0, 1, TAIL, ARROW))))
        assert c.stats.total_invocations == 0
        assert c.stats.unique_queries == 0

    def test_unordered_pair_key(self):
        c = counted(OracleCI(g_of(2, (0, 1, TAIL, ARROW))))
        c.test(0, 1, ())
        c.test(1, 0, ())
        assert c.stats.total_invocations == 2
        assert c.stats.unique_queries == 1

    def test_wrapper_is_transparent(self):
        inner = OracleCI(g_of(3, (0, 1, TAIL, ARROW), (1, 2, TAIL, ARROW)))
        c = counted(inner)
        assert c.test(0, 2, {1}) == inner.test(0, 2, {1})


def test_fisher_z_agrees_with_oracle_on_faithful_data():
    # linear-Gaussian SEM at n = 10000, alpha = 0.01: decisions match the
    # graph oracle on at least 95% of size-<=2 conditioning queries, pooled
    # over an ensemble large enough to damp the near-unfaithful weight draws
    from itertools import combinations
    from oracles import random_dag
    from clusterdisco.synthesis import GenConfig, sample_sem

    agree = total = 0
    for seed in range(40):
        g = random_dag(6, 0.35, np.random.default_rng(seed))
        cfg = GenConfig(n_nodes=6, n_edges=g.n_edges(), n_clusters=1,
                        n_samples=10000, seed=1000 + seed)
        data = sample_sem(g, cfg)
        fz = FisherZCI(data, alpha=0.01)
        oracle = OracleCI(g)
        for x, y in combinations(range(6), 2):
            rest = [v for v in range(6) if v not in (x, y)]
            for k in (0, 1, 2):
                for s in combinations(rest, k):
                    total += 1
                    if fz.test(x, y, s).independent == oracle.test(x, y, s).independent:
                        agree += 1
    assert agree / total >= 0.95


class TestDataset:
    def test_csv_round_trip(self):
        rng = np.random.default_rng(3)
        d = Dataset(("A", "B", "C"), rng.standard_normal((9, 3)))
        again = Dataset.from_csv(d.to_csv())
        assert again.labels == d.labels
        assert np.array_equal(again.samples, d.samples)

    def test_validation(self):
        with pytest.raises(ValueError):
            Dataset(("A", "A"), np.zeros((10, 2)))
        with pytest.raises(ValueError):
            Dataset(("A", "B"), np.zeros((4, 2)))  # too few samples
        bad = np.zeros((10, 2))
        bad[0, 0] = np.nan
        with pytest.raises(ValueError):
            Dataset(("A", "B"), bad)
