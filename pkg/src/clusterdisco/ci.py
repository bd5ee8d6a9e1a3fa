"""Conditional-independence layer: an exact graph oracle, a Fisher-z test on
tabular data, and a counting wrapper that produces the CI-test metric.

Counters are never shared across discovery runs; each run owns its own
wrapper so the reported counts reflect that run alone.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Protocol

import numpy as np

from .graphs import GraphError, MixedGraph
from .separation import _as_set, _reachable, _validate_query


@dataclass(frozen=True)
class CiDecision:
    independent: bool
    p_value: float | None = None
    statistic: float | None = None


@dataclass
class CiStats:
    total_invocations: int = 0
    unique_queries: int = 0


class CiTester(Protocol):
    def test(self, x: int, y: int, s: Iterable[int]) -> CiDecision: ...


@dataclass(frozen=True)
class Dataset:
    """Column-labelled sample matrix, one column per variable."""

    labels: tuple[str, ...]
    samples: np.ndarray

    def __post_init__(self):
        if self.samples.ndim != 2 or self.samples.shape[1] != len(self.labels):
            raise ValueError("samples must be n_samples x n_vars")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("column labels must be unique")
        if np.isnan(self.samples).any():
            raise ValueError("missing values are not supported")
        if self.n_samples < self.n_vars + 4:
            raise ValueError("need n_samples >= n_vars + 4 for Fisher-z validity")

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def n_vars(self) -> int:
        return self.samples.shape[1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.labels)
        for row in self.samples:
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Dataset":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows:
            raise ValueError("empty CSV")
        labels = tuple(rows[0])
        data = np.array([[float(v) for v in row] for row in rows[1:]], dtype=float)
        return cls(labels, data)


class OracleCI:
    """Answers queries from separations in a ground-truth graph.

    d-separation when the truth is a DAG, m-separation for ADMGs and MAGs;
    both reduce to the same reachability check.  The optional cache is off by
    default so invocation counts reflect algorithmic behavior.
    """

    def __init__(self, truth: MixedGraph, cache: bool = False):
        if truth.has_circle_marks():
            raise GraphError("the oracle needs a circle-free truth graph")
        self.truth = truth
        self._cache: dict | None = {} if cache else None

    def test(self, x: int, y: int, s: Iterable[int]) -> CiDecision:
        ss = _as_set(s)
        key = (x, y, ss) if x < y else (y, x, ss)
        if self._cache is not None and key in self._cache:
            return self._cache[key]
        ls, rs = frozenset((x,)), frozenset((y,))
        _validate_query(self.truth, ls, rs, ss)
        dec = CiDecision(independent=not _reachable(self.truth, ls, rs, ss))
        if self._cache is not None:
            self._cache[key] = dec
        return dec


class FisherZCI:
    """Partial-correlation test via correlation-matrix inversion.

    r is the partial correlation of x, y given s, z = atanh(r), the statistic
    is sqrt(n - |s| - 3) * |z| and the decision compares the two-sided normal
    p-value with alpha.  Singular conditioning systems report dependence,
    which keeps the edge rather than wrongly deleting it.
    """

    def __init__(self, data: Dataset, alpha: float):
        if not 0.0 < alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")
        self.data = data
        self.alpha = alpha
        self._corr = np.corrcoef(data.samples, rowvar=False)
        if self._corr.ndim == 0:  # single column
            self._corr = self._corr.reshape(1, 1)

    def test(self, x: int, y: int, s: Iterable[int]) -> CiDecision:
        cond = sorted(_as_set(s))
        for v in (x, y, *cond):
            if not 0 <= v < self.data.n_vars:
                raise ValueError(f"unknown variable index {v}")
        if x == y or x in cond or y in cond:
            raise ValueError("query nodes must be distinct from the conditioning set")
        n = self.data.n_samples
        if len(cond) > n - 4:
            raise ValueError("insufficient samples for this conditioning set size")
        idx = [x, y] + cond
        sub = self._corr[np.ix_(idx, idx)]
        try:
            inv = np.linalg.inv(sub)
        except np.linalg.LinAlgError:
            return CiDecision(independent=False, p_value=0.0, statistic=math.inf)
        denom = inv[0, 0] * inv[1, 1]
        if denom <= 0.0:
            return CiDecision(independent=False, p_value=0.0, statistic=math.inf)
        r = -inv[0, 1] / math.sqrt(denom)
        if abs(r) >= 1.0:
            return CiDecision(independent=False, p_value=0.0, statistic=math.inf)
        z = math.atanh(r)
        stat = math.sqrt(n - len(cond) - 3) * abs(z)
        p = math.erfc(stat / math.sqrt(2.0))
        return CiDecision(independent=p > self.alpha, p_value=p, statistic=stat)


class CountingCI:
    """Wraps any tester, counting invocations and unique unordered queries.

    No memoization: repeated queries hit the inner tester again, so the total
    mirrors what the discovery algorithm actually asked.
    """

    def __init__(self, inner: CiTester):
        self.inner = inner
        self.stats = CiStats()
        self._seen: set[tuple[frozenset[int], frozenset[int]]] = set()

    def test(self, x: int, y: int, s: Iterable[int]) -> CiDecision:
        ss = _as_set(s)
        self.stats.total_invocations += 1
        key = (frozenset((x, y)), ss)
        if key not in self._seen:
            self._seen.add(key)
            self.stats.unique_queries += 1
        return self.inner.test(x, y, ss)


def counted(inner: CiTester) -> CountingCI:
    return CountingCI(inner)
