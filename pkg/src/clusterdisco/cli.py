"""Command-line entry point.

Subcommands: `discover` runs an algorithm on a dataset CSV (with a cluster
file for the cluster variants), `simulate` runs a simulation study to a
results CSV, `check` validates a graph against cluster knowledge.

Exit codes: 0 success, 1 input/usage errors, 2 background-knowledge warnings
during discovery, 3 incompatible graph from `check`.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .ci import CountingCI, Dataset, FisherZCI
from .clusters import (ClusterGraph, GraphError, evaluate_constraints,
                       explain_incompatibility, format_cluster_file,
                       is_compatible_graph, pairwise_constraints,
                       parse_cluster_file, satisfies_tiered_bk,
                       tiers_from_cluster_graph)
from .discovery import cluster_fci, cluster_pc, fci, pc
from .evaluation import STUDIES, StudySpec, run_study, summarize
from .graphs import ARROW, TAIL, classify, format_graph, parse_graph


def _out_path(raw: str) -> Path:
    base = os.environ.get("CLUSTERDISCO_OUT", "")
    p = Path(raw)
    if base and not p.is_absolute():
        return Path(base) / p
    return p


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise SystemExit(f"error: cannot read {path}: {exc}") from None


def _load_cluster_graph_for(labels: tuple[str, ...], path: str) -> ClusterGraph:
    gc = parse_cluster_file(_read_text(path))
    if set(gc.labels) != set(labels):
        raise GraphError(
            "cluster file nodes do not match the dataset columns: "
            f"{sorted(set(gc.labels) ^ set(labels))}")
    if gc.labels != tuple(labels):
        # reindex the partition onto the dataset's column order
        order = {lab: i for i, lab in enumerate(labels)}
        remapped = [frozenset(order[gc.labels[v]] for v in cluster)
                    for cluster in gc.partition.clusters]
        from .clusters import ClusterPartition
        part = ClusterPartition(tuple(labels), tuple(remapped), gc.partition.names)
        gc = ClusterGraph(part, gc.directed, gc.bidirected)
    return gc


def cmd_discover(args: argparse.Namespace) -> int:
    try:
        data = Dataset.from_csv(_read_text(args.data))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    needs_clusters = args.algo in ("cpc", "cfci")
    if needs_clusters and not args.clusters:
        print("error: --clusters is required for cluster algorithms", file=sys.stderr)
        return 1
    tester = CountingCI(FisherZCI(data, args.alpha))
    try:
        if args.algo == "pc":
            out = pc(tester, data.labels)
        elif args.algo == "fci":
            out = fci(tester, data.labels)
        else:
            gc = _load_cluster_graph_for(data.labels, args.clusters)
            if args.algo == "cpc":
                out = cluster_pc(tester, gc)
            else:
                out = cluster_fci(tester, gc, pag_mode=not args.no_pag)
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    meta = [
        f"# algorithm: {out.algorithm}",
        f"# alpha: {args.alpha}",
        f"# ci_total: {tester.stats.total_invocations}",
        f"# ci_unique: {tester.stats.unique_queries}",
    ]
    if out.pag_mode is not None:
        meta.append(f"# pag_mode: {out.pag_mode}")
    text = "\n".join(meta) + "\n" + format_graph(out.graph)
    path = _out_path(args.output)
    path.write_text(text)
    bk_warnings = [w for w in out.warnings if "background-knowledge violation" in w]
    for w in out.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"wrote {path}")
    return 2 if bk_warnings else 0


def _parse_config_file(path: str) -> dict:
    """Key-value overrides, one `key = value` (or `key: value`) per line."""
    out = {}
    for raw in _read_text(path).splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, _, val = line.partition("=")
        elif ":" in line:
            key, _, val = line.partition(":")
        else:
            raise SystemExit(f"error: bad config line {raw!r}")
        out[key.strip().lower().replace(" ", "_")] = val.strip()
    return out


def _custom_spec(cfg: dict) -> StudySpec:
    def ints(key, default):
        if key not in cfg:
            return default
        return tuple(int(v) for v in cfg[key].replace(",", " ").split())

    def floats(key, default):
        if key not in cfg:
            return default
        return tuple(float(v) for v in cfg[key].replace(",", " ").split())

    def words(key, default):
        if key not in cfg:
            return default
        return tuple(cfg[key].replace(",", " ").split())

    weights = cfg.get("weight_range", "(-1, 2)")
    lo, hi = (float(v) for v in
              weights.replace("(", " ").replace(")", " ").replace(",", " ").split())
    return StudySpec(
        name="custom",
        algorithms=words("algorithms", ("pc", "cpc")),
        n_nodes=int(cfg.get("number_of_nodes", cfg.get("n_nodes", 15))),
        edge_counts=ints("number_of_edges", ints("n_edges", (30,))),
        cluster_counts=ints("number_of_clusters", ints("n_clusters", (3,))),
        alphas=floats("alpha_for_ci_test", floats("alpha", (0.05,))),
        distributions=words("distribution", ("gaussian",)),
        graph_methods=words("dag_generation_method", words("graph_method", ("erdos_renyi",))),
        n_samples=int(cfg.get("sample_size", cfg.get("n_samples", 1000))),
        reps=int(cfg.get("runs_per_configuration", cfg.get("reps", 1))),
        cluster_method=cfg.get("cluster_method", "dag_first"),
        with_latents=cfg.get("with_latents", "false").lower() in ("true", "1", "yes"),
        latent_mode=cfg.get("latent_mode", "anywhere"),
        weight_low=lo,
        weight_high=hi,
    )


def cmd_simulate(args: argparse.Namespace) -> int:
    if args.study == "custom":
        spec = _custom_spec(_parse_config_file(args.config) if args.config else {})
    elif args.study in STUDIES:
        spec = None
    else:
        print(f"error: unknown study {args.study!r}", file=sys.stderr)
        return 1
    report = run_study(args.study, scale=args.scale, seed=args.seed,
                       jobs=args.jobs, measure_runtime=not args.no_runtime,
                       spec=spec)
    path = _out_path(args.output)
    path.write_text(report.to_csv())
    for line in report.skipped:
        print(f"warning: skipped {line}", file=sys.stderr)
    print(f"study {report.study}: {len(report.rows)} rows -> {path}")
    for entry in summarize(report):
        print(f"  {entry['algorithm']:>12}: "
              f"adjP={entry['adj_precision']:.3f} adjR={entry['adj_recall']:.3f} "
              f"adjF1={entry['adj_f1']:.3f} (printed-def {entry['adj_f1_halved']:.3f}) "
              f"arrP={entry['arrow_precision']:.3f} arrR={entry['arrow_recall']:.3f} "
              f"arrF1={entry['arrow_f1']:.3f} (printed-def {entry['arrow_f1_halved']:.3f}) "
              f"shd={entry['shd']:.2f} ci={entry['ci_total']:.1f}")
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    try:
        g = parse_graph(_read_text(args.graph))
        gc = parse_cluster_file(_read_text(args.clusters))
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if set(g.labels) != set(gc.labels):
        print("error: graph and cluster file node sets differ", file=sys.stderr)
        return 1
    if tuple(g.labels) != gc.labels:
        from .clusters import ClusterPartition
        order = {lab: i for i, lab in enumerate(g.labels)}
        remapped = [frozenset(order[gc.labels[v]] for v in cluster)
                    for cluster in gc.partition.clusters]
        part = ClusterPartition(tuple(g.labels), tuple(remapped), gc.partition.names)
        gc = ClusterGraph(part, gc.directed, gc.bidirected)

    compatible = is_compatible_graph(g, gc)
    bk = pairwise_constraints(gc)
    if args.emit_bk:
        print("bk clauses:")
        for line in bk.describe():
            print(f"  {line}")
    plain_mixed = not g.has_circle_marks() and not any(
        (ma, mb) == (TAIL, TAIL) for _, _, ma, mb in g.edges())
    if plain_mixed:
        print(f"pairwise constraints satisfied: {evaluate_constraints(bk, g)}")
        tiers = tiers_from_cluster_graph(gc)
        names = [" ".join(sorted(g.labels[v] for v in t)) for t in tiers.tiers]
        print("tiers:", " | ".join(names))
        try:
            print(f"tiered background knowledge satisfied: "
                  f"{satisfies_tiered_bk(g, tiers)}")
        except GraphError:
            pass
        rep = classify(g, check_maximality=g.n <= 12)
        print(f"graph kind: dag={rep.is_dag} admg={rep.is_admg} "
              f"ancestral={rep.is_ancestral} maximal={rep.is_maximal} "
              f"almost_directed_cycle={rep.has_almost_directed_cycle}")
    if compatible:
        print("COMPATIBLE")
        return 0
    print(f"INCOMPATIBLE: {explain_incompatibility(g, gc)}")
    return 3


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="clusterdisco",
                                 description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("discover", help="run discovery on a dataset CSV")
    d.add_argument("--algo", choices=("pc", "cpc", "fci", "cfci"), required=True)
    d.add_argument("--data", required=True, help="headered CSV of samples")
    d.add_argument("--clusters", help="cluster file (required for cpc/cfci)")
    d.add_argument("--alpha", type=float, default=0.05)
    d.add_argument("--no-pag", action="store_true",
                   help="cfci only: keep almost directed cycles (non-PAG variant)")
    d.add_argument("-o", "--output", default="out.graph")
    d.set_defaults(func=cmd_discover)

    s = sub.add_parser("simulate", help="run a simulation study")
    s.add_argument("--study", required=True,
                   help="sim1|sim2|sim3|sim4|custom")
    s.add_argument("--scale", type=float, default=1.0,
                   help="replication multiplier in (0,1]")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--config", help="key-value config file for --study custom")
    s.add_argument("--no-runtime", action="store_true",
                   help="write runtime_ms as 0 for byte-reproducible output")
    s.add_argument("-o", "--output", default="results.csv")
    s.set_defaults(func=cmd_simulate)

    c = sub.add_parser("check", help="validate a graph against cluster knowledge")
    c.add_argument("--graph", required=True)
    c.add_argument("--clusters", required=True)
    c.add_argument("--emit-bk", action="store_true",
                   help="print the compiled pairwise clauses")
    c.set_defaults(func=cmd_check)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 1
        raise


if __name__ == "__main__":
    sys.exit(main())
