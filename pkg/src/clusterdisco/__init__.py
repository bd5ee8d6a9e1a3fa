"""Causal structure discovery warm-started with cluster-level background
knowledge: Cluster-PC and Cluster-FCI with PC/FCI baselines, an exact
separation oracle, a Fisher-z CI test, ground-truth synthesis and an
evaluation harness."""

from .graphs import (ARROW, CIRCLE, TAIL, GraphError, GraphKindReport, Mark,
                     MixedGraph, classify, format_graph, parse_graph)
from .separation import (cluster_d_separated, d_separated, discriminating_path,
                         m_separated, mags_markov_equivalent, mns,
                         possible_d_sep, primitive_inducing_path)
from .clusters import (ClusterGraph, ClusterPartition, InadmissiblePartitionError,
                       PairwiseConstraintSet, TierList, build_cluster_graph,
                       cadmg_to_partial_mixed, cdag_to_mpdag, evaluate_constraints,
                       format_cluster_file, is_compatible_graph,
                       pairwise_constraints, parse_cluster_file,
                       satisfies_tiered_bk, tiers_from_cluster_graph)
from .ci import CiDecision, CiStats, CountingCI, Dataset, FisherZCI, OracleCI, counted
from .discovery import (DiscoveryOutput, cluster_fci, cluster_pc, cpdag_from_dag,
                        fci, impose_background, meek_closure, pc)
from .synthesis import (GenConfig, GroundTruth, gen_cdag_first, gen_dag,
                        gen_ground_truth, partition_dag_first, project_to_mag,
                        sample_sem)
from .evaluation import (ConfusionCounts, ExperimentReport, ResultRow, StudySpec,
                         confusion, precision_recall_f1, reference_graph,
                         run_study, shd, summarize)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
