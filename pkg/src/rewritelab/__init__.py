"""Genomes as multivalued string-rewriting programs: reduction graphs,
Gibbs sums over reduction walks, evolution of genomes, and alignment."""

from .core import (
    Genome,
    InvalidSiteError,
    Kind,
    MultiSetObject,
    Rule,
    RuleError,
    Site,
    apply_at,
    canonicalize,
    enumerate_applications,
)
from .graph import ExplorationBounds, ReductionGraph, build_graph, export_dot
from .statmech import (
    Const,
    Converge,
    Count,
    Dist,
    PartitionResult,
    Truncated,
    beta_sweep,
    min_total_cost,
    partition_function,
    path_action,
    walk_sums,
)

__version__ = "0.1.0"
