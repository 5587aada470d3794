"""Causal discovery for chain-reaction systems from blocking interventions."""

from .graph import (
    AncestorMatrix,
    CausalTree,
    CycleError,
    Digraph,
    GraphMetrics,
    ancestors,
    break_cycles,
    compare_graphs,
    descendants,
    random_tree,
    transitive_reduction,
    true_ancestor_matrix,
)
from .scm import (
    CascadeModel,
    Episode,
    exact_pij,
    exact_qmin,
    sample_complexity_bound,
    sample_episode,
    sample_episode_with_noise,
)
from .events import EdgeMechanism, EventTrace, MechanizedModel, TraceDataset, simulate_trace, trace_to_episode
from .estimator import (
    InsufficientDataError,
    InterventionalDataset,
    PairStats,
    empirical_probs,
    estimate_ancestor_matrix,
    observational_evidence,
    reconstruct,
)
from .baselines import collision_as_influence, temporal_precedence
from .experiment import generate_dataset, recovery_stats, schedule_round_robin

__version__ = "0.1.0"
