import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chain_discovery import catalog
from chain_discovery.estimator import (
    DatasetFormatError,
    InsufficientDataError,
    InsufficientDataWarning,
    InterventionalDataset,
    empirical_probs,
    estimate_ancestor_matrix,
    observational_evidence,
    reconstruct,
)
from chain_discovery.experiment import generate_dataset, recovery_stats, run_once
from chain_discovery.graph import random_tree, true_ancestor_matrix
from chain_discovery.scm import CascadeModel, Episode, exact_pij, exact_qmin

from conftest import zb

# the four-object example dataset, 1-based targets
EXAMPLE_34 = [(None, (1, 1, 1, 1)), (None, (0, 1, 0, 1)), (2, (0, 0, 0, 1)), (4, (0, 0, 0, 0))]


def example_34():
    return InterventionalDataset.from_episodes(
        4, [Episode(None if t is None else t - 1, x) for t, x in EXAMPLE_34]
    )


def test_counting():
    eps = [Episode(0, (0, 1, 0)), Episode(0, (0, 0, 0)), Episode(0, (0, 0, 1)), Episode(0, (0, 0, 1))]
    stats = empirical_probs(InterventionalDataset.from_episodes(3, eps))
    assert stats.n_i.tolist() == [4, 0, 0]
    assert stats.p_hat[0, 1] == 0.25
    assert stats.p_hat[0, 2] == 0.5
    assert np.isnan(stats.p_hat[1]).all()
    assert stats.undefined_rows == [1, 2]


def test_never_active_is_zero():
    eps = [Episode(1, (1, 0, 0))] * 3
    stats = empirical_probs(InterventionalDataset.from_episodes(3, eps))
    assert stats.p_hat[1, 2] == 0.0


def test_example_dataset_probs():
    stats = empirical_probs(example_34())
    i = 1  # object 2
    assert stats.p_hat[i, 0] == 0 and stats.p_hat[i, 2] == 0 and stats.p_hat[i, 3] == 1


def test_example_dataset_ancestors():
    with pytest.warns(InsufficientDataWarning):
        a = estimate_ancestor_matrix(empirical_probs(example_34()))
    assert set(np.flatnonzero(a.a[3])) == zb(1, 2, 3)
    assert not a.a[0].any()  # object 1 never blocked


def test_estimate_strict():
    with pytest.raises(InsufficientDataError):
        estimate_ancestor_matrix(empirical_probs(example_34()), strict=True)


def test_active_pair_never_ancestor():
    eps = [Episode(0, (0, 1)), Episode(1, (0, 0))]
    a = estimate_ancestor_matrix(empirical_probs(InterventionalDataset.from_episodes(2, eps)))
    assert not a.a[0, 1] and a.a[1, 0]


def test_inconsistent_lengths():
    with pytest.raises(DatasetFormatError):
        InterventionalDataset.from_episodes(3, [Episode(None, (1, 1))])


def test_observational_evidence_example():
    ev = observational_evidence(InterventionalDataset.from_episodes(4, [Episode(None, (0, 1, 0, 1))]))
    assert ev == {(0, 1), (2, 1), (0, 3), (2, 3)}


def test_observational_evidence_all_ones():
    assert observational_evidence(InterventionalDataset.from_episodes(3, [Episode(None, (1, 1, 1))])) == set()


def test_observational_evidence_excludes_target():
    ev = observational_evidence(InterventionalDataset.from_episodes(3, [Episode(0, (0, 1, 0))]))
    assert all(i != 0 and j != 0 for i, j in ev)
    assert ev == {(2, 1)}


def test_reconstruct_noiseless_minimal_chain():
    m = catalog.model("minimal_chain", 0.0)
    est = reconstruct(generate_dataset(m, 1, 0, 3))
    assert est.edges == {(k - 1, l - 1) for k, l in [(3, 4), (4, 1), (1, 2)]}


def test_reconstruct_empty():
    with pytest.warns(InsufficientDataWarning):
        est = reconstruct(InterventionalDataset(5, [], np.zeros((0, 5))))
    assert est.edges == frozenset()


def test_reconstruct_deterministic():
    data = generate_dataset(catalog.model("synthetic_parallel_triggers_0.1"), 2, 5, 11)
    assert reconstruct(data) == reconstruct(InterventionalDataset(data.n, data.targets.copy(), data.x.copy()))


@settings(max_examples=100)
@given(st.integers(2, 10), st.integers(0, 2**63), st.integers(1, 3), st.sampled_from([0.1, 0.3, 0.6]), st.integers(0, 2**32))
def test_one_sided_errors(n, tseed, rounds, p, seed):
    m = CascadeModel.uniform(random_tree(n, tseed), p)
    data = generate_dataset(m, rounds, 0, seed)
    a_hat = estimate_ancestor_matrix(empirical_probs(data)).a
    a = true_ancestor_matrix(m.tree).a
    assert not (a & ~a_hat).any()


@settings(max_examples=50)
@given(st.integers(2, 10), st.integers(0, 2**63), st.integers(0, 2**32))
def test_evidence_never_contradicts_truth(n, tseed, seed):
    m = CascadeModel.uniform(random_tree(n, tseed), 0.3)
    data = generate_dataset(m, 2, 20, seed)
    a = true_ancestor_matrix(m.tree).a
    assert all(not a[i, j] for i, j in observational_evidence(data))


def test_reconstruct_parallel_triggers_at_bound():
    m = catalog.model("synthetic_parallel_triggers_0.1")
    hits = sum(reconstruct(generate_dataset(m, 17, 0, s)).edges == m.tree.edges for s in range(100))
    assert hits >= 95


def test_false_positive_rate_matches_binomial():
    m = catalog.model("synthetic_parallel_triggers_0.1")
    n_i = 2
    q = exact_qmin(m)
    # one pair, 2000 replicates; every pair is covered in test_acceptance
    i, j = 10, 11
    p = exact_pij(m, i, j)
    zeros = 0
    for r in range(2000):
        data = generate_dataset(m, n_i, 0, r)
        zeros += estimate_ancestor_matrix(empirical_probs(data)).a[i, j]
    expected = (1 - p) ** n_i
    sigma = math.sqrt(expected * (1 - expected) / 2000)
    assert abs(zeros / 2000 - expected) <= 4 * sigma
    assert zeros / 2000 <= math.exp(-q * n_i) + 4 * sigma


def test_recovery_stats_noiseless():
    s = recovery_stats(catalog.model("sequential_chain", 0.0), 1, range(10))
    assert s.exact_fraction == 1.0 and s.mean_skeleton_shd == 0.0


@pytest.mark.slow
def test_recovery_monotone_in_budget():
    m = catalog.model("synthetic_parallel_triggers_0.1")
    fr = [recovery_stats(m, k, range(100)).exact_fraction for k in (1, 2, 4, 8, 17)]
    assert fr == sorted(fr)
    worst1 = max(run_once("pt", m, 0.1, 1, s, timing=False).skeleton_shd for s in range(100))
    assert recovery_stats(m, 17, range(100)).mean_skeleton_shd <= 0.05 * worst1
