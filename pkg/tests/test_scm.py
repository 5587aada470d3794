import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chain_discovery import catalog
from chain_discovery.graph import ancestors, descendants, random_tree
from chain_discovery.scm import (
    CascadeModel,
    derive_seeds,
    exact_pij,
    exact_qmin,
    sample_batch,
    sample_complexity_bound,
    sample_episode,
    sample_episode_with_noise,
    uniforms,
)


def bound_oracle(qmin, n, delta):
    mpmath.mp.dps = 50
    return int(mpmath.ceil((mpmath.log(n * (n - 1)) + mpmath.log(1 / mpmath.mpf(delta))) / mpmath.mpf(qmin)))


def test_noiseless_observational_all_ones(pt_example):
    m = CascadeModel.uniform(pt_example, 0.0)
    assert sample_episode(m, None, 7).x == (1,) * 12


def test_block_root_parallel_triggers(pt_example):
    m = CascadeModel.uniform(pt_example, 0.1)
    for seed in range(20):
        assert sample_episode(m, 9, seed).x == (0,) * 12


def test_block_button_11(pt_example):
    m = CascadeModel.uniform(pt_example, 0.0)
    assert sample_episode(m, 10, 0).x == (1, 0, 1, 1, 1, 1, 0, 1, 1, 1, 0, 0)


def test_invalid_target(minimal_chain):
    m = CascadeModel.uniform(minimal_chain, 0.1)
    with pytest.raises(IndexError):
        sample_episode(m, 4, 0)


def test_determinism(pt_example):
    m = CascadeModel.uniform(pt_example, 0.3)
    assert sample_episode(m, 3, 99) == sample_episode(m, 3, 99)
    assert any(sample_episode(m, None, s) != sample_episode(m, None, 0) for s in range(1, 10))


def test_batch_matches_single(pt_example):
    m = CascadeModel.uniform(pt_example, 0.3)
    seeds = derive_seeds(5, np.arange(50))
    targets = np.arange(50) % 13 - 1
    batch = sample_batch(m, targets, seeds)
    for t, s, row in zip(targets, seeds, batch):
        ep = sample_episode(m, None if t < 0 else int(t), int(s))
        assert ep.x == tuple(row)


def test_uniforms_in_range():
    u = uniforms(derive_seeds(1, np.arange(10000)), 5)
    assert u.min() >= 0.0 and u.max() < 1.0
    assert abs(u.mean() - 0.5) < 0.01


def test_with_noise_examples(minimal_chain):
    m = CascadeModel.uniform(minimal_chain, 0.2)
    assert sample_episode_with_noise(m, None, [1, 1, 1, 1]).x == (1, 1, 1, 1)
    z = [1, 1, 1, 1]
    z[minimal_chain.root] = 0
    assert sample_episode_with_noise(m, None, z).x == (0, 0, 0, 0)
    with pytest.raises(ValueError):
        sample_episode_with_noise(m, None, [1, 1])


@settings(max_examples=200)
@given(st.integers(1, 10), st.integers(0, 2**63), st.data())
def test_monotone_coupling(n, seed, data):
    t = random_tree(n, seed)
    m = CascadeModel.uniform(t, 0.2)
    z = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    obs = sample_episode_with_noise(m, None, z).x
    for i in range(n):
        blocked = sample_episode_with_noise(m, i, z).x
        assert all(b <= o for b, o in zip(blocked, obs))
        assert blocked[i] == 0
        assert all(blocked[j] == 0 for j in descendants(t, i))


@settings(max_examples=100)
@given(st.integers(1, 10), st.integers(0, 2**63), st.integers(0, 2**63))
def test_cascade_suppression(n, tseed, eseed):
    t = random_tree(n, tseed)
    m = CascadeModel.uniform(t, 0.3)
    for i in range(n):
        x = sample_episode(m, i, eseed).x
        assert x[i] == 0 and all(x[j] == 0 for j in descendants(t, i))


def test_pij_descendant_is_zero(minimal_chain):
    m = CascadeModel.uniform(minimal_chain, 0.1)
    assert exact_pij(m, 2, 1) == 0.0  # 3 blocks 2


def test_pij_deepest_leaf():
    m = catalog.model("synthetic_parallel_triggers_0.1")
    j = 11  # object 12 sits 7 nodes deep
    assert len(ancestors(m.tree, j)) + 1 == 7
    i = 10  # object 11, on the other branch
    assert exact_pij(m, i, j) == pytest.approx(0.9**7)
    assert round(exact_pij(m, i, j), 3) == 0.478


def test_pij_noiseless(minimal_chain):
    m = CascadeModel.uniform(minimal_chain, 0.0)
    assert exact_pij(m, 1, 0) == 1.0
    with pytest.raises(ValueError):
        exact_pij(m, 1, 1)


def test_qmin_catalog():
    pt = exact_qmin(catalog.model("synthetic_parallel_triggers_0.1"))
    ls = exact_qmin(catalog.model("synthetic_large_slot_machine_0.1"))
    assert pt == pytest.approx(0.9**7) and round(pt, 3) == 0.478
    assert ls == pytest.approx(0.9**16) and round(ls, 3) == 0.185
    assert exact_qmin(catalog.model("large_slot_machine")) == 1.0
    with pytest.raises(ValueError):
        exact_qmin(CascadeModel.uniform(random_tree(1, 0), 0.1))


@settings(max_examples=100)
@given(st.integers(2, 9), st.integers(0, 2**63), st.lists(st.floats(0.01, 1.0), min_size=9, max_size=9))
def test_qmin_brute_force(n, seed, succ):
    m = CascadeModel(random_tree(n, seed), tuple(succ[:n]))
    vals = [exact_pij(m, i, j) for i in range(n) for j in range(n) if i != j and j not in descendants(m.tree, i)]
    assert exact_qmin(m) == pytest.approx(min(vals) if vals else 1.0)


def test_pij_monte_carlo():
    """Empirical Pr(X_j=1 | do(i)) over 1e5 episodes is within 4 sigma of exact."""
    reps = 100_000
    for name in ("minimal_chain", "synthetic_parallel_triggers_0.1"):
        m = catalog.model(name, 0.1)
        for i in range(m.n):
            seeds = derive_seeds(1000 + i, np.arange(reps))
            x = sample_batch(m, np.full(reps, i), seeds)
            freq = x.mean(axis=0)
            for j in range(m.n):
                if j == i:
                    continue
                p = exact_pij(m, i, j)
                sigma = math.sqrt(p * (1 - p) / reps)
                assert abs(freq[j] - p) <= 4 * sigma + 1e-12, (name, i, j, freq[j], p)


@pytest.mark.parametrize(
    "qmin,n,delta,expected",
    [(1.0, 2, 0.999, 1), (0.478, 12, 0.05, 17), (0.185, 24, 0.05, 51)],
)
def test_sample_complexity_bound(qmin, n, delta, expected):
    assert bound_oracle(qmin, n, delta) == expected
    assert sample_complexity_bound(qmin, n, delta) == expected


def test_sample_complexity_bound_exact_qmin():
    assert sample_complexity_bound(0.9**7, 12, 0.05) == 17
    assert sample_complexity_bound(0.9**16, 24, 0.05) == 51


@pytest.mark.parametrize("args", [(0.0, 12, 0.05), (1.2, 12, 0.05), (0.5, 1, 0.05), (0.5, 12, 0.0), (0.5, 12, 1.0)])
def test_sample_complexity_bound_errors(args):
    with pytest.raises(ValueError):
        sample_complexity_bound(*args)


def test_model_validation(minimal_chain):
    with pytest.raises(ValueError):
        CascadeModel(minimal_chain, (1.0, 1.0))
    with pytest.raises(ValueError):
        CascadeModel(minimal_chain, (1.0, 0.0, 1.0, 1.0))
