"""Monotone cascade SCM: sampling under blocking interventions and exact quantities.

Every episode is driven by one 64-bit seed. The exogenous draw for node ``j``
is a splitmix64 hash of ``(seed, j)`` so a batch of episodes can be generated
in one vectorised pass and still match episode-at-a-time sampling exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graph import CausalTree, ancestors, descendants

MASK64 = (1 << 64) - 1
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_NODE_SALT = np.uint64(0xD1B54A32D192ED03)

# None means an observational run.
Intervention = Optional[int]


def _mix64(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.uint64)
    with np.errstate(over="ignore"):
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return x ^ (x >> np.uint64(31))


def derive_seeds(seed: int, indices) -> np.ndarray:
    """Child seeds for ``(seed, index)`` pairs; stable across serial/parallel use."""
    idx = np.asarray(indices, dtype=np.uint64)
    base = _mix64(np.array([seed & MASK64], dtype=np.uint64))
    with np.errstate(over="ignore"):
        return _mix64(base + (idx + np.uint64(1)) * _GOLDEN)


def derive_seed(seed: int, index: int) -> int:
    return int(derive_seeds(seed, [index])[0])


def uniforms(seeds, n: int) -> np.ndarray:
    """``(len(seeds), n)`` array of U[0, 1) draws, one per (episode seed, node)."""
    s = np.asarray(seeds, dtype=np.uint64).reshape(-1, 1)
    j = np.arange(1, n + 1, dtype=np.uint64).reshape(1, -1)
    with np.errstate(over="ignore"):
        bits = _mix64(s ^ _mix64(j * _NODE_SALT))
    return (bits >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


@dataclass(frozen=True)
class CascadeModel:
    """A causal tree plus the success probability of each node's noise ``Z_j``."""

    tree: CausalTree
    success: tuple[float, ...]

    def __post_init__(self) -> None:
        success = tuple(float(s) for s in self.success)
        if len(success) != self.tree.n:
            raise ValueError(f"need {self.tree.n} success probabilities, got {len(success)}")
        for j, s in enumerate(success):
            if not 0.0 < s <= 1.0:
                raise ValueError(f"success probability of node {j} must be in (0, 1], got {s}")
        object.__setattr__(self, "success", success)

    @classmethod
    def uniform(cls, tree: CausalTree, failure_prob: float) -> "CascadeModel":
        return cls(tree, (1.0 - failure_prob,) * tree.n)

    @property
    def n(self) -> int:
        return self.tree.n

    @property
    def failure(self) -> tuple[float, ...]:
        return tuple(1.0 - s for s in self.success)


@dataclass(frozen=True)
class Episode:
    target: Intervention
    x: tuple[int, ...]


def _check_target(n: int, target: Intervention) -> None:
    if target is not None and not 0 <= target < n:
        raise IndexError(f"intervention target {target} out of range for n={n}")


def propagate(tree: CausalTree, z: np.ndarray, targets) -> np.ndarray:
    """Evaluate the cascade equations for a batch of noise rows.

    ``z`` is ``(M, N)`` binary, ``targets`` has length ``M`` with ``-1`` for
    observational rows. Returns ``(M, N)`` uint8 activations.
    """
    z = np.asarray(z, dtype=bool)
    targets = np.asarray(targets, dtype=np.int64)
    m, n = z.shape
    x = np.zeros((m, n), dtype=bool)
    blocked = np.zeros((m, n), dtype=bool)
    valid = targets >= 0
    blocked[np.flatnonzero(valid), targets[valid]] = True
    for j in tree.order:
        p = tree.parent[j]
        col = z[:, j] & ~blocked[:, j]
        if p is not None:
            col &= x[:, p]
        x[:, j] = col
    return x.astype(np.uint8)


def sample_batch(model: CascadeModel, targets, seeds) -> np.ndarray:
    """Activation matrix for episodes with the given targets (-1 = none) and seeds."""
    targets = np.asarray(targets, dtype=np.int64)
    if targets.size and (targets.max() >= model.n or targets.min() < -1):
        raise IndexError("intervention target out of range")
    z = uniforms(seeds, model.n) < np.asarray(model.success)
    return propagate(model.tree, z, targets)


def sample_episode(model: CascadeModel, iv: Intervention, rng_seed: int) -> Episode:
    _check_target(model.n, iv)
    x = sample_batch(model, [-1 if iv is None else iv], [rng_seed & MASK64])[0]
    return Episode(iv, tuple(int(v) for v in x))


def sample_episode_with_noise(model: CascadeModel, iv: Intervention, z: Sequence[int]) -> Episode:
    _check_target(model.n, iv)
    z = np.asarray(z, dtype=bool).reshape(1, -1)
    if z.shape[1] != model.n:
        raise ValueError(f"noise vector has length {z.shape[1]}, expected {model.n}")
    x = propagate(model.tree, z, [-1 if iv is None else iv])[0]
    return Episode(iv, tuple(int(v) for v in x))


def exact_pij(model: CascadeModel, i: int, j: int) -> float:
    """Pr(X_j = 1 | do(X_i = 0))."""
    if i == j:
        raise ValueError("exact_pij needs i != j")
    if j in descendants(model.tree, i):
        return 0.0
    return math.prod(model.success[k] for k in ancestors(model.tree, j) | {j})


def exact_qmin(model: CascadeModel) -> float:
    if model.n < 2:
        raise ValueError("q_min is undefined for fewer than two nodes")
    # p_ij does not depend on i once j is outside Desc(i); a node only counts
    # if some i other than its own ancestors exists.
    best = 1.0
    for j in range(model.n):
        others = [i for i in range(model.n) if i != j and j not in descendants(model.tree, i)]
        if others:
            best = min(best, exact_pij(model, others[0], j))
    return best


def sample_complexity_bound(qmin: float, n: int, delta: float) -> int:
    """Interventions per object that give exact ancestor recovery w.p. >= 1 - delta."""
    if not 0.0 < qmin <= 1.0:
        raise ValueError(f"qmin must be in (0, 1], got {qmin}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return math.ceil((math.log(n * (n - 1)) + math.log(1.0 / delta)) / qmin)
