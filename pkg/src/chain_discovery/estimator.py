"""Ancestor-matrix estimation from blocking interventions and tree reconstruction."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .graph import AncestorMatrix, Digraph, break_cycles, transitive_reduction
from .scm import Episode


class InsufficientDataError(ValueError):
    """Strict mode: some object was never blocked."""


class InsufficientDataWarning(UserWarning):
    pass


class DatasetFormatError(ValueError):
    pass


class InterventionalDataset:
    """Episodes stored column-wise: ``targets`` (-1 = observational) and ``x``."""

    def __init__(self, n: int, targets, x):
        targets = np.asarray(targets, dtype=np.int64).reshape(-1)
        x = np.asarray(x, dtype=np.uint8)
        if x.size == 0:
            x = x.reshape(len(targets), n)
        if x.ndim != 2 or x.shape != (len(targets), n):
            raise DatasetFormatError(f"activation matrix shape {x.shape} does not match ({len(targets)}, {n})")
        if targets.size and (targets.min() < -1 or targets.max() >= n):
            raise DatasetFormatError("intervention target out of range")
        if np.any(x > 1):
            raise DatasetFormatError("activations must be binary")
        self.n = n
        self.targets = targets
        self.x = x

    @classmethod
    def from_episodes(cls, n: int, episodes: Iterable[Episode]) -> "InterventionalDataset":
        episodes = list(episodes)
        for e in episodes:
            if len(e.x) != n:
                raise DatasetFormatError(f"episode vector of length {len(e.x)}, expected {n}")
        targets = [-1 if e.target is None else e.target for e in episodes]
        x = np.array([e.x for e in episodes], dtype=np.uint8).reshape(len(episodes), n)
        return cls(n, targets, x)

    @property
    def episodes(self) -> Iterator[Episode]:
        for t, row in zip(self.targets, self.x):
            yield Episode(None if t < 0 else int(t), tuple(int(v) for v in row))

    def __len__(self) -> int:
        return len(self.targets)

    def __add__(self, other: "InterventionalDataset") -> "InterventionalDataset":
        if other.n != self.n:
            raise DatasetFormatError("cannot concatenate datasets of different size")
        return InterventionalDataset(
            self.n, np.concatenate([self.targets, other.targets]), np.vstack([self.x, other.x])
        )


@dataclass(frozen=True, eq=False)
class PairStats:
    n_i: np.ndarray
    active_counts: np.ndarray
    p_hat: np.ndarray  # NaN rows where n_i == 0

    @property
    def undefined_rows(self) -> list[int]:
        return np.flatnonzero(self.n_i == 0).tolist()


def empirical_probs(data: InterventionalDataset) -> PairStats:
    n = data.n
    mask = data.targets >= 0
    targets = data.targets[mask]
    n_i = np.bincount(targets, minlength=n)
    onehot = np.zeros((len(targets), n), dtype=np.int64)
    onehot[np.arange(len(targets)), targets] = 1
    counts = onehot.T @ data.x[mask].astype(np.int64)
    with np.errstate(invalid="ignore", divide="ignore"):
        p_hat = counts / n_i[:, None]
    p_hat[n_i == 0] = np.nan
    return PairStats(n_i, counts, p_hat)


def estimate_ancestor_matrix(stats: PairStats, strict: bool = False) -> AncestorMatrix:
    """``A[i, j] = 1`` iff ``i`` was blocked at least once and ``j`` never fired then."""
    missing = stats.undefined_rows
    if missing:
        nodes = ", ".join(str(i + 1) for i in missing)
        if strict:
            raise InsufficientDataError(f"no blocking interventions on node(s) {nodes}")
        warnings.warn(f"no blocking interventions on node(s) {nodes}", InsufficientDataWarning, stacklevel=2)
    a = (stats.active_counts == 0) & (stats.n_i > 0)[:, None]
    return AncestorMatrix(a)


def evidence_matrix(data: InterventionalDataset) -> np.ndarray:
    """``E[i, j]`` true when some episode not targeting i or j shows X_i = 0, X_j = 1."""
    n = data.n
    off = (data.x == 0).astype(np.int64)
    on = data.x.astype(np.int64)
    rows = np.flatnonzero(data.targets >= 0)
    off[rows, data.targets[rows]] = 0
    on[rows, data.targets[rows]] = 0
    e = (off.T @ on) > 0
    e[np.arange(n), np.arange(n)] = False
    return e


def observational_evidence(data: InterventionalDataset) -> set[tuple[int, int]]:
    e = evidence_matrix(data)
    return {(int(i), int(j)) for i, j in zip(*np.nonzero(e))}


def reconstruct(data: InterventionalDataset, strict: bool = False) -> Digraph:
    """Empirical ancestors -> prune/break cycles -> transitive reduction."""
    a_hat = estimate_ancestor_matrix(empirical_probs(data), strict=strict)
    dag = break_cycles(a_hat, observational_evidence(data))
    return transitive_reduction(dag)
