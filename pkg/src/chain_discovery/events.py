"""Discrete-event cascade simulator with activation times and collision events.

Activations come from exactly the same noise draws as
:func:`chain_discovery.scm.sample_episode`; this module only adds timing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .scm import CascadeModel, Episode, Intervention, derive_seeds, sample_batch

CONTACT = "contact"
NON_CONTACT = "noncontact"


@dataclass(frozen=True)
class EdgeMechanism:
    kind: str = CONTACT
    delay: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in (CONTACT, NON_CONTACT):
            raise ValueError(f"unknown mechanism kind {self.kind!r}")
        if not self.delay >= 0:
            raise ValueError(f"delay must be >= 0, got {self.delay}")


@dataclass(frozen=True)
class MechanizedModel:
    model: CascadeModel
    mechanisms: dict[tuple[int, int], EdgeMechanism] = field(default_factory=dict)

    def __post_init__(self) -> None:
        edges = self.model.tree.edges
        if set(self.mechanisms) != set(edges):
            missing = sorted(edges - set(self.mechanisms))
            extra = sorted(set(self.mechanisms) - edges)
            raise ValueError(f"mechanisms must cover the tree edges (missing {missing}, extra {extra})")

    @classmethod
    def all_contact(cls, model: CascadeModel, delay: float = 1.0) -> "MechanizedModel":
        return cls(model, {e: EdgeMechanism(CONTACT, delay) for e in model.tree.edges})


@dataclass(frozen=True)
class EventTrace:
    episode: Episode
    activation_time: tuple[Optional[float], ...]
    collisions: tuple[tuple[float, int, int], ...]

    @property
    def n(self) -> int:
        return len(self.activation_time)


def _trace_from_activations(mm: MechanizedModel, iv: Intervention, x: np.ndarray) -> EventTrace:
    tree = mm.model.tree
    times: list[Optional[float]] = [None] * tree.n
    collisions = []
    for j in tree.order:
        if not x[j]:
            continue
        p = tree.parent[j]
        if p is None:
            times[j] = 0.0
            continue
        mech = mm.mechanisms[(p, j)]
        times[j] = times[p] + mech.delay
        if mech.kind == CONTACT:
            collisions.append((times[j], p, j))
    collisions.sort()
    return EventTrace(Episode(iv, tuple(int(v) for v in x)), tuple(times), tuple(collisions))


def simulate_trace(mm: MechanizedModel, iv: Intervention, rng_seed: int) -> EventTrace:
    if iv is not None and not 0 <= iv < mm.model.n:
        raise IndexError(f"intervention target {iv} out of range for n={mm.model.n}")
    x = sample_batch(mm.model, [-1 if iv is None else iv], [rng_seed & (2**64 - 1)])[0]
    return _trace_from_activations(mm, iv, x)


def simulate_traces(mm: MechanizedModel, episodes: int, seed: int) -> list[EventTrace]:
    """Observational traces; episode ``e`` uses ``derive_seed(seed, e)``."""
    seeds = derive_seeds(seed, np.arange(episodes))
    x = sample_batch(mm.model, np.full(episodes, -1), seeds)
    return [_trace_from_activations(mm, None, row) for row in x]


def trace_to_episode(trace: EventTrace) -> Episode:
    x = tuple(0 if t is None else 1 for t in trace.activation_time)
    return Episode(trace.episode.target, x)


@dataclass(frozen=True)
class TraceDataset:
    n: int
    traces: tuple[EventTrace, ...]

    def __init__(self, n: int, traces: Iterable[EventTrace]):
        traces = tuple(traces)
        for t in traces:
            if t.n != n:
                raise ValueError(f"trace has {t.n} nodes, dataset has {n}")
            if t.episode.target is not None:
                raise ValueError("trace datasets hold observational episodes only")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "traces", traces)
