"""Observational heuristics that read privileged event traces."""

from __future__ import annotations

from .events import TraceDataset
from .graph import Digraph


def collision_as_influence(data: TraceDataset) -> Digraph:
    """Edge i -> j whenever i hits j while j is still inactive, in any trace."""
    edges = set()
    for trace in data.traces:
        for t, i, j in trace.collisions:
            tj = trace.activation_time[j]
            if tj is not None and tj >= t:
                edges.add((i, j))
    return Digraph(data.n, frozenset(edges))


def temporal_precedence(data: TraceDataset) -> Digraph:
    """Parent by activation order.

    Contact activations take the colliding object as parent. Anything else is
    blamed on the target of the latest collision strictly earlier (lowest
    target index on ties), or failing that the latest activated node.
    """
    edges = set()
    for trace in data.traces:
        times = trace.activation_time
        order = sorted((t, j) for j, t in enumerate(times) if t is not None)
        hit_by = {}
        for t, i, j in trace.collisions:
            hit_by.setdefault(j, (t, i))
        seen: list[int] = []
        for t, j in order:
            if not seen:
                seen.append(j)
                continue
            if j in hit_by and hit_by[j][0] == t:
                parent = hit_by[j][1]
            else:
                earlier = [(ct, tgt) for ct, _, tgt in trace.collisions if ct < t and tgt != j]
                if earlier:
                    latest = max(ct for ct, _ in earlier)
                    parent = min(tgt for ct, tgt in earlier if ct == latest)
                else:
                    parent = seen[-1]
            edges.add((parent, j))
            seen.append(j)
    return Digraph(data.n, frozenset(edges))
