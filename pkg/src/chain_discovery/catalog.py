"""Built-in environments: ground-truth trees, synthetic SCMs and timed scenarios.

Chains are written with 1-based object labels exactly as the environments
number their objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .events import CONTACT, NON_CONTACT, EdgeMechanism, MechanizedModel
from .graph import CausalTree
from .scm import CascadeModel

TREE_CHAINS: dict[str, tuple[int, list[list[int]]]] = {
    "minimal_chain": (4, [[3, 4, 1, 2]]),
    "sequential_chain": (11, [[3, 9, 6, 8, 4, 7, 2, 1, 5, 10, 11]]),
    "parallel_triggers": (12, [[2, 10], [10, 5, 9, 8, 1, 11], [10, 6, 3, 4, 7, 12]]),
    "intertwined_mechanisms": (13, [[6, 3], [3, 7, 5], [3, 12, 10, 2, 13, 9, 8, 4, 11, 1]]),
    "linear_slot_machine": (16, [[11, 9, 13, 1, 4, 2, 7, 6, 3, 15, 16, 10, 12, 14, 5, 8]]),
    "large_slot_machine": (
        24,
        [
            [18, 9],
            [9, 1, 12, 23, 21, 13, 17],
            [9, 22, 8],
            [9, 15, 6, 14, 20, 3, 24, 5, 19, 11, 16, 10, 4, 7, 2],
        ],
    ),
}

# The worked dataset example labels the parallel-triggers objects differently
# from the environment listing above; it is kept as its own tree.
PARALLEL_TRIGGERS_EXAMPLE = (12, [[10, 8], [8, 5, 11, 12, 7, 2], [8, 1, 6, 9, 4, 3]])

ENVIRONMENTS = tuple(TREE_CHAINS)

SYNTHETIC: dict[str, tuple[str, float]] = {
    "synthetic_parallel_triggers_0.1": ("parallel_triggers", 0.1),
    "synthetic_large_slot_machine_0.1": ("large_slot_machine", 0.1),
}


def tree(name: str) -> CausalTree:
    if name == "parallel_triggers_example":
        n, chains = PARALLEL_TRIGGERS_EXAMPLE
    else:
        n, chains = TREE_CHAINS[name]
    return CausalTree.from_chains(n, chains)


def model(name: str, failure_prob: float | None = None) -> CascadeModel:
    """Catalog model; physical environments default to no failures."""
    if name in SYNTHETIC:
        base, p = SYNTHETIC[name]
        return CascadeModel.uniform(tree(base), p if failure_prob is None else failure_prob)
    if name in SCENARIOS:
        mm = scenario(name)
        return mm.model if failure_prob is None else CascadeModel.uniform(mm.model.tree, failure_prob)
    return CascadeModel.uniform(tree(name), failure_prob or 0.0)


def _mech(edges: dict[tuple[int, int], tuple[str, float]]) -> dict[tuple[int, int], EdgeMechanism]:
    return {(i - 1, j - 1): EdgeMechanism(kind, delay) for (i, j), (kind, delay) in edges.items()}


def _chain_staggered() -> MechanizedModel:
    m = CascadeModel.uniform(tree("minimal_chain"), 0.0)
    return MechanizedModel(m, _mech({(3, 4): (CONTACT, 1.0), (4, 1): (CONTACT, 2.0), (1, 2): (CONTACT, 3.0)}))


def _parallel_triggers_simultaneous() -> MechanizedModel:
    # button 8 releases balls 5 and 1; buttons 11 and 6 go down together and
    # release balls 12 and 9 at the same instant
    m = CascadeModel.uniform(tree("parallel_triggers_example"), 0.002)
    return MechanizedModel(
        m,
        _mech(
            {
                (10, 8): (CONTACT, 1.0),
                (8, 5): (NON_CONTACT, 2.0),
                (8, 1): (NON_CONTACT, 2.0),
                (5, 11): (CONTACT, 1.5),
                (1, 6): (CONTACT, 1.5),
                (11, 12): (NON_CONTACT, 3.0),
                (6, 9): (NON_CONTACT, 3.0),
                (12, 7): (CONTACT, 1.0),
                (7, 2): (CONTACT, 1.0),
                (9, 4): (CONTACT, 1.0),
                (4, 3): (CONTACT, 1.0),
            }
        ),
    )


def _sequential_chain_button() -> MechanizedModel:
    # button 2 releases ball 1 by removing the wall underneath it
    t = tree("sequential_chain")
    mech = {e: EdgeMechanism(CONTACT, 1.0) for e in t.edges}
    mech[(1, 0)] = EdgeMechanism(NON_CONTACT, 2.5)
    return MechanizedModel(CascadeModel.uniform(t, 0.0), mech)


def _linear_slot_machine_buttons() -> MechanizedModel:
    # every second link along the chain is a button releasing the next ball
    t = tree("linear_slot_machine")
    chain = TREE_CHAINS["linear_slot_machine"][1][0]
    mech = {}
    for k, (i, j) in enumerate(zip(chain[:-1], chain[1:])):
        kind = NON_CONTACT if k % 2 else CONTACT
        mech[(i - 1, j - 1)] = EdgeMechanism(kind, 2.0 if kind == NON_CONTACT else 1.0)
    return MechanizedModel(CascadeModel.uniform(t, 0.0), mech)


SCENARIOS: dict[str, Callable[[], MechanizedModel]] = {
    "chain_staggered": _chain_staggered,
    "parallel_triggers_simultaneous": _parallel_triggers_simultaneous,
    "sequential_chain_button": _sequential_chain_button,
    "linear_slot_machine_buttons": _linear_slot_machine_buttons,
}


def scenario(name: str) -> MechanizedModel:
    return SCENARIOS[name]()


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    kind: str
    n: int
    default_failure: float


def entries() -> list[CatalogEntry]:
    out = [CatalogEntry(name, "environment", TREE_CHAINS[name][0], 0.0) for name in ENVIRONMENTS]
    out += [CatalogEntry(name, "synthetic", TREE_CHAINS[b][0], p) for name, (b, p) in SYNTHETIC.items()]
    out.append(CatalogEntry("parallel_triggers_example", "environment", 12, 0.0))
    for name, build in SCENARIOS.items():
        mm = build()
        out.append(CatalogEntry(name, "scenario", mm.model.n, max(mm.model.failure)))
    return out


def names() -> list[str]:
    return [e.name for e in entries()]
