"""Round-robin data collection, seeded recovery runs and sweeps."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .estimator import InterventionalDataset, reconstruct
from .graph import compare_graphs
from .scm import CascadeModel, derive_seed, derive_seeds, exact_qmin, sample_batch, sample_complexity_bound

EXACT_TARGET = 0.95

# Seed streams, kept apart so the schedule never reuses episode noise.
_SCHEDULE_STREAM = 0xA11CE
_OBS_STREAM = 0x0B5


def schedule_round_robin(n: int, rounds: int, rng_seed: int) -> list[int]:
    """``rounds`` fresh random permutations of ``range(n)``, concatenated."""
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    rng = np.random.default_rng(rng_seed & (2**64 - 1))
    return [int(i) for _ in range(rounds) for i in rng.permutation(n)]


def generate_dataset(model: CascadeModel, rounds: int, obs_episodes: int, seed: int) -> InterventionalDataset:
    """Round-robin blocking episodes followed by ``obs_episodes`` observational ones."""
    targets = schedule_round_robin(model.n, rounds, derive_seed(seed, _SCHEDULE_STREAM)) if rounds else []
    seeds = derive_seeds(seed, np.arange(len(targets)))
    x = sample_batch(model, targets, seeds)
    data = InterventionalDataset(model.n, targets, x)
    if obs_episodes:
        obs_seeds = derive_seeds(derive_seed(seed, _OBS_STREAM), np.arange(obs_episodes))
        xo = sample_batch(model, np.full(obs_episodes, -1), obs_seeds)
        data = data + InterventionalDataset(model.n, np.full(obs_episodes, -1), xo)
    return data


@dataclass
class RunRecord:
    model: str
    p: float
    n_per_object: int
    seed: int
    shd: int
    skeleton_shd: int
    precision: float
    recall: float
    f1: float
    exact: int
    wall_time_seconds: float


RUN_FIELDS = [f.name for f in fields(RunRecord)]


def run_once(name: str, model: CascadeModel, p: float, n_per_object: int, seed: int, timing: bool = True) -> RunRecord:
    start = time.perf_counter()
    data = generate_dataset(model, n_per_object, 0, _point_seed(seed, n_per_object, p))
    est = reconstruct(data)
    m = compare_graphs(est, model.tree)
    elapsed = time.perf_counter() - start if timing else 0.0
    return RunRecord(name, p, n_per_object, seed, m.shd, m.skeleton_shd, m.precision, m.recall, m.f1,
                     int(est.edges == model.tree.edges), elapsed)


def _point_seed(seed: int, n_per_object: int, p: float) -> int:
    return derive_seed(derive_seed(seed, n_per_object), int(round(p * 1e9)))


@dataclass
class RecoverySummary:
    n_per_object: int
    runs: int
    mean_shd: float
    mean_skeleton_shd: float
    exact_fraction: float
    mean_precision: float
    mean_recall: float
    mean_f1: float


def summarize(records: Sequence[RunRecord]) -> RecoverySummary:
    r = list(records)
    mean = lambda key: float(np.mean([getattr(x, key) for x in r])) if r else math.nan  # noqa: E731
    return RecoverySummary(
        r[0].n_per_object if r else 0, len(r), mean("shd"), mean("skeleton_shd"), mean("exact"),
        mean("precision"), mean("recall"), mean("f1"),
    )


def recovery_stats(model: CascadeModel, n_per_object: int, seeds: Sequence[int], name: str = "model") -> RecoverySummary:
    if n_per_object < 1:
        raise ValueError("n_per_object must be >= 1")
    p = max(model.failure)
    return summarize([run_once(name, model, p, n_per_object, s, timing=False) for s in seeds])


@dataclass
class SweepConfig:
    model: str
    n_per_object: list[int]
    failure_probs: Optional[list[float]] = None
    seeds: int = 100
    seed: int = 0
    delta: float = 0.05
    out: Optional[str] = None
    timing: bool = True
    jobs: int = 1

    def __post_init__(self) -> None:
        if not self.n_per_object or min(self.n_per_object) < 1:
            raise ValueError("n_per_object must be a non-empty list of positive integers")
        if self.seeds < 1:
            raise ValueError("seeds must be positive")
        for p in self.failure_probs or []:
            if not 0.0 <= p < 1.0:
                raise ValueError(f"failure probability {p} outside [0, 1)")
        if not 0.0 < self.delta < 1.0:
            raise ValueError("delta must be in (0, 1)")

    @classmethod
    def load(cls, path: str | Path) -> "SweepConfig":
        with open(path) as fh:
            raw = json.load(fh)
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown sweep config keys: {sorted(unknown)}")
        return cls(**raw)


@dataclass
class SweepResult:
    config: SweepConfig
    records: list[RunRecord]
    aggregates: list[dict] = field(default_factory=list)
    qmin: dict[float, float] = field(default_factory=dict)
    bound: dict[float, Optional[int]] = field(default_factory=dict)
    m_min: dict[float, Optional[int]] = field(default_factory=dict)


def _run_task(args):
    return run_once(*args)


def run_sweep(cfg: SweepConfig, resolve_model) -> SweepResult:
    """``resolve_model(name, p)`` maps the config's model to a :class:`CascadeModel`."""
    base = resolve_model(cfg.model, None)
    probs = cfg.failure_probs if cfg.failure_probs is not None else [max(base.failure)]
    tasks = []
    models = {}
    for p in probs:
        models[p] = base if cfg.failure_probs is None else resolve_model(cfg.model, p)
        for n in sorted(cfg.n_per_object):
            for k in range(cfg.seeds):
                tasks.append((cfg.model, models[p], p, n, cfg.seed + k, cfg.timing))
    if cfg.jobs > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            records = list(pool.map(_run_task, tasks, chunksize=16))
    else:
        records = [_run_task(t) for t in tasks]

    res = SweepResult(cfg, records)
    for p in probs:
        m = models[p]
        q = exact_qmin(m) if m.n >= 2 else 1.0
        res.qmin[p] = q
        res.bound[p] = sample_complexity_bound(q, m.n, cfg.delta) if m.n >= 2 else None
        res.m_min[p] = None
        for n in sorted(cfg.n_per_object):
            s = summarize([r for r in records if r.p == p and r.n_per_object == n])
            row = {"model": cfg.model, "p": p, **asdict(s)}
            res.aggregates.append(row)
            if res.m_min[p] is None and s.exact_fraction >= EXACT_TARGET:
                res.m_min[p] = n
    return res


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(round(v, 6))
    return str(v)


def records_csv(records: Sequence[RunRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RUN_FIELDS)
    for r in records:
        w.writerow([_fmt(getattr(r, k)) for k in RUN_FIELDS])
    return buf.getvalue()


AGG_FIELDS = ["model", "p", "n_per_object", "runs", "mean_shd", "mean_skeleton_shd", "exact_fraction",
              "mean_precision", "mean_recall", "mean_f1"]


def aggregates_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(AGG_FIELDS)
    for row in rows:
        w.writerow([_fmt(row[k]) for k in AGG_FIELDS])
    return buf.getvalue()
