"""``chain-discovery`` command line: generate, discover, eval, sweep, baselines, catalog."""

from __future__ import annotations

import argparse
import sys
import time
import warnings
from pathlib import Path
from typing import Optional, Sequence

from . import catalog, formats
from .baselines import collision_as_influence, temporal_precedence
from .estimator import (
    DatasetFormatError,
    InsufficientDataError,
    InsufficientDataWarning,
    empirical_probs,
    reconstruct,
)
from .events import MechanizedModel, TraceDataset, simulate_traces
from .experiment import (
    RunRecord,
    SweepConfig,
    aggregates_csv,
    generate_dataset,
    records_csv,
    run_sweep,
)
from .graph import compare_graphs
from .scm import CascadeModel

EXIT_OK = 0
EXIT_FORMAT = 1
EXIT_INSUFFICIENT = 2


class UsageError(Exception):
    pass


def _count(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FORMAT, f"{self.prog}: error: {message}\n")


def resolve_scenario(name: str, failure_prob: Optional[float] = None) -> MechanizedModel:
    """Catalog name or file path. Plain models get unit-delay contact mechanisms."""
    if name in catalog.SCENARIOS:
        mm = catalog.scenario(name)
    elif name in catalog.names():
        return MechanizedModel.all_contact(catalog.model(name, failure_prob))
    else:
        mm = formats.parse_scenario(_read(name))
    if failure_prob is not None:
        mm = MechanizedModel(CascadeModel.uniform(mm.model.tree, failure_prob), mm.mechanisms)
    return mm


def resolve_model(name: str, failure_prob: Optional[float] = None) -> CascadeModel:
    if name in catalog.names():
        return catalog.model(name, failure_prob)
    model = formats.parse_model(_read(name))
    if failure_prob is not None:
        model = CascadeModel.uniform(model.tree, failure_prob)
    return model


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path!r}: {exc.strerror}") from None


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_catalog(args) -> int:
    if args.dump:
        if args.dump in catalog.SCENARIOS:
            sys.stdout.write(formats.format_scenario(catalog.scenario(args.dump), args.dump))
        else:
            sys.stdout.write(formats.format_model(resolve_model(args.dump), args.dump))
        return EXIT_OK
    print(f"{'name':34s} {'kind':12s} {'N':>3s} {'failure':>8s}")
    for e in catalog.entries():
        print(f"{e.name:34s} {e.kind:12s} {e.n:3d} {e.default_failure:8.3f}")
    return EXIT_OK


def cmd_generate(args) -> int:
    model = resolve_model(args.model, args.p)
    data = generate_dataset(model, args.rounds, args.obs, args.seed)
    _emit(formats.format_dataset(data), args.out)
    return EXIT_OK


def cmd_discover(args) -> int:
    data = formats.parse_dataset(_read(args.dataset))
    stats = empirical_probs(data)
    missing = stats.undefined_rows
    for i in missing:
        print(f"warning: node {i + 1} was never blocked (n_i = 0); its row carries no evidence", file=sys.stderr)
    if args.strict and missing:
        raise InsufficientDataError(f"{len(missing)} node(s) never blocked")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", InsufficientDataWarning)
        est = reconstruct(data)
    _emit(formats.format_graph(est, f"reconstructed from {len(data)} episodes"), args.out)
    print(f"discovered {len(est.edges)} edges over {data.n} nodes from {len(data)} episodes", file=sys.stderr)
    return EXIT_INSUFFICIENT if missing else EXIT_OK


def cmd_eval(args) -> int:
    est = formats.parse_digraph(_read(args.estimate))
    truth_text = _read(args.truth)
    truth = formats.parse_tree(truth_text)
    start = time.perf_counter()
    m = compare_graphs(est, truth)
    rec = RunRecord(Path(args.truth).stem, float("nan"), 0, args.seed, m.shd, m.skeleton_shd,
                    m.precision, m.recall, m.f1, int(est.edges == truth.edges), time.perf_counter() - start)
    _emit(records_csv([rec]), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    try:
        cfg = SweepConfig.load(args.config)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad sweep config: {exc}") from None
    for key in ("seeds", "seed", "delta", "out", "jobs"):
        v = getattr(args, key)
        if v is not None:
            setattr(cfg, key, v)
    if args.no_timing:
        cfg.timing = False
    cfg.__post_init__()
    res = run_sweep(cfg, resolve_model)
    _emit(records_csv(res.records), cfg.out)
    summary = aggregates_csv(res.aggregates)
    if cfg.out:
        Path(cfg.out).with_suffix(".summary.csv").write_text(summary)
    report = sys.stdout if cfg.out else sys.stderr
    print(f"model {cfg.model}: {len(res.records)} runs", file=report)
    for p in res.qmin:
        mmin = res.m_min[p]
        print(f"p={p}: q_min = {res.qmin[p]:.3f}  bound(delta={cfg.delta}) = {res.bound[p]}  "
              f"M_min = {mmin if mmin is not None else 'not reached'}", file=report)
    report.write(summary)
    return EXIT_OK


def cmd_baselines(args) -> int:
    mm = resolve_scenario(args.model, args.p)
    label = Path(args.model).stem if args.model not in catalog.names() else args.model
    rows = []
    for k in range(args.seeds):
        seed = args.seed + k
        data = TraceDataset(mm.model.n, simulate_traces(mm, args.obs, seed))
        for method in (collision_as_influence, temporal_precedence):
            start = time.perf_counter()
            est = method(data)
            elapsed = time.perf_counter() - start
            m = compare_graphs(est, mm.model.tree)
            rows.append(RunRecord(f"{label}[{method.__name__}]", max(mm.model.failure), args.obs, seed,
                                  m.shd, m.skeleton_shd, m.precision, m.recall, m.f1,
                                  int(est.edges == mm.model.tree.edges), 0.0 if args.no_timing else elapsed))
    _emit(records_csv(rows), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="chain-discovery", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("catalog", help="list built-in models and scenarios")
    c.add_argument("--dump", metavar="NAME", help="print the model/scenario file for NAME")
    c.set_defaults(func=cmd_catalog)

    g = sub.add_parser("generate", help="simulate a round-robin interventional dataset")
    g.add_argument("--model", required=True, help="catalog name or model file")
    g.add_argument("--p", type=float, help="override with a uniform failure probability")
    g.add_argument("--rounds", type=_count, default=1)
    g.add_argument("--obs", type=_count, default=0, help="observational episodes to append")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    d = sub.add_parser("discover", help="reconstruct the causal tree from a dataset file")
    d.add_argument("dataset")
    d.add_argument("--out")
    d.add_argument("--strict", action="store_true", help="fail if some node was never blocked")
    d.set_defaults(func=cmd_discover)

    e = sub.add_parser("eval", help="score an estimated graph against a true tree")
    e.add_argument("estimate")
    e.add_argument("truth")
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("sweep", help="run a JSON sweep config")
    s.add_argument("config")
    s.add_argument("--seeds", type=_positive)
    s.add_argument("--seed", type=int)
    s.add_argument("--delta", type=float)
    s.add_argument("--jobs", type=_positive)
    s.add_argument("--out")
    s.add_argument("--no-timing", action="store_true", help="write 0 for wall time (byte-stable output)")
    s.set_defaults(func=cmd_sweep)

    b = sub.add_parser("baselines", help="score the observational heuristics on a scenario")
    b.add_argument("--model", required=True, help="scenario name or scenario file")
    b.add_argument("--p", type=float)
    b.add_argument("--obs", type=_count, default=100, help="observational traces per seed")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--seeds", type=_positive, default=1)
    b.add_argument("--out")
    b.add_argument("--no-timing", action="store_true")
    b.set_defaults(func=cmd_baselines)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InsufficientDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except (UsageError, DatasetFormatError, ValueError, IndexError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
