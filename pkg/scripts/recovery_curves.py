"""Recovery curves: exact-recovery fraction and mean skeleton SHD against interventions per object.

    python3 scripts/recovery_curves.py scripts/configs/parallel_triggers_0.1.json --out runs/pt.csv
"""

import argparse
from pathlib import Path

from chain_discovery.cli import resolve_model
from chain_discovery.experiment import SweepConfig, aggregates_csv, records_csv, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("configs", nargs="+", help="JSON sweep configs")
    ap.add_argument("--out", help="CSV path (one config) or directory (several)")
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    for path in args.configs:
        cfg = SweepConfig.load(path)
        cfg.jobs = args.jobs
        res = run_sweep(cfg, resolve_model)
        print(f"# {cfg.model}")
        for p in res.qmin:
            print(f"p={p:g}  q_min={res.qmin[p]:.3f}  bound={res.bound[p]}  M_min={res.m_min[p]}")
        print(f"{'p':>5} {'n':>4} {'exact':>6} {'SSHD':>7} {'SHD':>7}")
        for row in res.aggregates:
            print(f"{row['p']:>5g} {row['n_per_object']:>4} {row['exact_fraction']:>6.2f} "
                  f"{row['mean_skeleton_shd']:>7.3f} {row['mean_shd']:>7.3f}")
        if args.out:
            out = Path(args.out)
            if len(args.configs) > 1:
                out.mkdir(parents=True, exist_ok=True)
                out = out / (Path(path).stem + ".csv")
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(records_csv(res.records))
            out.with_suffix(".summary.csv").write_text(aggregates_csv(res.aggregates))


if __name__ == "__main__":
    main()
