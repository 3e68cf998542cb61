"""2- vs 3-objective GSEMO on one uncorr n=100 V1 instance with shared capacity walks.

    python scripts/trend_smoke.py --repeats 10 --out results/trend.csv
"""

import argparse
import statistics
import time
from pathlib import Path

from dcckp.harness import RunConfig, emit_results, plot_export, run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--algorithm", default="gsemo")
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--r", type=float, default=500.0)
    ap.add_argument("--t", type=int, default=2000)
    ap.add_argument("--nu", type=int, default=50)
    ap.add_argument("--repeats", type=int, default=10)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/trend.csv")
    args = ap.parse_args()

    common = dict(instance_class="uncorr", n=args.n, regime="V1", instance_seed=1, r=args.r, t=args.t,
                  nu=args.nu, repeats=args.repeats, schedule_seed=1000, algorithm=args.algorithm)
    cfgs = [RunConfig(formulation=f, **common) for f in ("obj2", "obj3")]
    start = time.perf_counter()
    results = run_experiment(cfgs, workers=args.workers)
    elapsed = time.perf_counter() - start

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    emit_results(results, out)
    plot_export(results, out.with_name(out.stem + ".plot.csv"))

    by_form = {f: [r for r in results if r.metadata["formulation"] == f] for f in ("obj2", "obj3")}
    wins = 0
    print(f"{'alpha':>14} {'median E obj2':>14} {'median E obj3':>14}")
    for a in cfgs[0].alpha_grid:
        m2 = statistics.median(r.E[a] for r in by_form["obj2"])
        m3 = statistics.median(r.E[a] for r in by_form["obj3"])
        wins += m3 <= m2
        print(f"{a:>14.10g} {m2:>14.2f} {m3:>14.2f}")
    print(f"obj3 <= obj2 on {wins}/5 levels; {elapsed:.1f}s")


if __name__ == "__main__":
    main()
