"""Command line entry point: ``dcckp {gen-instance,gen-schedule,run,summarize,plot-export}``."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

from .dynamics import build_schedule, save_schedule
from .harness import ConfigError, RunConfig, emit_results, load_rows, plot_export, run_experiment, write_summary
from .model import INSTANCE_CLASSES, VARIANCE_REGIMES, generate_instance, save_instance


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    for f in dataclasses.fields(RunConfig):
        p.add_argument(f"--{f.name.replace('_', '-')}", dest=f"cfg_{f.name}", metavar=f.name.upper())


def _config_from_args(args) -> RunConfig:
    overrides = {
        key[4:]: value for key, value in vars(args).items() if key.startswith("cfg_") and value is not None
    }
    if args.config:
        return RunConfig.load(args.config, overrides)
    return RunConfig.from_strings(overrides)


def _cmd_gen_instance(args) -> None:
    inst = generate_instance(args.instance_class, args.n, args.regime, args.seed)
    save_instance(inst, args.output)
    print(f"wrote {inst.n}-item {args.instance_class}/{args.regime} instance to {args.output}")


def _cmd_gen_schedule(args) -> None:
    sched = build_schedule(args.B0, args.r, args.t, args.nu, args.seed, args.eta)
    save_schedule(sched, args.output)
    print(f"wrote {sched.nu}-change schedule (max capacity {sched.capacities.max():.1f}) to {args.output}")


def _cmd_run(args) -> None:
    cfg = _config_from_args(args)
    if args.write_config:
        cfg.save(args.write_config)
    results = run_experiment(cfg, workers=args.workers)
    paths = emit_results(results, args.output, args.format)
    for res in results:
        Es = ", ".join(f"{a:.10g}: {res.E[a]:.2f}" for a in res.alphas)
        print(f"{res.metadata['run_id']}  E = {{{Es}}}")
    print("wrote " + ", ".join(str(p) for p in paths))


def _cmd_summarize(args) -> None:
    summary = write_summary(load_rows(args.results), args.output)
    for s in summary:
        print(f"{s['algorithm']:>10} {s['formulation']} alpha={s['alpha']:.10g} "
              f"runs={s['runs']} mean_E={s['mean_E']:.3f} sd_E={s['sd_E']:.3f}")


def _cmd_plot_export(args) -> None:
    table = plot_export(load_rows(args.results), args.output)
    print(f"wrote {len(table)} rows to {args.output}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dcckp", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-instance", help="generate a benchmark instance file")
    p.add_argument("--class", dest="instance_class", choices=INSTANCE_CLASSES, default="uncorr")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--regime", choices=VARIANCE_REGIMES, default="V1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_gen_instance)

    p = sub.add_parser("gen-schedule", help="generate a capacity schedule file")
    p.add_argument("--B0", type=float, default=None, help="initial capacity (default 2r)")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--nu", type=int, required=True)
    p.add_argument("--eta", type=float, default=None, help="band half-width (default r)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_gen_schedule)

    p = sub.add_parser("run", help="run an experiment and write results")
    p.add_argument("--config", help="key=value config file; flags override its entries")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--write-config", help="also save the effective config here")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("summarize", help="mean/SD of E per algorithm, formulation and alpha")
    p.add_argument("results")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_summarize)

    p = sub.add_parser("plot-export", help="long-format mean/SD table for plotting E vs alpha")
    p.add_argument("results")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=_cmd_plot_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (ConfigError, ValueError, OSError, MemoryError) as exc:
        print(f"dcckp: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
