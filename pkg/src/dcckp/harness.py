"""Experiment orchestration: configs, seeded runs, budget accounting and result files."""

from __future__ import annotations

import csv
import dataclasses
import json
import logging
import math
import os
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .algorithms import Gsemo, Moead, VariationConfig, on_capacity_change
from .dynamics import DynamicSchedule, build_schedule, load_schedule
from .evaluation import ProfitOracle, RunResult, aggregate, offline_error
from .model import INSTANCE_CLASSES, VARIANCE_REGIMES, Instance, generate_instance, load_instance
from .objectives import Formulation, Formulation2D, Formulation3D
from .stochastic import DEFAULT_ALPHA_GRID, AlphaProfile

logger = logging.getLogger(__name__)

FORMULATIONS = ("obj2", "obj3")
ALGORITHMS = ("gsemo", "moead_ws", "moead_te", "moead_pbi")

CSV_COLUMNS = (
    "run_id", "algorithm", "formulation", "instance_class", "n", "regime", "r", "t", "nu",
    "alpha", "change_index", "p_star", "e_i", "E", "seed_schedule", "seed_algorithm",
)
SUMMARY_COLUMNS = ("algorithm", "formulation", "alpha", "runs", "mean_E", "sd_E")
PLOT_COLUMNS = ("algorithm", "formulation", "alpha", "mean_E", "sd_E")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    instance_class: str = "uncorr"
    n: int = 100
    regime: str = "V1"
    instance_seed: int = 0
    instance_path: str | None = None
    formulation: str = "obj3"
    algorithm: str = "gsemo"
    alpha_grid: tuple[float, ...] = DEFAULT_ALPHA_GRID
    alpha_low: float | None = None
    alpha_high: float | None = None
    B0: float | None = None
    r: float = 500.0
    t: int = 2000
    nu: int = 50
    eta: float | None = None
    schedule_seed: int = 0
    schedule_path: str | None = None
    population_size: int | None = None
    repeats: int = 1
    algorithm_seed: int = 0
    theta: float = 5.0
    crossover_prob: float = 0.8

    def __post_init__(self):
        object.__setattr__(self, "alpha_grid", tuple(float(a) for a in self.alpha_grid))
        errors = []
        if self.instance_path is None:
            if self.instance_class not in INSTANCE_CLASSES:
                errors.append(f"instance_class must be one of {INSTANCE_CLASSES}, got {self.instance_class!r}")
            if self.regime not in VARIANCE_REGIMES:
                errors.append(f"regime must be one of {VARIANCE_REGIMES}, got {self.regime!r}")
            if self.n < 1:
                errors.append(f"n must be >= 1, got {self.n}")
        if self.formulation not in FORMULATIONS:
            errors.append(f"formulation must be one of {FORMULATIONS}, got {self.formulation!r}")
        if self.algorithm not in ALGORITHMS:
            errors.append(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.r <= 0:
            errors.append(f"r must be positive, got {self.r}")
        if self.t < 1:
            errors.append(f"t must be >= 1, got {self.t}")
        if self.nu < 1:
            errors.append(f"nu must be >= 1, got {self.nu}")
        if self.eta is not None and self.eta < 0:
            errors.append(f"eta must be nonnegative, got {self.eta}")
        if self.B0 is not None and self.B0 < 0:
            errors.append(f"B0 must be nonnegative, got {self.B0}")
        if self.repeats < 1:
            errors.append(f"repeats must be >= 1, got {self.repeats}")
        if self.theta <= 0:
            errors.append(f"theta must be positive, got {self.theta}")
        if not 0 <= self.crossover_prob <= 1:
            errors.append(f"crossover_prob must lie in [0, 1], got {self.crossover_prob}")
        if self.population_size is not None and self.population_size < 2:
            errors.append(f"population_size must be >= 2, got {self.population_size}")
        try:
            self.alpha_profile
        except ValueError as exc:
            errors.append(f"alpha profile: {exc}")
        else:
            if self.formulation == "obj3" and not self.alpha_profile.alpha_low < self.alpha_profile.alpha_high:
                errors.append("obj3 needs alpha_low < alpha_high")
        if not errors and self.epoch_length < 1:
            errors.append(f"t={self.t} leaves no evaluations per epoch for {len(self.alpha_grid)} sub-runs")
        if not errors and self.initial_evaluations(self.n) > self.epoch_length:
            errors.append(
                f"initialisation needs {self.initial_evaluations(self.n)} evaluations but an epoch has only "
                f"{self.epoch_length}"
            )
        if errors:
            raise ConfigError("; ".join(errors))

    @property
    def alpha_profile(self) -> AlphaProfile:
        lo = self.alpha_grid[0] if self.alpha_low is None else self.alpha_low
        hi = self.alpha_grid[-1] if self.alpha_high is None else self.alpha_high
        return AlphaProfile(lo, hi, self.alpha_grid)

    @property
    def total_budget(self) -> int:
        return self.t * self.nu

    @property
    def sub_runs(self) -> int:
        return len(self.alpha_grid) if self.formulation == "obj2" else 1

    @property
    def epoch_length(self) -> int:
        """Evaluations between changes within one (sub-)run."""
        return self.t // self.sub_runs

    @property
    def budget_dropped(self) -> int:
        return self.total_budget - self.sub_runs * self.epoch_length * self.nu

    def pop_size(self, n: int) -> int:
        if self.population_size is not None:
            return self.population_size
        return n if self.formulation == "obj2" else 2 * n

    def initial_evaluations(self, n: int) -> int:
        return 1 if self.algorithm == "gsemo" else self.pop_size(n)

    def instance(self) -> Instance:
        if self.instance_path is not None:
            return load_instance(self.instance_path)
        return generate_instance(self.instance_class, self.n, self.regime, self.instance_seed)

    def schedule(self, repeat: int) -> DynamicSchedule:
        if self.schedule_path is not None:
            return load_schedule(self.schedule_path).with_period(self.epoch_length)
        return build_schedule(self.B0, self.r, self.epoch_length, self.nu, self.schedule_seed + repeat, self.eta)

    def to_text(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            lines.append(f"{f.name}={_format_value(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, overrides: dict[str, str] | None = None) -> RunConfig:
        raw = {}
        for no, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"line {no}: expected key=value, got {line!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            raw[key] = value
        raw.update(overrides or {})
        return cls.from_strings(raw)

    @classmethod
    def from_strings(cls, raw: dict[str, str]) -> RunConfig:
        known = {f.name: f for f in dataclasses.fields(cls)}
        unknown = sorted(set(raw) - set(known))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        kwargs = {}
        for key, value in raw.items():
            try:
                kwargs[key] = _parse_value(known[key].type, value)
            except ValueError as exc:
                raise ConfigError(f"{key}: {exc}") from None
        return cls(**kwargs)

    def save(self, path: str | os.PathLike) -> None:
        Path(path).write_text(self.to_text(), encoding="ascii")

    @classmethod
    def load(cls, path: str | os.PathLike, overrides: dict[str, str] | None = None) -> RunConfig:
        return cls.from_text(Path(path).read_text(encoding="ascii"), overrides)


def _format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, tuple):
        return ",".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _parse_value(type_name: str, value: str):
    optional = "None" in type_name
    if optional and value.lower() in ("none", ""):
        return None
    if type_name.startswith("tuple"):
        return tuple(float(v) for v in value.split(",") if v.strip())
    if type_name.startswith("int"):
        return int(value)
    if type_name.startswith("float"):
        return float(value)
    return value


# ---------------------------------------------------------------- single runs


def make_formulation(cfg: RunConfig, inst: Instance, B: float, eta: float, alpha: float | None = None) -> Formulation:
    if cfg.formulation == "obj2":
        return Formulation2D.for_instance(inst, alpha, B, eta)
    prof = cfg.alpha_profile
    return Formulation3D.for_instance(inst, prof.alpha_low, prof.alpha_high, B, eta)


def make_algorithm(cfg: RunConfig, inst: Instance, formulation: Formulation, rng: np.random.Generator):
    if cfg.algorithm == "gsemo":
        return Gsemo(inst, formulation, rng)
    return Moead(
        inst,
        formulation,
        rng,
        cfg.pop_size(inst.n),
        decomposition=cfg.algorithm.split("_", 1)[1],
        theta=cfg.theta,
        variation=VariationConfig(crossover_prob=cfg.crossover_prob),
    )


@dataclass
class EpochTrace:
    """Bookkeeping of one dynamic run."""

    evaluations: int = 0
    repairs: int = 0
    repair_evaluations: int = 0
    boundaries: list[int] = field(default_factory=list)


def run_dynamic(
    algo,
    schedule: DynamicSchedule,
    alphas: Sequence[float],
    oracle: ProfitOracle,
    inst: Instance,
    trace: EpochTrace | None = None,
):
    """Alternate t-evaluation epochs with capacity changes; snapshot before each change.

    Returns {alpha: [EvaluationRecord, ...]} with one record per change.
    """
    t = schedule.t
    trace = trace if trace is not None else EpochTrace()
    records = {a: [] for a in alphas}
    if algo.evaluations > t:
        raise ConfigError(f"initialisation used {algo.evaluations} evaluations, more than t={t}")
    for k in range(schedule.nu):
        B = float(schedule.capacities[k])
        boundary = t * (k + 1)
        if k > 0:
            used = on_capacity_change(algo, algo.formulation.with_capacity(B), boundary - algo.evaluations)
            if used:
                trace.repairs += 1
                trace.repair_evaluations += used
        while algo.evaluations < boundary:
            algo.step()
        trace.boundaries.append(algo.evaluations)
        snapshot = list(algo.population)
        p_star = oracle(B)
        for a in alphas:
            records[a].append(offline_error(inst, B, a, snapshot, p_star=p_star, change_index=k + 1))
    trace.evaluations = algo.evaluations
    if algo.evaluations != t * schedule.nu:
        raise RuntimeError(f"budget accounting broke: {algo.evaluations} != {t * schedule.nu}")
    return records


def run_once(cfg: RunConfig, repeat: int, inst: Instance | None = None) -> RunResult:
    inst = cfg.instance() if inst is None else inst
    sched = cfg.schedule(repeat)
    oracle = ProfitOracle(inst)
    seed_algorithm = cfg.algorithm_seed + repeat
    if cfg.formulation == "obj3":
        groups = [tuple(cfg.alpha_grid)]
    else:
        groups = [(a,) for a in cfg.alpha_grid]
    records, evaluations, repairs = {}, [], 0
    for j, alphas in enumerate(groups):
        rng = np.random.default_rng([seed_algorithm, j])
        form = make_formulation(cfg, inst, sched.capacities[0], sched.eta, alphas[0])
        algo = make_algorithm(cfg, inst, form, rng)
        trace = EpochTrace()
        records.update(run_dynamic(algo, sched, alphas, oracle, inst, trace))
        evaluations.append(trace.evaluations)
        repairs += trace.repairs
    meta = {
        "run_id": f"{cfg.algorithm}_{cfg.formulation}_{repeat}",
        "algorithm": cfg.algorithm,
        "formulation": cfg.formulation,
        "instance_class": cfg.instance_class if cfg.instance_path is None else "file",
        "n": inst.n,
        "regime": cfg.regime if cfg.instance_path is None else "file",
        "r": sched.r,
        "t": sched.t,
        "nu": sched.nu,
        "seed_schedule": sched.seed,
        "seed_algorithm": seed_algorithm,
        "evaluations": evaluations,
        "budget_dropped": cfg.budget_dropped,
        "repairs": repairs,
        "capacity_clamps": sched.clamp_count,
        "rescoring_counts_as_evaluation": False,
    }
    return aggregate(records, sched.nu, meta)


def _run_job(args):
    cfg, repeat = args
    return run_once(cfg, repeat)


def run_experiment(cfg: RunConfig | Sequence[RunConfig], workers: int = 1) -> list[RunResult]:
    """Run every repeat of one or more configs; results come back in (config, repeat) order."""
    cfgs = [cfg] if isinstance(cfg, RunConfig) else list(cfg)
    jobs = [(c, rep) for c in cfgs for rep in range(c.repeats)]
    if workers <= 1 or len(jobs) == 1:
        return [_run_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_job, jobs))


# ---------------------------------------------------------------- result files


def _fmt(x: float) -> str:
    return f"{x:.9f}"


def detail_rows(results: Iterable[RunResult]) -> list[dict]:
    rows = []
    for res in results:
        m = res.metadata
        for alpha in res.alphas:
            for rec in res.records[alpha]:
                rows.append({
                    "run_id": m["run_id"],
                    "algorithm": m["algorithm"],
                    "formulation": m["formulation"],
                    "instance_class": m["instance_class"],
                    "n": m["n"],
                    "regime": m["regime"],
                    "r": m["r"],
                    "t": m["t"],
                    "nu": m["nu"],
                    "alpha": alpha,
                    "change_index": rec.change_index,
                    "p_star": rec.p_star,
                    "e_i": rec.e_i,
                    "E": res.E[alpha],
                    "seed_schedule": m["seed_schedule"],
                    "seed_algorithm": m["seed_algorithm"],
                })
    return rows


def summarize(rows: Iterable[dict]) -> list[dict]:
    """Mean and sample SD of the per-run E for every (algorithm, formulation, alpha)."""
    per_run: dict[tuple, list[float]] = {}
    for row in rows:
        key = (row["algorithm"], row["formulation"], float(row["alpha"]), row["run_id"])
        per_run.setdefault(key, []).append(float(row["e_i"]))
    cells: dict[tuple, list[float]] = {}
    for (alg, form, alpha, _), es in per_run.items():
        cells.setdefault((alg, form, alpha), []).append(math.fsum(es) / len(es))
    out = []
    for (alg, form, alpha), Es in sorted(cells.items()):
        out.append({
            "algorithm": alg,
            "formulation": form,
            "alpha": alpha,
            "runs": len(Es),
            "mean_E": math.fsum(Es) / len(Es),
            "sd_E": statistics.stdev(Es) if len(Es) > 1 else 0.0,
        })
    return out


def _csv_value(key: str, value) -> str:
    if key in ("e_i", "E", "mean_E", "sd_E"):
        return _fmt(float(value))
    if isinstance(value, float):
        return repr(value)
    return "" if value is None else str(value)


def _write_csv(path: Path, columns: Sequence[str], rows: Iterable[dict]) -> None:
    with open(path, "w", newline="", encoding="ascii") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_csv_value(c, row[c]) for c in columns])


def summary_path(path: str | os.PathLike) -> Path:
    p = Path(path)
    return p.with_name(p.stem + ".summary" + p.suffix)


def emit_results(results: Sequence[RunResult], path: str | os.PathLike, fmt: str = "csv") -> list[Path]:
    """Write detail rows and per-cell mean/SD summaries.

    CSV: detail rows to ``path`` and summary rows to ``<stem>.summary.csv``.
    JSON: one document with ``records``, ``summary`` and per-run ``runs`` metadata.
    """
    if not results:
        raise ValueError("no results to emit")
    rows = detail_rows(results)
    summary = summarize(rows)
    path = Path(path)
    if fmt == "csv":
        _write_csv(path, CSV_COLUMNS, rows)
        spath = summary_path(path)
        _write_csv(spath, SUMMARY_COLUMNS, summary)
        return [path, spath]
    if fmt == "json":
        doc = {
            "records": [{k: _json_value(k, r[k]) for k in CSV_COLUMNS} for r in rows],
            "summary": [{k: _json_value(k, r[k]) for k in SUMMARY_COLUMNS} for r in summary],
            "runs": [res.metadata for res in results],
        }
        path.write_text(json.dumps(doc, indent=1) + "\n", encoding="ascii")
        return [path]
    raise ValueError(f"unknown result format {fmt!r}; expected csv or json")


def _json_value(key: str, value):
    if key in ("e_i", "E", "mean_E", "sd_E"):
        return round(float(value), 9)
    return value


_INT_COLUMNS = {"n", "t", "nu", "change_index", "p_star", "seed_schedule", "seed_algorithm", "runs"}
_FLOAT_COLUMNS = {"r", "alpha", "e_i", "E", "mean_E", "sd_E"}


def _typed(row: dict) -> dict:
    out = {}
    for k, v in row.items():
        if k in _INT_COLUMNS and v not in ("", None):
            out[k] = int(v)
        elif k in _FLOAT_COLUMNS and v not in ("", None):
            out[k] = float(v)
        else:
            out[k] = v
    return out


def load_rows(path: str | os.PathLike) -> list[dict]:
    """Read detail rows back from a CSV or JSON result file."""
    path = Path(path)
    if path.suffix == ".json":
        return [_typed(r) for r in json.loads(path.read_text())["records"]]
    with open(path, newline="", encoding="ascii") as fh:
        reader = csv.DictReader(fh)
        missing = set(CSV_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"{path}: missing columns {sorted(missing)}")
        return [_typed(r) for r in reader]


def write_summary(rows: Iterable[dict], path: str | os.PathLike) -> list[dict]:
    summary = summarize(rows)
    _write_csv(Path(path), SUMMARY_COLUMNS, summary)
    return summary


def plot_export(results: Sequence[RunResult] | Sequence[dict], path: str | os.PathLike) -> list[dict]:
    """Long-format table of mean and SD of E against alpha, one row per algorithm cell."""
    results = list(results)
    rows = results if results and isinstance(results[0], dict) else detail_rows(results)
    table = [{k: s[k] for k in PLOT_COLUMNS} for s in summarize(rows)]
    _write_csv(Path(path), PLOT_COLUMNS, table)
    return table
