"""Exit criteria for the package, each at its pinned tolerance and runtime bound.

A summary line per criterion is printed at the end of the pytest run.
"""

import math
import statistics
import time

import numpy as np
import pytest

from dcckp.algorithms import Gsemo, g_pbi, g_te, g_ws
from dcckp.evaluation import ProfitOracle, best_feasible_per_alpha, dp_optimum
from dcckp.harness import RunConfig, emit_results, run_dynamic, run_experiment
from dcckp.model import generate_instance
from dcckp.objectives import (
    Dominance,
    Formulation2D,
    Formulation3D,
    dominates,
    repair_key,
)
from dcckp.stochastic import DEFAULT_ALPHA_GRID, chance_weight, k_alpha

from conftest import all_solutions, bisect_quantile, random_instance

ALPHAS = (0.5, 0.841345, 1 - 1e-2, 1 - 1e-4, 1 - 1e-6, 1 - 1e-8, 1 - 1e-10)


def phi(x):
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


@pytest.mark.criterion(1, "K_alpha within 1e-12 of the bisection oracle, < 1 s")
def test_k_alpha_accuracy():
    start = time.perf_counter()
    for a in ALPHAS:
        k_alpha.cache_clear()
        k = k_alpha(a)
        assert abs(phi(k) - a) <= 1e-12
        ref = bisect_quantile(a)
        assert abs(phi(ref) - a) <= 1e-12
        assert k == pytest.approx(ref, rel=1e-12, abs=1e-14)
    assert time.perf_counter() - start < 1.0


def _exhaustive(profits, means, B):
    n = len(profits)
    masks = ((np.arange(2**n)[:, None] >> np.arange(n)) & 1).astype(np.int64)
    ok = masks @ means <= math.floor(B)
    return int((masks @ profits)[ok].max())


@pytest.mark.criterion(2, "DP optimum equals exhaustive search on 200 instances n <= 16, < 30 s")
def test_dp_oracle_equivalence():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(1, 17))
        hi = int(rng.choice([10, 100, 1000]))
        inst = random_instance(rng, n, hi=hi)
        B = float(rng.uniform(0, inst.means.sum()))
        assert dp_optimum(inst, B) == _exhaustive(inst.profits, inst.means, B)
    assert time.perf_counter() - start < 30.0


def _disjunction(x, ctx):
    lo, hi = chance_weight(x, ctx.alpha_low), chance_weight(x, ctx.alpha_high)
    a, b = ctx.B - ctx.eta, ctx.B + ctx.eta
    return (a <= lo <= b) or (a <= hi <= b) or (lo <= a and b <= hi)


@pytest.mark.criterion(3, "formulation correctness by enumeration, 50 contexts n <= 12, < 60 s")
def test_formulations_by_enumeration():
    start = time.perf_counter()
    rng = np.random.default_rng(77)
    violations = 0
    nonvacuous = {"band": 0, "feasible3d": 0}
    for _ in range(50):
        n = int(rng.integers(6, 13))
        inst = random_instance(rng, n, hi=int(rng.choice([20, 100])), var_hi=int(rng.choice([10, 400, 4000])))
        total = float(inst.means.sum())
        B = float(rng.uniform(0.1, 0.9) * total)
        eta = float(rng.uniform(0, 0.2) * total)
        a_lo, a_hi = sorted(rng.choice(DEFAULT_ALPHA_GRID, 2, replace=False))
        c2 = Formulation2D.for_instance(inst, a_lo, B, eta)
        c3 = Formulation3D.for_instance(inst, a_lo, a_hi, B, eta)
        sols = all_solutions(inst)

        # (a) in-band strongly dominates out-of-band
        f2 = [c2.fitness(x) for x in sols]
        band = np.array([c2.in_band(x) for x in sols])
        F = np.array([f.normalized for f in f2])
        inside, outside = F[band], F[~band]
        if len(inside) and len(outside):
            nonvacuous["band"] += 1
            ge = (inside[:, None, :] >= outside[None, :, :]).all(axis=2)
            gt = (inside[:, None, :] > outside[None, :, :]).any(axis=2)
            violations += int((~(ge & gt)).sum())
            fin = [f for f, ok in zip(f2, band) if ok]
            fout = [f for f, ok in zip(f2, band) if not ok]
            for i in rng.integers(0, len(fin), 20):
                for j in rng.integers(0, len(fout), 20):
                    violations += dominates(fin[i], fout[j]) is not Dominance.STRONG

        # (b) interval test == three-clause disjunction == zero violation
        # (c) violation equals penalty on every infeasible solution
        feas3 = []
        for x in sols:
            f = c3.feasible(x)
            feas3.append(f)
            violations += not (f == _disjunction(x, c3) == (c3.violation(x) == 0))
            if not f:
                violations += not math.isclose(c3.violation(x), c3.penalty(x), rel_tol=1e-12)
                violations += not c3.penalty(x) > 0
        if any(feas3) and not all(feas3):
            nonvacuous["feasible3d"] += 1

        # (d) every zero-violation solution outranks every violating one
        for ctx in (c2, c3):
            keys = [(repair_key(x, ctx.violation(x), inst), ctx.violation(x) == 0) for x in sols]
            good = [k for k, ok in keys if ok]
            bad = [k for k, ok in keys if not ok]
            if good and bad:
                violations += not min(good) > max(bad)
    assert violations == 0
    assert nonvacuous["band"] >= 25 and nonvacuous["feasible3d"] >= 25
    assert time.perf_counter() - start < 60.0


def _check_archive(archive, rng):
    F = np.array([o.normalized for o in archive.objectives])
    assert len({tuple(f) for f in F}) == len(F)
    ge = (F[:, None, :] >= F[None, :, :]).all(axis=2)
    gt = (F[:, None, :] > F[None, :, :]).any(axis=2)
    assert not (ge & gt).any()
    # spot-check the vectorised test against the scalar dominance relation
    objs = archive.objectives
    for i, j in rng.integers(0, len(objs), (2000, 2)):
        assert (i == j) or dominates(objs[i], objs[j]) is not Dominance.STRONG


@pytest.mark.criterion(4, "GSEMO archive non-dominated and deduplicated after 1e5 steps, n=50, < 30 s")
@pytest.mark.parametrize("formulation", ["obj2", "obj3"])
def test_archive_invariant(formulation):
    inst = generate_instance("uncorr", 50, "V1", 4)
    B = float(inst.means.sum()) / 4
    if formulation == "obj2":
        ctx = Formulation2D.for_instance(inst, 1 - 1e-4, B, 500)
    else:
        ctx = Formulation3D.for_instance(inst, 1 - 1e-2, 1 - 1e-10, B, 500)
    start = time.perf_counter()
    algo = Gsemo(inst, ctx, np.random.default_rng(31))
    for _ in range(100_000):
        algo.step()
    _check_archive(algo.archive, np.random.default_rng(5))
    assert len(algo.archive) > 1
    assert time.perf_counter() - start < 30.0


@pytest.mark.criterion(5, "exact budget t*nu = 10,000 and byte-identical CSV for identical seeds, < 10 s")
def test_budget_and_determinism(tmp_path):
    start = time.perf_counter()
    cfg = RunConfig(instance_class="uncorr", n=100, regime="V1", formulation="obj3", algorithm="gsemo",
                    r=500, t=500, nu=20, instance_seed=1, schedule_seed=2, algorithm_seed=3)
    paths = []
    for name in ("first", "second"):
        results = run_experiment(cfg)
        assert [r.metadata["evaluations"] for r in results] == [[10_000]]
        paths.append(emit_results(results, tmp_path / f"{name}.csv")[0])
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert time.perf_counter() - start < 10.0


@pytest.mark.criterion(6, "scalarisation spot values exact within 1e-12")
def test_scalarisation_spot_values():
    assert abs(g_ws((2, 4), (0.5, 0.5)) - 3) <= 1e-12
    assert abs(g_te((3, 4), (1, 0), (5, 5)) - 2) <= 1e-12
    assert abs(g_pbi((3, 0), (1, 0), (5, 0), 5.0) - 2) <= 1e-12


@pytest.mark.slow
@pytest.mark.criterion(7, "3-obj GSEMO median E <= 2-obj on >= 3 of 5 alphas (uncorr n=100 V1), < 15 min")
def test_three_objective_trend():
    start = time.perf_counter()
    common = dict(instance_class="uncorr", n=100, regime="V1", instance_seed=1, r=500.0, t=2000, nu=50,
                  repeats=10, schedule_seed=1000, algorithm="gsemo")
    obj2 = run_experiment(RunConfig(formulation="obj2", **common))
    obj3 = run_experiment(RunConfig(formulation="obj3", **common))
    # identical capacity walks in every repeat
    for a, b in zip(obj2, obj3):
        assert [r.p_star for r in a.records[DEFAULT_ALPHA_GRID[0]]] == [r.p_star for r in b.records[DEFAULT_ALPHA_GRID[0]]]
    wins = 0
    for alpha in DEFAULT_ALPHA_GRID:
        m2 = statistics.median(r.E[alpha] for r in obj2)
        m3 = statistics.median(r.E[alpha] for r in obj3)
        print(f"alpha={alpha:.10g}: median E obj2={m2:.2f} obj3={m3:.2f}")
        wins += m3 <= m2
    assert wins >= 3
    assert time.perf_counter() - start < 15 * 60


@pytest.mark.criterion(8, "one 3-obj archive yields a w_alpha <= B solution for all 5 alphas, < 1 min")
def test_alpha_universality():
    start = time.perf_counter()
    cfg = RunConfig(instance_class="uncorr", n=100, regime="V1", formulation="obj3", algorithm="gsemo",
                    r=500, t=2000, nu=10, instance_seed=1, schedule_seed=7, algorithm_seed=8)
    inst, sched = cfg.instance(), cfg.schedule(0)
    ctx = Formulation3D.for_instance(inst, DEFAULT_ALPHA_GRID[0], DEFAULT_ALPHA_GRID[-1], sched.capacities[0], sched.eta)
    algo = Gsemo(inst, ctx, np.random.default_rng(8))
    records = run_dynamic(algo, sched, DEFAULT_ALPHA_GRID, ProfitOracle(inst), inst)
    B = float(sched.capacities[sched.nu - 1])
    best = best_feasible_per_alpha(algo.population, B, DEFAULT_ALPHA_GRID)
    for alpha, x in best.items():
        assert x is not None, f"no feasible solution for alpha={alpha}"
        assert chance_weight(x, alpha) <= B
        assert records[alpha][-1].best_profit == x.profit
    # stricter levels can only cost profit
    profits = [best[a].profit for a in DEFAULT_ALPHA_GRID]
    assert profits == sorted(profits, reverse=True)
    assert time.perf_counter() - start < 60.0
