import numpy as np
import pytest

from dcckp.algorithms import VariationConfig, mutate, uniform_crossover
from dcckp.model import Instance, Solution, generate_instance

from conftest import brute_aggregates


class NoFlipRng:
    def random(self, size=None):
        return np.ones(size) if size is not None else 1.0


def test_single_bit_always_flips():
    inst = Instance([2], [3], [4])
    x = Solution.empty(1)
    rng = np.random.default_rng(0)
    for _ in range(20):
        x = mutate(x, inst, rng)
    assert not x.bits[0]  # 20 flips
    assert mutate(x, inst, rng).bits[0]


def test_no_flip_gives_parent(small_instance):
    x = Solution.from_bits([1, 0, 1, 1, 0], small_instance)
    assert mutate(x, small_instance, NoFlipRng()) == x


def test_mutation_flip_count_statistics():
    n, N = 100, 100_000
    inst = generate_instance("uncorr", n, "V1", 0)
    rng = np.random.default_rng(1)
    x = Solution.empty(n)
    counts = np.array([int(mutate(x, inst, rng).bits.sum()) for _ in range(N)])
    sd = np.sqrt(n * (1 / n) * (1 - 1 / n))
    assert abs(counts.mean() - 1.0) <= 3 * sd / np.sqrt(N)


def test_mutation_keeps_aggregates_exact(rng):
    inst = generate_instance("bsc", 40, "V2", 2)
    x = Solution.random(inst, rng)
    for _ in range(300):
        x = mutate(x, inst, rng, rate=0.1)
        assert (x.profit, x.mean_weight, x.var_weight) == brute_aggregates(x.bits, inst)


def test_crossover_identical_parents(rng, small_instance):
    a = Solution.from_bits([1, 0, 1, 0, 1], small_instance)
    for _ in range(50):
        assert uniform_crossover(a, a, small_instance, rng) == a


def test_crossover_bits_come_from_parents(rng):
    inst = generate_instance("uncorr", 30, "V1", 3)
    for _ in range(200):
        a, b = Solution.random(inst, rng), Solution.random(inst, rng)
        c = uniform_crossover(a, b, inst, rng)
        assert np.all((c.bits == a.bits) | (c.bits == b.bits))
        assert (c.profit, c.mean_weight, c.var_weight) == brute_aggregates(c.bits, inst)


def test_crossover_zero_vs_one_is_fair_coin():
    n = 200
    inst = generate_instance("uncorr", n, "V1", 4)
    zeros, ones = Solution.empty(n), Solution.from_bits(np.ones(n, bool), inst)
    rng = np.random.default_rng(5)
    fired = [c for c in (uniform_crossover(zeros, ones, inst, rng, prob=1.0) for _ in range(500))]
    frac = np.mean([c.bits.mean() for c in fired])
    assert abs(frac - 0.5) < 3 * 0.5 / np.sqrt(n * 500)
    copies = sum(uniform_crossover(zeros, ones, inst, rng, prob=0.8) == zeros for _ in range(5000))
    assert abs(copies / 5000 - 0.2) < 3 * np.sqrt(0.16 / 5000)


def test_crossover_length_mismatch(rng):
    inst = Instance([1] * 3, [1] * 3, [1] * 3)
    with pytest.raises(ValueError):
        uniform_crossover(Solution.empty(3), Solution.empty(4), inst, rng)


def test_variation_config():
    assert VariationConfig().rate_for(50) == 1 / 50
    assert VariationConfig(mutation_rate=0.3).rate_for(50) == 0.3
    with pytest.raises(ValueError):
        VariationConfig(crossover_prob=1.5)
