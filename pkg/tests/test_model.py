import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcckp.model import (
    BSC_OFFSET,
    Instance,
    InstanceFormatError,
    Solution,
    draw_variances,
    flip_bit,
    generate_instance,
    load_instance,
    save_instance,
)

from conftest import brute_aggregates, random_instance


def test_instance_rejects_bad_arrays():
    with pytest.raises(ValueError):
        Instance([1, 2], [1], [1, 1])
    with pytest.raises(ValueError):
        Instance([1, 2], [1, 0], [1, 1])
    with pytest.raises(ValueError):
        Instance([], [], [])


def test_instance_maxima(small_instance):
    assert (small_instance.p_max, small_instance.mu_max, small_instance.v_max) == (9, 6, 5)
    assert small_instance.n == 5


def test_generate_rejects_zero_items():
    with pytest.raises(ValueError):
        generate_instance("uncorr", 0, "V1", 1)


@pytest.mark.parametrize("cls", ["uncorr", "bsc"])
@pytest.mark.parametrize("regime", ["V1", "V2"])
def test_generate_is_deterministic(cls, regime):
    assert generate_instance(cls, 50, regime, 7) == generate_instance(cls, 50, regime, 7)
    assert generate_instance(cls, 50, regime, 7) != generate_instance(cls, 50, regime, 8)


@pytest.mark.parametrize("regime", ["V1", "V2"])
def test_bsc_profit_is_weight_plus_constant(regime):
    inst = generate_instance("bsc", 300, regime, 3)
    diff = inst.profits - inst.means
    assert np.all(diff == diff[0])
    assert diff[0] == BSC_OFFSET


def test_uncorr_ranges():
    inst = generate_instance("uncorr", 2000, "V1", 11)
    for arr in (inst.profits, inst.means):
        assert arr.min() >= 1 and arr.max() <= 1000
    # profits and weights drawn independently
    assert abs(np.corrcoef(inst.profits, inst.means)[0, 1]) < 0.1


def test_variance_regimes_respect_bounds():
    v1 = generate_instance("uncorr", 1000, "V1", 5)
    assert np.all((1 <= v1.variances) & (v1.variances <= v1.means))
    v2 = generate_instance("bsc", 1000, "V2", 5)
    sq = v2.means**2
    assert np.all((sq <= v2.variances) & (v2.variances <= 2 * sq))


def test_forced_means_v1_bounds():
    means = np.array([4, 9, 2])
    for seed in range(200):
        v = draw_variances(means, "V1", np.random.default_rng(seed))
        assert 1 <= v[0] <= 4 and 1 <= v[1] <= 9 and 1 <= v[2] <= 2


def test_flip_bit_single_item():
    inst = Instance([3, 1], [2, 1], [5, 1])
    s = flip_bit(Solution.empty(2), 0, inst)
    assert (s.profit, s.mean_weight, s.var_weight) == (3, 2, 5)
    assert s.bits.tolist() == [True, False]


def test_flip_bit_involution(small_instance):
    s = Solution.from_bits([1, 0, 1, 0, 0], small_instance)
    assert flip_bit(flip_bit(s, 3, small_instance), 3, small_instance) == s


def test_flip_bit_out_of_range(small_instance):
    with pytest.raises(IndexError):
        flip_bit(Solution.empty(5), 5, small_instance)
    with pytest.raises(IndexError):
        flip_bit(Solution.empty(5), -1, small_instance)


def test_solutions_are_immutable(small_instance):
    s = Solution.empty(5)
    with pytest.raises(ValueError):
        s.bits[0] = True


def test_incremental_matches_recompute_n12(rng):
    inst = random_instance(rng, 12, hi=1000)
    s = Solution.from_bits(rng.random(12) < 0.5, inst)
    for i in rng.integers(0, 12, size=500):
        s = flip_bit(s, int(i), inst)
        assert (s.profit, s.mean_weight, s.var_weight) == brute_aggregates(s.bits, inst)


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 16),
    seed=st.integers(0, 2**32 - 1),
    flips=st.lists(st.integers(0, 10**6), max_size=40),
)
def test_any_flip_sequence_keeps_caches_exact(n, seed, flips):
    inst = random_instance(np.random.default_rng(seed), n, hi=10**6)
    s = Solution.empty(n)
    for f in flips:
        s = flip_bit(s, f % n, inst)
    assert (s.profit, s.mean_weight, s.var_weight) == brute_aggregates(s.bits, inst)
    assert (s.profit == 0) == (not s.bits.any())


def test_aggregates_do_not_overflow_at_scale():
    n = 2000
    inst = Instance([1000] * n, [1000] * n, [2 * 10**6] * n)
    s = Solution.from_bits(np.ones(n, dtype=bool), inst)
    assert s.var_weight == 4 * 10**9 > 2**31
    s = flip_bit(s, 0, inst)
    assert s.var_weight == 4 * 10**9 - 2 * 10**6


def test_save_load_roundtrip(tmp_path):
    inst = generate_instance("bsc", 300, "V2", 9)
    path = tmp_path / "inst.txt"
    save_instance(inst, path)
    assert load_instance(path) == inst
    assert path.read_text().splitlines()[0] == "300"


def test_load_rejects_short_file(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("3\n1 1 1\n2 2 2\n")
    with pytest.raises(InstanceFormatError, match="3 items"):
        load_instance(path)


def test_load_rejects_zero_mean_naming_line(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("2\n1 1 1\n5 0 1\n")
    with pytest.raises(InstanceFormatError, match=":3:"):
        load_instance(path)


def test_load_rejects_garbage(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("1\n1 x 1\n")
    with pytest.raises(InstanceFormatError):
        load_instance(path)
