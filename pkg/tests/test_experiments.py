"""Monte-Carlo harness: sampling, averages, sweeps, robustness bound."""

import numpy as np
import pytest

from rmadvice import core, experiments
from rmadvice.experiments import (
    NoiseConfig,
    average_cr,
    check_robustness_bound,
    robustness_sweep,
    sample_instance,
    sweep_to_csv,
)
from rmadvice.policies import bq_levels


def setup_case():
    lad = core.make_fare_ladder([1.0, 2.0, 4.0], 20)
    adv = core.make_advice(lad, [2, 8, 10])
    return lad, adv


class TestNoiseConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            NoiseConfig(v=1.0, trials=10, seed=0)
        with pytest.raises(ValueError):
            NoiseConfig(v=-0.1, trials=10, seed=0)
        with pytest.raises(ValueError):
            NoiseConfig(v=0.5, trials=0, seed=0)


class TestSampling:
    def test_deterministic(self):
        lad, adv = setup_case()
        noise = NoiseConfig(v=0.5, trials=10, seed=42)
        a = sample_instance(lad, adv, noise, 3)
        b = sample_instance(lad, adv, noise, 3)
        assert a == b
        c = sample_instance(lad, adv, noise, 4)
        assert a != c

    def test_zero_noise_recovers_advice_counts(self):
        lad, adv = setup_case()
        noise = NoiseConfig(v=0.0, trials=1, seed=1)
        inst = sample_instance(lad, adv, noise, 0)
        counts = core.fare_counts(inst, lad.m)
        assert counts[0] == lad.capacity  # class 1 always arrives in full
        assert list(counts[1:]) == list(adv.counts[1:])

    def test_zero_advised_count_stays_zero(self):
        lad = core.make_fare_ladder([1.0, 2.0, 4.0], 10)
        adv = core.make_advice(lad, [2, 0, 8])
        noise = NoiseConfig(v=0.9, trials=1, seed=5)
        for t in range(20):
            counts = core.fare_counts(sample_instance(lad, adv, noise, t), lad.m)
            assert counts[1] == 0

    def test_increasing_order(self):
        lad, adv = setup_case()
        noise = NoiseConfig(v=0.5, trials=1, seed=9)
        inst = sample_instance(lad, adv, noise, 7)
        assert list(inst.steps) == sorted(inst.steps)

    def test_counts_never_negative(self):
        lad, adv = setup_case()
        noise = NoiseConfig(v=0.9, trials=1, seed=11)
        for t in range(50):
            counts = core.fare_counts(sample_instance(lad, adv, noise, t), lad.m)
            assert np.all(counts >= 0)


class TestAverageCr:
    def test_reproducible(self):
        lad, adv = setup_case()
        noise = NoiseConfig(v=0.5, trials=30, seed=42)
        a = average_cr(lad, adv, "bq", 0.3, noise)
        b = average_cr(lad, adv, "bq", 0.3, noise)
        assert a == b

    def test_ratios_within_unit_interval(self):
        lad, adv = setup_case()
        noise = NoiseConfig(v=0.7, trials=50, seed=1)
        for policy in experiments.POLICIES:
            mean, std = average_cr(lad, adv, policy, 0.25, noise)
            assert 0.0 <= mean <= 1.0 + 1e-9
            assert std >= 0.0

    def test_bq_beats_its_bound_on_average(self):
        lad, adv = setup_case()
        noise = NoiseConfig(v=0.5, trials=100, seed=3)
        mean, _ = average_cr(lad, adv, "bq", 0.3, noise)
        assert mean >= core.bq_bound(lad) - 1e-9

    def test_unknown_policy_rejected(self):
        lad, adv = setup_case()
        with pytest.raises(ValueError):
            average_cr(lad, adv, "nope", 0.3, NoiseConfig(v=0.1, trials=1, seed=0))

    def test_relaxed_policy_supported(self):
        lad, adv = setup_case()
        noise = NoiseConfig(v=0.4, trials=30, seed=8)
        mean, _ = average_cr(lad, adv, "lp_relaxed", 0.3, noise, relaxed_epsilon=0.2)
        assert mean >= 0.3 / 1.2 - 1e-9


class TestRobustnessBound:
    def test_holds_on_sampled_instances(self):
        lad, adv = setup_case()
        levels = bq_levels(lad)
        noise = NoiseConfig(v=0.8, trials=1, seed=13)
        for t in range(200):
            inst = sample_instance(lad, adv, noise, t)
            check_robustness_bound(lad, adv, levels, inst)  # must not raise

    def test_holds_on_arbitrary_instances(self):
        lad, adv = setup_case()
        levels = bq_levels(lad)
        rng = np.random.default_rng(31)
        for _ in range(500):
            steps = tuple(rng.integers(1, 4, size=rng.integers(1, 60)))
            check_robustness_bound(lad, adv, levels, core.Instance(steps=steps))


class TestSweep:
    def test_rows_and_csv(self):
        lad, adv = setup_case()
        rows = robustness_sweep(
            lad, [adv], gammas=[0.2, 0.4], v_list=[0.0, 0.5], trials=10, seed=7
        )
        assert len(rows) == 2 * 2 * len(experiments.POLICIES)
        text = sweep_to_csv(rows)
        lines = text.strip().split("\n")
        assert lines[0] == "v,gamma,policy,mean_cr,std_cr,trials"
        assert len(lines) == 1 + len(rows)

    def test_sweep_deterministic(self):
        lad, adv = setup_case()
        kwargs = dict(gammas=[0.3], v_list=[0.5], trials=15, seed=99)
        a = robustness_sweep(lad, [adv], **kwargs)
        b = robustness_sweep(lad, [adv], **kwargs)
        assert sweep_to_csv(a) == sweep_to_csv(b)

    def test_instances_shared_across_policies(self):
        # zero noise: every policy sees the exact advice realization, so
        # lp_optimal attains its full consistency.
        lad, adv = setup_case()
        rows = robustness_sweep(
            lad, [adv], gammas=[0.0], v_list=[0.0], trials=3, seed=0
        )
        by_policy = {r.policy: r for r in rows}
        assert by_policy["lp_optimal"].mean_cr == pytest.approx(1.0, abs=1e-6)
        assert by_policy["lp_optimal"].std_cr == pytest.approx(0.0, abs=1e-9)
