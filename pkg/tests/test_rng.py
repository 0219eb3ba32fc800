"""Portable counter RNG: frozen reference values and statistics."""

import math

import numpy as np
import pytest

from rmadvice.rng import CounterRng, derive_key, splitmix64


class TestReferenceValues:
    def test_seed_42_first_words(self):
        # [FROZEN] first four raw outputs for seed 42, stream 0; any change
        # silently breaks reproducibility of every recorded experiment.
        r = CounterRng(42)
        assert [r.next_u64() for _ in range(4)] == [
            14585004453952745724,
            963425209539481646,
            5031754615345081387,
            6003384052849686581,
        ]

    def test_seed_42_first_uniforms(self):
        r = CounterRng(42)
        expect = [
            0.7906546757343164,
            0.052227385260500525,
            0.2727719642685551,
            0.32544410161822324,
        ]
        assert [r.uniform() for _ in range(4)] == pytest.approx(expect, abs=0.0)

    def test_seed_42_first_normals(self):
        r = CounterRng(42)
        expect = [
            0.6488364481780694,
            0.22090543226852,
            -0.7357943603690961,
            1.434170462807773,
        ]
        assert [r.normal() for _ in range(4)] == pytest.approx(expect, abs=1e-15)


class TestStructure:
    def test_counter_is_stateless(self):
        # the i-th draw depends only on (seed, stream, i).
        a = CounterRng(7, stream=3)
        first_three = [a.next_u64() for _ in range(3)]
        b = CounterRng(7, stream=3)
        assert [b.next_u64() for _ in range(3)] == first_three

    def test_streams_differ(self):
        assert CounterRng(7, 0).next_u64() != CounterRng(7, 1).next_u64()
        assert derive_key(7, 0) != derive_key(7, 1)

    def test_splitmix_mask(self):
        assert 0 <= splitmix64(2**64 + 5) < 2**64

    def test_uniform_range(self):
        r = CounterRng(123)
        for _ in range(1000):
            u = r.uniform()
            assert 0.0 < u <= 1.0


class TestStatistics:
    def test_uniform_moments(self):
        r = CounterRng(2024)
        xs = np.array([r.uniform() for _ in range(20000)])
        assert abs(xs.mean() - 0.5) < 0.01
        assert abs(xs.var() - 1.0 / 12.0) < 0.005

    def test_normal_moments(self):
        r = CounterRng(2025)
        xs = np.array([r.normal() for _ in range(20000)])
        assert abs(xs.mean()) < 0.03
        assert abs(xs.std() - 1.0) < 0.03

    def test_normal_affine(self):
        a = CounterRng(9)
        b = CounterRng(9)
        for _ in range(10):
            z = a.normal()
            assert b.normal(5.0, 2.0) == pytest.approx(5.0 + 2.0 * z, rel=1e-12)
