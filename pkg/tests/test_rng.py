"""Generator correctness: state transitions, stream statistics, seeding."""

import numpy as np
import pytest

from benignbench.rng import Xoshiro256pp, mix_seed, splitmix64

MASK = (1 << 64) - 1


def reference_step(state):
    """Independent transcription of the xoshiro256++ recurrence, written
    from the published definition with explicit modular arithmetic."""
    s0, s1, s2, s3 = state

    def rotl(x, k):
        return ((x << k) % (1 << 64)) | (x >> (64 - k))

    out = (rotl((s0 + s3) % (1 << 64), 23) + s0) % (1 << 64)
    t = (s1 * (1 << 17)) % (1 << 64)
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = rotl(s3, 45)
    return out, [s0, s1, s2, s3]


class TestXoshiroCore:
    def test_hand_computed_step(self):
        # from state [1, 2, 3, 4]:
        #   out  = rotl(1 + 4, 23) + 1 = 5 * 2^23 + 1 = 41943041
        #   s    -> [7, 0, 262146, 6 * 2^45]
        # second step:
        #   out  = rotl(7 + 6*2^45, 23) + 7 = (7*2^23 | 96) + 7 = 58720359
        g = Xoshiro256pp(0)
        g._s = [1, 2, 3, 4]
        assert g.next_u64() == 41943041
        assert g._s == [7, 0, 262146, 6 * 2**45]
        assert g.next_u64() == 58720359

    def test_matches_reference_recurrence(self):
        g = Xoshiro256pp(12345)
        state = list(g._s)
        for _ in range(200):
            expected, state = reference_step(state)
            assert g.next_u64() == expected

    def test_outputs_are_64_bit(self):
        g = Xoshiro256pp(7)
        for _ in range(100):
            assert 0 <= g.next_u64() <= MASK

    def test_same_seed_same_stream(self):
        a = Xoshiro256pp(99)
        b = Xoshiro256pp(99)
        assert [a.next_u64() for _ in range(50)] == [b.next_u64() for _ in range(50)]

    def test_different_seeds_differ(self):
        a = Xoshiro256pp(1)
        b = Xoshiro256pp(2)
        assert [a.next_u64() for _ in range(8)] != [b.next_u64() for _ in range(8)]

    def test_frozen_stream_regression(self):
        # determinism freeze: these values pin the exact stream the noise
        # operator consumes; any platform or refactor drift must fail here
        g = Xoshiro256pp(42)
        assert [g.next_u64() for _ in range(4)] == [
            15021278609987233951,
            5881210131331364753,
            18149643915985481100,
            12933668939759105464,
        ]
        z = Xoshiro256pp(42).normals(4)
        np.testing.assert_allclose(
            z,
            [-0.268607369462095, 0.5819710518628828,
             -0.05446217010815095, -0.17177820812195743],
            rtol=0,
            atol=1e-15,
        )


class TestSplitmix:
    def test_reference_recurrence(self):
        # independent implementation of the same published algorithm
        def ref(seed, n):
            out = []
            state = seed & MASK
            for _ in range(n):
                state = (state + 0x9E3779B97F4A7C15) & MASK
                z = state
                z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
                z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
                out.append(z ^ (z >> 31))
            return out

        gen = splitmix64(31337)
        assert [next(gen) for _ in range(16)] == ref(31337, 16)


class TestUniforms:
    def test_range_and_moments(self):
        u = Xoshiro256pp(5).uniforms(200_000)
        assert u.min() >= 0.0 and u.max() < 1.0
        assert abs(u.mean() - 0.5) < 0.005
        assert abs(u.var() - 1.0 / 12.0) < 0.002


class TestNormals:
    def test_stream_statistics(self):
        # the noise operator's contract: mean within +-0.001 and variance
        # within +-2% of 0.01 over a million pre-clamp samples
        z = Xoshiro256pp(42).normals(1_000_000, mean=0.0, std=0.1)
        assert abs(z.mean()) < 1e-3
        assert abs(z.var() - 0.01) < 0.02 * 0.01

    def test_length_and_determinism(self):
        a = Xoshiro256pp(3).normals(7)
        b = Xoshiro256pp(3).normals(7)
        assert a.shape == (7,)
        np.testing.assert_array_equal(a, b)

    def test_zero_std_is_constant(self):
        z = Xoshiro256pp(1).normals(10, mean=0.25, std=0.0)
        np.testing.assert_array_equal(z, np.full(10, 0.25))

    def test_empty(self):
        assert Xoshiro256pp(1).normals(0).size == 0


class TestMixSeed:
    def test_deterministic(self):
        assert mix_seed(1, "a", 2) == mix_seed(1, "a", 2)

    def test_order_and_boundaries_matter(self):
        assert mix_seed("ab", "c") != mix_seed("a", "bc")
        assert mix_seed(1, 2) != mix_seed(2, 1)

    def test_uint64_range(self):
        for parts in ((0,), ("x", 2**63), (-1, "neg"), (12, "frame", 3)):
            value = mix_seed(*parts)
            assert 0 <= value <= MASK

    def test_rejects_unsupported_types(self):
        with pytest.raises(TypeError):
            mix_seed(1.5)
        with pytest.raises(TypeError):
            mix_seed(True)
