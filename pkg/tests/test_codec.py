import math

import numpy as np
import pytest

from wynercache.codec import (
    Codebook,
    LinkBudget,
    TooManyWords,
    capacity,
    draw_codebook,
    ideal_link,
    nn_decode,
)


class TestDrawCodebook:
    def test_shell_power_exact(self):
        cb = draw_codebook(96, 8, power=9.95, seed=3)
        assert cb.num_words == 256
        powers = np.mean(cb.words**2, axis=1)
        assert np.max(np.abs(powers - 9.95)) <= 1e-12 * 9.95

    def test_deterministic(self):
        a = draw_codebook(96, 8, 9.95, seed=3)
        b = draw_codebook(96, 8, 9.95, seed=3)
        assert np.array_equal(a.words, b.words)

    def test_single_sample_shell(self):
        cb = draw_codebook(1, 1, power=4.0, seed=11)
        assert sorted(np.round(cb.words.ravel(), 12).tolist()) in ([-2.0, 2.0], [-2.0, -2.0], [2.0, 2.0])
        assert all(abs(abs(w[0]) - 2.0) <= 1e-12 for w in cb.words)

    def test_too_many_words(self):
        with pytest.raises(TooManyWords):
            draw_codebook(8, 21, 1.0, seed=0)


class TestNnDecode:
    def test_exact_codeword(self):
        cb = draw_codebook(32, 4, 5.0, seed=2)
        for i in (0, 7, 15):
            assert nn_decode(0.7 * cb.words[i], cb, 0.7) == i

    def test_tiny_perturbation(self):
        cb = draw_codebook(32, 4, 5.0, seed=2)
        diffs = cb.words[None, :, :] - cb.words[:, None, :]
        dmin = np.min(np.linalg.norm(diffs, axis=2)[np.triu_indices(16, k=1)])
        noise = np.full(32, dmin / (4 * math.sqrt(32)))
        assert nn_decode(cb.words[9] + noise, cb, 1.0) == 9

    def test_tie_breaks_to_lowest_index(self):
        words = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
        cb = Codebook(words=words, power=0.5)
        assert nn_decode(np.array([1.0, 0.0]), cb, 1.0) == 0

    def test_gain_scale_consistency(self):
        cb = draw_codebook(24, 5, 3.0, seed=4)
        rng = np.random.default_rng(9)
        for _ in range(10):
            y = rng.standard_normal(24) * 2.0
            g = float(rng.uniform(0.1, 3.0))
            assert nn_decode(y, cb, g) == nn_decode(y / g, cb, 1.0)

    def test_error_rate_above_capacity(self):
        # at 1.5x capacity the random-coding error is bounded away from zero
        n, bits = 96, 8
        rate = bits / n
        power = 2 ** (2 * rate / 1.5) - 1
        assert rate >= 1.5 * capacity(1.0, power)
        errors = 0
        trials = 200
        for t in range(trials):
            cb = draw_codebook(n, bits, power, seed=1000 + t)
            rng = np.random.default_rng(5000 + t)
            msg = int(rng.integers(0, 2**bits))
            y = cb.words[msg] + rng.standard_normal(n)
            errors += nn_decode(y, cb, 1.0) != msg
        assert errors / trials >= 0.3

    def test_error_count_monotone_in_power(self):
        n, bits = 96, 8

        def count_errors(power):
            errs = 0
            for t in range(200):
                cb = draw_codebook(n, bits, power, seed=2000 + t)
                rng = np.random.default_rng(7000 + t)
                msg = int(rng.integers(0, 2**bits))
                y = cb.words[msg] + rng.standard_normal(n)
                errs += nn_decode(y, cb, 1.0) != msg
            return errs

        low, high = count_errors(0.12), count_errors(0.48)
        assert high <= low + 2


class TestCapacity:
    def test_examples(self):
        assert capacity(1.0, 3.0) == pytest.approx(1.0)
        assert capacity(2.5, 0.0) == 0.0
        assert capacity(0.5, 12.0) == pytest.approx(1.0)


class TestIdealLink:
    def test_below_capacity_succeeds(self):
        cap = capacity(1.0, 100.0)
        assert ideal_link(LinkBudget(gain=1.0, rate=0.9 * cap, power=100.0))

    def test_at_capacity_fails(self):
        cap = capacity(1.0, 100.0)
        assert not ideal_link(LinkBudget(gain=1.0, rate=cap, power=100.0))

    def test_zero_rate_succeeds(self):
        assert ideal_link(LinkBudget(gain=0.3, rate=0.0, power=1.0))
