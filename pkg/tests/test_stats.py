from __future__ import annotations

import math
import random
from collections import Counter

import pytest

from auglang.errors import MetricError, UndefinedCorrelationError
from auglang.metrics import kendall_tau, perplexity


def tau_oracle(xs, ys):
    """O(n^2) pair enumeration with the same final division expression."""
    n = len(xs)
    concordant = discordant = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = (xs[i] > xs[j]) - (xs[i] < xs[j])
            dy = (ys[i] > ys[j]) - (ys[i] < ys[j])
            if dx * dy > 0:
                concordant += 1
            elif dx * dy < 0:
                discordant += 1
    n0 = n * (n - 1) // 2
    n1 = sum(t * (t - 1) // 2 for t in Counter(xs).values())
    n2 = sum(t * (t - 1) // 2 for t in Counter(ys).values())
    return (concordant - discordant) / math.sqrt((n0 - n1) * (n0 - n2))


class TestPerplexity:
    def test_zero_logprobs_give_one(self):
        assert perplexity([[0.0, 0.0], [0.0]]) == 1.0

    def test_log_half_gives_two(self):
        records = [[-math.log(2)] * 3, [-math.log(2)] * 2]
        assert perplexity(records) == pytest.approx(2.0, abs=1e-12)

    def test_mixed_records_match_summation_oracle(self):
        rng = random.Random(0)
        records = [
            [-rng.random() * 5 for _ in range(rng.randint(1, 12))] for _ in range(40)
        ]
        flat = [v for rec in records for v in rec]
        oracle = math.exp(-math.fsum(flat) / len(flat))
        assert perplexity(records) == pytest.approx(oracle, abs=1e-12)

    def test_empty_input_rejected(self):
        with pytest.raises(MetricError):
            perplexity([])
        with pytest.raises(MetricError):
            perplexity([[], []])

    def test_non_finite_rejected(self):
        with pytest.raises(MetricError):
            perplexity([[0.0, float("nan")]])
        with pytest.raises(MetricError):
            perplexity([[float("-inf")]])


class TestKendallTau:
    def test_increasing_gives_one(self):
        xs = list(range(10))
        assert kendall_tau(xs, xs) == 1.0

    def test_reversed_gives_minus_one(self):
        xs = list(range(10))
        assert kendall_tau(xs, xs[::-1]) == -1.0

    def test_exact_agreement_with_pair_enumeration(self):
        rng = random.Random(1)
        for _ in range(100):
            n = 200
            # coarse grids guarantee plenty of ties
            xs = [rng.randint(0, 20) for _ in range(n)]
            ys = [rng.randint(0, 20) for _ in range(n)]
            assert kendall_tau(xs, ys) == tau_oracle(xs, ys)

    def test_float_values_with_ties(self):
        rng = random.Random(2)
        for _ in range(20):
            xs = [round(rng.random(), 1) for _ in range(80)]
            ys = [round(rng.random(), 1) for _ in range(80)]
            assert kendall_tau(xs, ys) == tau_oracle(xs, ys)

    def test_symmetric_in_arguments(self):
        rng = random.Random(3)
        xs = [rng.randint(0, 9) for _ in range(60)]
        ys = [rng.randint(0, 9) for _ in range(60)]
        assert kendall_tau(xs, ys) == kendall_tau(ys, xs)

    def test_sign_flips_under_negation(self):
        rng = random.Random(4)
        xs = rng.sample(range(1000), 50)  # no ties
        ys = rng.sample(range(1000), 50)
        assert kendall_tau(xs, [-y for y in ys]) == -kendall_tau(xs, ys)

    def test_all_tied_rejected(self):
        with pytest.raises(UndefinedCorrelationError):
            kendall_tau([1, 1, 1], [1, 2, 3])
        with pytest.raises(UndefinedCorrelationError):
            kendall_tau([1, 2, 3], [7, 7, 7])

    def test_length_mismatch_rejected(self):
        with pytest.raises(MetricError):
            kendall_tau([1, 2], [1, 2, 3])

    def test_short_input_rejected(self):
        with pytest.raises(MetricError):
            kendall_tau([1], [2])

    def test_matches_scipy_reference(self):
        from scipy.stats import kendalltau

        rng = random.Random(5)
        xs = [rng.randint(0, 15) for _ in range(150)]
        ys = [rng.randint(0, 15) for _ in range(150)]
        assert kendall_tau(xs, ys) == pytest.approx(
            float(kendalltau(xs, ys).statistic), abs=1e-12
        )

    def test_range(self):
        rng = random.Random(6)
        for _ in range(30):
            xs = [rng.randint(0, 5) for _ in range(40)]
            ys = [rng.randint(0, 5) for _ in range(40)]
            assert -1.0 <= kendall_tau(xs, ys) <= 1.0
