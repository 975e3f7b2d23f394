from __future__ import annotations

import math
import random

import pytest

from auglang.errors import MetricError
from auglang.metrics import corpus_bleu4, self_bleu4, sentence_average_bleu4


def oracle_bleu4(cands, refs, eps=1e-9):
    """Direct per-order loops, clipping recomputed per reference inline."""

    def ngrams(seq, n):
        return [tuple(seq[i : i + n]) for i in range(len(seq) - n + 1)]

    matches = [0] * 4
    possible = [0] * 4
    c_len = 0
    r_len = 0
    for cand in cands:
        c_len += len(cand)
        best = None
        for ref in refs:
            key = (abs(len(ref) - len(cand)), len(ref))
            if best is None or key < best[0]:
                best = (key, len(ref))
        r_len += best[1]
        for n in range(1, 5):
            grams = ngrams(cand, n)
            possible[n - 1] += len(grams)
            for g in set(grams):
                max_ref = max((ngrams(ref, n).count(g) for ref in refs), default=0)
                matches[n - 1] += min(grams.count(g), max_ref)
    if c_len == 0:
        return 0.0
    log_sum = 0.0
    for n in range(4):
        p = matches[n] / possible[n] if possible[n] else 0.0
        if p == 0.0:
            p = eps
        log_sum += math.log(p)
    bp = 1.0 if c_len > r_len else math.exp(1 - r_len / c_len)
    return math.exp(log_sum / 4) * bp


CANDS = [
    "the cat sat on the mat".split(),
    "a dog barked at night".split(),
    "birds fly south in winter".split(),
]
REFS = [
    "the cat sat on a mat".split(),
    "a dog barked loudly at night".split(),
    "birds fly south for the winter".split(),
]


class TestCorpusBleu:
    def test_perfect_match_is_one(self):
        sentence = "the cat sat on the mat".split()
        assert corpus_bleu4([sentence], [sentence]) == 1.0

    def test_disjoint_vocabulary_hits_smoothing_floor(self):
        score = corpus_bleu4([["aa", "bb", "cc", "dd"]], [["xx", "yy", "zz", "ww"]])
        assert score <= 1e-9 * (1 + 1e-9)  # floor up to float rounding of exp(log(eps))

    def test_three_sentences_match_frozen_oracle_value(self):
        # frozen from oracle_bleu4 at test-writing time
        assert corpus_bleu4(CANDS, REFS) == pytest.approx(0.3696088397848108, abs=1e-9)
        assert corpus_bleu4(CANDS, REFS) == pytest.approx(oracle_bleu4(CANDS, REFS), abs=1e-9)

    def test_single_candidate_matches_oracle(self):
        got = corpus_bleu4([CANDS[0]], REFS)
        assert got == pytest.approx(0.537284965911771, abs=1e-9)
        assert got == pytest.approx(oracle_bleu4([CANDS[0]], REFS), abs=1e-9)

    def test_random_corpora_match_oracle(self):
        rng = random.Random(8)
        vocab = ["w%d" % i for i in range(12)]
        for _ in range(30):
            cands = [
                [rng.choice(vocab) for _ in range(rng.randint(1, 9))]
                for _ in range(rng.randint(1, 5))
            ]
            refs = [
                [rng.choice(vocab) for _ in range(rng.randint(1, 9))]
                for _ in range(rng.randint(1, 5))
            ]
            assert corpus_bleu4(cands, refs) == pytest.approx(
                oracle_bleu4(cands, refs), abs=1e-9
            )

    def test_candidate_permutation_invariance(self):
        rng = random.Random(9)
        shuffled = list(CANDS)
        rng.shuffle(shuffled)
        assert corpus_bleu4(shuffled, REFS) == pytest.approx(
            corpus_bleu4(CANDS, REFS), abs=1e-12
        )

    def test_empty_candidates_rejected(self):
        with pytest.raises(MetricError):
            corpus_bleu4([], REFS)
        with pytest.raises(MetricError):
            corpus_bleu4(CANDS, [])

    def test_score_in_unit_interval(self):
        rng = random.Random(10)
        vocab = ["a", "b", "c"]
        for _ in range(50):
            cands = [[rng.choice(vocab) for _ in range(rng.randint(1, 6))]]
            refs = [[rng.choice(vocab) for _ in range(rng.randint(1, 6))]]
            assert 0.0 <= corpus_bleu4(cands, refs) <= 1.0


class TestSelfBleu:
    CORPUS = [
        "the quick brown fox jumps".split(),
        "the quick brown dog runs".split(),
        "a lazy dog sleeps here".split(),
        "the quick red fox jumps high".split(),
    ]

    def test_identical_sentences_give_one(self):
        corpus = [["same", "old", "song", "again"]] * 5
        assert self_bleu4(corpus) == 1.0

    def test_disjoint_vocabularies_hit_floor(self):
        corpus = [["a%d" % i, "b%d" % i, "c%d" % i, "d%d" % i] for i in range(4)]
        assert self_bleu4(corpus) <= 1e-9 * (1 + 1e-9)

    def test_matches_leave_one_out_composition(self):
        # frozen from composing the oracle at test-writing time
        assert self_bleu4(self.CORPUS) == pytest.approx(0.0018493213603925876, abs=1e-9)
        composed = sum(
            oracle_bleu4([s], self.CORPUS[:i] + self.CORPUS[i + 1 :])
            for i, s in enumerate(self.CORPUS)
        ) / len(self.CORPUS)
        assert self_bleu4(self.CORPUS) == pytest.approx(composed, abs=1e-9)

    def test_corpus_permutation_invariance(self):
        rng = random.Random(11)
        shuffled = list(self.CORPUS)
        rng.shuffle(shuffled)
        assert self_bleu4(shuffled) == pytest.approx(self_bleu4(self.CORPUS), abs=1e-12)

    def test_too_small_corpus_rejected(self):
        with pytest.raises(MetricError):
            self_bleu4([["one", "sentence"]])


def test_sentence_average_mode():
    per_sentence = [corpus_bleu4([c], REFS) for c in CANDS]
    assert sentence_average_bleu4(CANDS, REFS) == pytest.approx(
        sum(per_sentence) / len(per_sentence), abs=1e-12
    )
