import math
import random
import string

import pytest

from qanoise.metrics import (
    NoiseScore,
    cer,
    corpus_bleu,
    corpus_bleu_details,
    corpus_cer,
    corpus_wer,
    exact_match,
    noise_score,
    qa_eval,
    qa_scores,
    token_f1,
    tokenize_13a,
    wer,
)
from qanoise.noisegen import strip_punctuation
from tests.conftest import fixture_path
from tests.oracles import cer_oracle, lev_oracle, wer_oracle

# (prediction, golds, EM, F1) with F1 worked out by hand from token overlap.
QA_CASES = [
    ("six", ["six"], 1, 1.0),
    ("the six", ["six"], 1, 1.0),
    ("six touchdowns", ["six"], 0, 2 * (1 / 2 * 1) / (1 / 2 + 1)),
    ("Six.", ["six"], 1, 1.0),
    ("  six  ", ["six"], 1, 1.0),
    ("SIX", ["six"], 1, 1.0),
    ("an apple", ["apple"], 1, 1.0),
    ("a", ["the"], 1, 1.0),
    ("Denver Broncos", ["Broncos", "Denver Broncos"], 1, 1.0),
    ("the Broncos", ["Denver Broncos", "Carolina"], 0, 2 * (1 * 1 / 2) / (1 + 1 / 2)),
    ("Carolina Panthers", ["Panthers", "the Carolina Panthers team"], 0, max(2 / 3, 2 * 1 * (2 / 3) / (1 + 2 / 3))),
    ("in 1959", ["1959"], 0, 2 / 3),
    ("1959", ["in 1959"], 0, 2 / 3),
    ("travel to India", ["to travel to India"], 0, 2 * 1 * (3 / 4) / (1 + 3 / 4)),
    ("to to to", ["to"], 0, 2 * (1 / 3) * 1 / (1 / 3 + 1)),
    ("India", ["Tibet"], 0, 0.0),
    ("Tenzin, Gyatso!", ["tenzin gyatso"], 1, 1.0),
    ("Tenzin-Gyatso", ["tenzin gyatso"], 0, 0.0),
    ("four players", ["four", "four players", "4"], 1, 1.0),
    ("the the six the", ["six"], 1, 1.0),
]


class TestQA:
    @pytest.mark.parametrize("pred,golds,em,f1", QA_CASES)
    def test_hand_cases(self, pred, golds, em, f1):
        score = qa_eval({"q": pred}, {"q": golds})
        assert score.em == 100.0 * em
        assert score.f1 == pytest.approx(100.0 * f1, abs=1e-9)

    def test_six_touchdowns_rounds_to_6667(self):
        assert round(qa_eval({"q": "six touchdowns"}, {"q": ["six"]}).f1, 2) == 66.67

    def test_aggregate_is_mean(self):
        gold = {"a": ["six"], "b": ["four"], "c": ["Denver"]}
        s = qa_eval({"a": "six", "b": "five", "c": "Denver Broncos"}, gold)
        assert s.n == 3
        assert s.em == pytest.approx(100 / 3)
        assert s.f1 == pytest.approx(100 * (1 + 0 + 2 / 3) / 3)

    def test_missing_scores_zero_and_is_reported(self, caplog):
        s = qa_eval({"a": "six"}, {"a": ["six"], "b": ["four"]})
        assert (s.em, s.f1, s.missing) == (50.0, 50.0, 1)
        assert "no prediction" in caplog.text

    def test_empty_predictions(self):
        s = qa_eval({}, {"a": ["six"]})
        assert (s.em, s.f1, s.missing) == (0.0, 0.0, 1)

    def test_empty_gold_rejected(self):
        with pytest.raises(ValueError):
            qa_eval({"a": "x"}, {})

    def test_dataset_gold(self, toy):
        preds = {q.qid: q.answers[0].text for q in toy.questions}
        s = qa_eval(preds, toy)
        assert (s.em, s.f1, s.n) == (100.0, 100.0, 6)

    def test_per_question_rows(self):
        rows = qa_scores({"a": "six"}, {"a": ["six"], "b": ["x"]})
        assert [(r.qid, r.em, r.answered) for r in rows] == [("a", 1.0, True), ("b", 0.0, False)]

    def test_both_empty_after_normalization(self):
        assert exact_match("the", "a") == 1.0
        assert token_f1("the", "a") == 1.0


class TestErrorRates:
    def test_examples(self):
        assert wer("a x c", "a b c") == pytest.approx(100 / 3)
        assert cer("Wjat", "What") == 25.0
        assert cer("same", "same") == wer("same", "same") == 0.0

    def test_casefold(self):
        assert cer("WHAT", "what") == 0.0
        assert cer("WHAT", "what", casefold=False) == 100.0

    def test_wer_punctuation_modes(self):
        assert wer("what is it", "What is it?") == 0.0
        assert wer("what is it", "What is it ?", strip_punct=False) == 25.0

    def test_cer_keeps_punctuation_by_default(self):
        assert cer("why", "why?") == 25.0
        assert cer("why", "why?", strip_punct=True) == 0.0

    def test_empty_reference_rejected(self):
        with pytest.raises(ValueError):
            cer("a", "")
        with pytest.raises(ValueError):
            wer("a", "?")

    def test_corpus_is_total_over_total(self):
        assert corpus_cer(["ab", "abcd"], ["ax", "abcd"]) == pytest.approx(100 / 6)
        assert corpus_wer(["a b", "c"], ["a x", "c d e"]) == pytest.approx(100 * 3 / 5)
        with pytest.raises(ValueError):
            corpus_cer(["a"], [])

    def test_random_pairs_match_oracle(self, backend):
        rng = random.Random(11)
        alphabet = "abcAB ,."
        for _ in range(300):
            h = "".join(rng.choices(alphabet, k=rng.randint(0, 12)))
            r = "".join(rng.choices(alphabet, k=rng.randint(1, 12)))
            if r.strip(" ,."):
                assert cer(h, r) == cer_oracle(h, r)
                if strip_punctuation(r).split():
                    assert wer(h, r) == wer_oracle(h, r, strip_punctuation)


def _load_bleu_fixture():
    hyps, refs, frozen = [], [], None
    with open(fixture_path("bleu50.tsv"), encoding="utf-8") as f:
        for line in f:
            line = line.rstrip("\n")
            if line.startswith("# score\t"):
                frozen = float(line.split("\t")[1])
            elif not line.startswith("#"):
                h, r = line.split("\t")
                hyps.append(h)
                refs.append(r)
    return hyps, refs, frozen


class TestBleu:
    def test_identity(self):
        assert corpus_bleu(["What has a Lama determined to do?"], ["What has a Lama determined to do?"]) == 100.0

    def test_case_insensitive(self):
        assert corpus_bleu(["WHAT HAS A LAMA DONE TODAY"], ["what has a lama done today"]) == 100.0

    def test_frozen_fixture(self):
        hyps, refs, frozen = _load_bleu_fixture()
        assert len(hyps) == 50
        assert corpus_bleu(hyps, refs) == pytest.approx(frozen, abs=0.1)

    def test_live_reference_implementation(self):
        sacrebleu = pytest.importorskip("sacrebleu")
        hyps, refs, _ = _load_bleu_fixture()
        ours = corpus_bleu(hyps, refs)
        assert ours == pytest.approx(sacrebleu.corpus_bleu(hyps, [refs], lowercase=True).score, abs=1e-6)
        for h, r in [("the cat sat", "the cat sat down"), ("cat the mat sat", "the cat sat on mat")]:
            assert corpus_bleu([h], [r]) == pytest.approx(
                sacrebleu.corpus_bleu([h], [[r]], lowercase=True).score, abs=1e-6)

    def test_three_word_hypothesis_has_no_4grams(self):
        # no 4-gram can be formed, so the 4-gram precision is 0 and the score collapses
        d = corpus_bleu_details(["the cat sat"], ["the cat sat down"])
        assert d.total[3] == 0
        assert d.score == 0.0

    def test_exp_smoothing_by_hand(self):
        # 4 tokens, every unigram matches, no higher-order n-gram matches
        d = corpus_bleu_details(["cat the mat sat"], ["the cat sat on mat"])
        assert d.correct == (4, 0, 0, 0) and d.total == (4, 3, 2, 1)
        p = [100.0, 100 / (2 * 3), 100 / (4 * 2), 100 / (8 * 1)]
        bp = math.exp(1 - 5 / 4)
        expected = bp * math.exp(sum(math.log(x) for x in p) / 4)
        assert d.score == pytest.approx(expected, rel=1e-12)
        assert 0 < d.score < 100

    def test_brevity_penalty(self):
        d = corpus_bleu_details(["a b c d e"], ["a b c d e f g h i j"])
        assert d.bp == pytest.approx(math.exp(1 - 10 / 5))

    def test_no_overlap_is_zero(self):
        assert corpus_bleu(["x y z w"], ["a b c d"]) == 0.0

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            corpus_bleu(["a"], ["a", "b"])
        with pytest.raises(ValueError):
            corpus_bleu([], [])

    @pytest.mark.parametrize("line,tokens", [
        ("Newton's e-mail, sent.", ["Newton's", "e-mail", ",", "sent", "."]),
        ("sold 1,000 copies in 1950-1960", ["sold", "1,000", "copies", "in", "1950", "-", "1960"]),
        ("what?!", ["what", "?", "!"]),
        ("a &amp; b", ["a", "&", "b"]),
        ("(ok) $5", ["(", "ok", ")", "$", "5"]),
    ])
    def test_13a_tokens(self, line, tokens):
        assert tokenize_13a(line) == tokens


class TestNoiseScore:
    def test_identity(self):
        s = noise_score(["What is it?"], ["What is it?"])
        assert s == NoiseScore(0.0, 0.0, 100.0)

    def test_fields_nonnegative(self):
        s = noise_score(["Wjat is ut"], ["What is it?"])
        assert s.cer > 0 and s.wer > 0 and 0 <= s.bleu <= 100


def test_alphabet_oracle_sanity():
    assert lev_oracle("kitten", "sitting") == 3
    assert lev_oracle(string.ascii_lowercase, "") == 26
