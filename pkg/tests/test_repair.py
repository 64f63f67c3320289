import pytest

from qanoise.adapters import MockEngine, TransportError, WordMapSpellchecker
from qanoise.repair import (
    CONTENT_WORD,
    NAMED_ENTITY,
    RepairEdit,
    context_repair,
    normalized_distance,
    repair_challenge,
    restore_final_qmark,
    spellcheck_repair,
    write_edits,
)
from tests.oracles import lev_oracle

LAMA_CTX = "The Lama has determined to travel to India in 1959. Tenzin Gyatso was born in Taktser, a small village."


class TestDistance:
    @pytest.mark.parametrize("a,b", [("Lsma", "Lama"), ("Wjat", "Lama"), ("determied", "determined"),
                                     ("", "x"), ("Pathers", "Panthers")])
    def test_matches_oracle(self, a, b):
        want = lev_oracle(a.casefold(), b.casefold()) / max(len(a), len(b))
        assert normalized_distance(a, b) == pytest.approx(want)

    def test_reference_normalization(self):
        assert normalized_distance("ab", "abcd", "reference") == 1.0
        assert normalized_distance("ab", "abcd", "max") == 0.5

    def test_empty_pair(self):
        assert normalized_distance("", "") == 0.0


class TestContextRepair:
    def test_identity_when_all_in_context(self):
        q = "What has a Lama determined to do?"
        assert context_repair(q, LAMA_CTX) == (q, [])

    def test_lsma_to_lama(self):
        text, edits = context_repair("Wjat has a Lsma determined to do?", LAMA_CTX, qid="q1")
        assert text == "Wjat has a Lama determined to do?"
        assert edits == [RepairEdit("q1", 3, "Lsma", "Lama", 0.25, CONTENT_WORD)]

    def test_threshold_exclusion(self):
        # "Tibet" vs closest context word: distance well above 0.5
        text, edits = context_repair("Where is Tibet?", LAMA_CTX)
        assert text == "Where is Tibet?" and edits == []

    def test_distance_exactly_at_threshold_is_kept(self):
        _, edits = context_repair("Where is Indxx?", "He went to India.", threshold=0.4)
        assert [e.replacement for e in edits] == ["India"] and edits[0].distance == 0.4
        _, edits = context_repair("Where is Indxx?", "He went to India.", threshold=0.39)
        assert edits == []

    def test_case_pattern_kept(self):
        text, _ = context_repair("WHERE IS INDIS?", "He went to India.")
        assert text == "WHERE IS INDIA?"

    def test_tie_prefers_longer_then_earlier(self):
        # "cat" is 1 edit from both "cart" (0.25) and "cab" (0.333); take the lower distance
        _, e = context_repair("A cat here", "Some cab and a cart.")
        assert e[0].replacement == "cart"
        # "bat" vs "bag" and "bar": equal distance and length, first seen wins
        _, e = context_repair("A bat here", "A bar and a bag.")
        assert e[0].replacement == "bar"

    def test_single_pass(self):
        text, edits = context_repair("Lsma Lsma", "Lama")
        assert text == "Lama Lama" and len(edits) == 2

    def test_named_entity_mode(self):
        ctx = "The Panthers defense sent four players to the Pro Bowl."
        text, edits = context_repair("How many Pamthers defenze players?", ctx, mode=NAMED_ENTITY)
        assert text == "How many Panthers defenze players?"
        assert all(e.mode == NAMED_ENTITY for e in edits)

    def test_errors(self):
        with pytest.raises(ValueError):
            context_repair("q", "   ")
        with pytest.raises(ValueError):
            context_repair("q", "c", mode="verbs")
        with pytest.raises(ValueError):
            context_repair("q", "c", normalize="min")


class TestQmark:
    @pytest.mark.parametrize("q,want", [
        ("how many santas defense players selected for the pro bowl",
         "how many santas defense players selected for the pro bowl?"),
        ("Why?", "Why?"),
        ("Why?  ", "Why?  "),
        ("what now ", "what now?"),
    ])
    def test_cases(self, q, want):
        assert restore_final_qmark(q) == want
        assert restore_final_qmark(restore_final_qmark(q)) == restore_final_qmark(q)

    def test_empty_is_flagged(self, caplog):
        assert restore_final_qmark("") == "?"
        assert "empty question" in caplog.text


class TestSpellcheck:
    def test_identity(self):
        assert spellcheck_repair("Wjat is it", MockEngine()) == "Wjat is it"

    def test_scripted(self):
        eng = WordMapSpellchecker({"determied": "determined"})
        assert spellcheck_repair("has a Lama determied", eng) == "has a Lama determined"

    def test_failure_keeps_original(self, caplog):
        class Down(MockEngine):
            def _run(self, request):
                raise TransportError("timed out")
        assert spellcheck_repair("Wjat is it", Down(), qid="q9", retries=0) == "Wjat is it"
        assert "q9" in caplog.text and "keeping original" in caplog.text


class TestBatch:
    def test_challenge_and_jobs(self, toy):
        noisy = {"q1": "What has a Lsma determined to do?", "q4": "How many Panthers defense players were selected for the Pro Bowk?"}
        out1, e1 = repair_challenge(toy, noisy, jobs=1)
        out4, e4 = repair_challenge(toy, noisy, jobs=4)
        assert out1 == out4 and e1 == e4
        assert out1["q1"] == "What has a Lama determined to do?"
        assert out1["q4"].endswith("Pro Bowl?")
        assert [e.qid for e in e1] == ["q1", "q4"]

    def test_clean_data_has_no_edits(self, toy):
        _, edits = repair_challenge(toy, {q.qid: q.question for q in toy.questions})
        assert edits == []

    def test_edit_log(self, tmp_path):
        p = tmp_path / "e.tsv"
        write_edits([RepairEdit("q1", 6, "Lsma", "Lama", 0.25, CONTENT_WORD)], str(p), ["seed: 1"])
        assert p.read_text().splitlines() == [
            "# seed: 1", "qid\tindex\toriginal\treplacement\tdistance\tmode",
            "q1\t6\tLsma\tLama\t0.2500\tcontent_word"]
