import random
import re

import pytest

from qanoise.noisegen import (
    PLACEHOLDER,
    HeuristicTagger,
    MisspellingLexicon,
    NoiseContext,
    NoisePolicy,
    PolicyError,
    SidecarTagger,
    TaggerProvider,
    apply_policies,
    apply_policy,
    check_policy,
    derive_seed,
    drop_words,
    inject_misspellings,
    int_to_words,
    key_swap_noise,
    load_lexicon,
    load_policies,
    ne_placeholder,
    number_to_words,
    save_lexicon,
    spell_out_numerals,
    strip_final_qmark,
    strip_punctuation,
    targeted_perturb,
    year_to_words,
)
from qanoise.noisegen.tagger import CONTENT, FUNCTION
from qanoise.textcore import QWERTY, WORD, tokenize

LAMA = "What has a Lama determined to do?"


def word_diffs(clean, noisy):
    """(clean word, noisy word) for every word token that changed; tokens line up one to one."""
    a = [t.surface for t in tokenize(clean)]
    b = [t.surface for t in tokenize(noisy)]
    assert len(a) == len(b)
    return [(x, y) for x, y in zip(a, b) if x != y]


class TestKeySwap:
    def test_p_zero_identity(self):
        assert key_swap_noise(LAMA, 0.0, seed=3) == LAMA

    def test_every_substitution_is_row_neighbor(self):
        for seed in range(200):
            out = key_swap_noise(LAMA, 0.5, seed=seed)
            for x, y in word_diffs(LAMA, out):
                diffs = [(c, d) for c, d in zip(x, y) if c != d]
                assert len(x) == len(y) and len(diffs) == 1
                c, d = diffs[0]
                assert d.lower() in QWERTY.row_neighbors_of(c)
                assert c.isupper() == d.isupper()

    def test_edge_key(self):
        # one word, so exactly one of the two q's moves to its only neighbour
        assert key_swap_noise("qq", 1.0, seed=42) in {"wq", "qw"}
        assert key_swap_noise("Q", 1.0, seed=1) == "W"

    def test_deterministic(self):
        assert key_swap_noise(LAMA, 0.25, seed=7) == key_swap_noise(LAMA, 0.25, seed=7)

    def test_non_words_untouched(self):
        text = "In 1959, 42 -- ?!"
        out = key_swap_noise(text, 1.0, seed=0)
        assert out[:2] != "In" and out[2:] == text[2:]

    def test_min_word_len(self):
        assert key_swap_noise("a b c", 1.0, seed=0, min_word_len=2) == "a b c"

    def test_bad_probability(self):
        with pytest.raises(ValueError):
            key_swap_noise("x", 1.5)

    def test_rate(self):
        rng = random.Random(0)
        words = ["".join(rng.choices("abcdefghijklmnopqrstuvwxyz", k=rng.randint(2, 8))) for _ in range(5000)]
        text = " ".join(words)
        out = key_swap_noise(text, 0.25, seed=5).split()
        rate = sum(a != b for a, b in zip(words, out)) / len(words)
        assert abs(rate - 0.25) < 3 * (0.25 * 0.75 / len(words)) ** 0.5


class TestMisspell:
    def test_forced(self):
        lex = MisspellingLexicon({"and": ["adn"]})
        assert inject_misspellings("and and", lex, 1.0) == "adn adn"
        assert inject_misspellings("and and", lex, 0.0) == "and and"

    def test_case_pattern(self):
        lex = MisspellingLexicon({"type": ["tpye"]})
        assert inject_misspellings("What type of Lord", lex) == "What tpye of Lord"
        assert inject_misspellings("Type TYPE", lex) == "Tpye TPYE"

    def test_outputs_come_from_lexicon(self):
        lex = MisspellingLexicon({"receive": ["recieve", "recive"], "the": ["teh"]})
        for seed in range(30):
            out = inject_misspellings("The receive the", lex, seed=seed)
            for x, y in word_diffs("The receive the", out):
                assert y.lower() in lex.get(x)

    def test_lexicon_invariants(self):
        with pytest.raises(ValueError):
            MisspellingLexicon({"and": []})
        with pytest.raises(ValueError):
            MisspellingLexicon({"and": ["AND"]})
        lex = MisspellingLexicon({"And": ["adn"], "and": ["nad", "adn"]})
        assert lex.get("AND") == ("adn", "nad")

    def test_file_round_trip(self, tmp_path):
        p = tmp_path / "lex.tsv"
        p.write_text("and\tadn\nand\tnad\nsame\tsame\n# c\n")
        lex = load_lexicon(str(p))
        assert lex.get("and") == ("adn", "nad") and "same" not in lex
        q = tmp_path / "out.tsv"
        save_lexicon(lex, str(q))
        assert load_lexicon(str(q)) == lex


class TestStrip:
    @pytest.mark.parametrize("text,out", [
        ("How many?", "How many"), ("it's six.", "it's six"), ("a , b", "a b"), ("", ""),
    ])
    def test_strip_punctuation(self, text, out):
        assert strip_punctuation(text) == out

    def test_strip_final_qmark(self):
        assert strip_final_qmark("Why?") == "Why"
        assert strip_final_qmark("Why? No") == "Why? No"
        assert strip_final_qmark(strip_final_qmark("Why??")) == strip_final_qmark("Why??")


class TestTargeted:
    def test_no_function_words(self):
        assert targeted_perturb("six", "function", seed=1) == "six"

    def test_content_only_lama(self):
        for seed in range(20):
            out = targeted_perturb("the Lama slept", "content", seed=seed)
            changed = [x for x, _ in word_diffs("the Lama slept", out)]
            assert "the" not in changed
            assert set(changed) <= {"Lama", "slept"}

    def test_content_words_in_sentence(self):
        out = targeted_perturb("the Lama slept", "content", seed=3)
        assert out.split()[0] == "the"

    def test_common_misspelled(self):
        lex = MisspellingLexicon({"determined": ["determied"]})
        assert targeted_perturb("determined to do", "common_misspelled", "misspell", lexicon=lex) == "determied to do"

    def test_unknown_class(self):
        with pytest.raises(ValueError):
            targeted_perturb("x", "adverb")

    def test_sidecar_tagger(self):
        tagger = SidecarTagger({0: "DT", 1: "NN"})
        out = targeted_perturb("the cat", "function", tagger=tagger, seed=0)
        assert out.endswith(" cat") and not out.startswith("the")


class TestDrop:
    def test_examples(self):
        assert drop_words("the Pro Bowl", "function") == "Pro Bowl"
        assert drop_words("", "function") == ""
        assert drop_words("and so it", "content") == "and so it"

    def test_question_words_are_kept(self):
        assert drop_words("What is the score?", "function").startswith("What")


class TestEntities:
    def test_single_entity(self):
        assert ne_placeholder("Who is the chair of the IPCC?") == (f"Who is the chair of the {PLACEHOLDER}?", False)

    def test_none_flagged(self):
        assert ne_placeholder("what is it?") == ("what is it?", True)

    def test_two_entities_reproducible(self):
        text = "Did Tenzin Gyatso visit Denver?"
        outs = {ne_placeholder(text, seed=s).text for s in range(10)}
        assert outs == {f"Did {PLACEHOLDER} visit Denver?", f"Did Tenzin Gyatso visit {PLACEHOLDER}?"}
        assert ne_placeholder(text, seed=4) == ne_placeholder(text, seed=4)

    def test_sidecar_types(self):
        tokens_text = "Did Tenzin visit Denver?"
        tagger = SidecarTagger({1: "NNP,B-PERSON", 3: "NNP,GPE"})
        assert tagger.entity_spans(tokenize(tokens_text)) == [(1, 2, "PER"), (3, 4, "LOC")]
        out = ne_placeholder(tokens_text, tagger, types=frozenset({"LOC"}))
        assert out.text == f"Did Tenzin visit {PLACEHOLDER}?"

    def test_heuristic_entities(self):
        tagger = HeuristicTagger()
        toks = tokenize("What did the NFL and Peyton Manning do? Denver won.")
        spans = [" ".join(toks[i].surface for i in range(a, b)) for a, b, _ in tagger.entity_spans(toks)]
        assert spans == ["NFL", "Peyton Manning"]


def _num2words_norm(s):
    s = s.replace(",", "").replace(" and ", " ").replace("oh-", "oh ")
    return re.sub(r"\s+", " ", s).strip()


class TestNumerals:
    @pytest.mark.parametrize("tok,words", [
        ("7", "seven"), ("100", "one hundred"), ("1866", "eighteen sixty-six"), ("2000", "two thousand"),
        ("2005", "two thousand five"), ("1900", "nineteen hundred"), ("1105", "eleven oh five"),
        ("1,000", "one thousand"), ("3.14", "three point one four"), ("007", "zero zero seven"),
        ("2100", "two thousand one hundred"),
    ])
    def test_examples(self, tok, words):
        assert number_to_words(tok) == words

    def test_year_rule_off(self):
        assert number_to_words("1866", year_rule=False) == "one thousand eight hundred sixty-six"

    def test_against_num2words(self):
        num2words = pytest.importorskip("num2words").num2words
        for n in list(range(0, 1001)) + [10**6 + 7, 123456789, 999999999999999]:
            assert int_to_words(n) == _num2words_norm(num2words(n)), n
        for y in list(range(1100, 2100, 7)) + [1866, 1900, 2000, 2005]:
            ours = year_to_words(y)
            ref = _num2words_norm(num2words(y, to="year"))
            if 2000 <= y <= 2009:
                ref = _num2words_norm(num2words(y))
            assert ours == ref, y

    def test_long_numbers_flagged(self):
        assert spell_out_numerals("id 1234567890123456") == ("id 1234567890123456", True)
        assert spell_out_numerals("How many in 1959 and 100?") == (
            "How many in nineteen fifty-nine and one hundred?", False)


class TestPolicy:
    def test_seed_required(self):
        with pytest.raises(PolicyError):
            NoisePolicy("key_swap", {"p": 0.25})
        NoisePolicy("strip_punct")

    def test_bad_values(self):
        with pytest.raises(PolicyError):
            NoisePolicy("key_swap", {"p": 1.2}, seed=0)
        with pytest.raises(PolicyError):
            NoisePolicy("shout")
        with pytest.raises(PolicyError):
            NoisePolicy.from_dict({"kind": "strip_punct", "colour": 1})

    def test_round_trip(self):
        p = NoisePolicy("key_swap", {"p": 0.1}, seed=9, name="k")
        assert NoisePolicy.from_dict(p.to_dict()) == p

    def test_load(self, tmp_path):
        f = tmp_path / "p.json"
        f.write_text('{"policies": [{"kind": "strip_punct"}, {"kind": "key_swap", "seed": 1}]}')
        assert [p.name for p in load_policies(str(f))] == ["strip_punct", "key_swap"]
        f.write_text('[{"kind": "strip_punct"}, {"kind": "strip_punct"}]')
        with pytest.raises(PolicyError):
            load_policies(str(f))

    def test_per_record_seed(self):
        assert derive_seed(7, "q1") == derive_seed(7, "q1")
        assert derive_seed(7, "q1") != derive_seed(7, "q2")
        assert derive_seed(7, "q1") != derive_seed(8, "q1")

    def test_compose(self):
        ctx = NoiseContext()
        pols = [NoisePolicy("strip_final_qmark"), NoisePolicy("spell_out_numerals")]
        assert apply_policies(pols, "Was it 1959?", "q", ctx) == ("Was it nineteen fifty-nine", False)

    def test_missing_resources(self):
        ctx = NoiseContext()
        with pytest.raises(PolicyError):
            check_policy(NoisePolicy("misspell_lexicon", seed=1), ctx)
        from qanoise.adapters import AdapterConfigError
        with pytest.raises(AdapterConfigError):
            check_policy(NoisePolicy("back_translate", {"engine": "mt"}), ctx)

    def test_key_swap_policy_matches_generator(self):
        pol = NoisePolicy("key_swap", {"p": 0.5}, seed=3)
        text, flag = apply_policy(pol, LAMA, "q1", NoiseContext())
        assert text == key_swap_noise(LAMA, 0.5, seed=derive_seed(3, "q1")) and not flag


def test_tagger_classes():
    tagger = HeuristicTagger()
    toks = tokenize("What has a Lama determined to do?")
    classes = dict(zip((t.surface for t in toks), tagger.word_classes(toks)))
    assert classes["What"] is None
    assert classes["a"] == FUNCTION and classes["to"] == FUNCTION
    assert classes["Lama"] == CONTENT
    assert classes["?"] is None


def test_tagger_provider_prefers_sidecar():
    prov = TaggerProvider({"q1": {0: "NN"}})
    assert isinstance(prov.for_key("q1"), SidecarTagger)
    assert isinstance(prov.for_key("q2"), HeuristicTagger)
    assert all(t.kind == WORD for t in tokenize("a b"))
