"""Synthetic noise generators and targeted perturbations of question text."""

from .keyboard import key_swap_noise, key_swap_word
from .misspell import MisspellingLexicon, inject_misspellings, load_lexicon, save_lexicon
from .numerals import int_to_words, number_to_words, spell_out_numerals, year_to_words
from .perturb import (
    PLACEHOLDER,
    Perturbed,
    drop_words,
    ne_placeholder,
    strip_final_qmark,
    strip_punctuation,
    targeted_perturb,
)
from .policy import (
    KINDS,
    NoiseContext,
    NoisePolicy,
    PolicyError,
    apply_policies,
    apply_policy,
    check_policy,
    derive_seed,
    load_policies,
)
from .tagger import CONTENT, FUNCTION, HeuristicTagger, SidecarTagger, TaggerProvider, load_closed_class

__all__ = [
    "key_swap_noise", "key_swap_word",
    "MisspellingLexicon", "inject_misspellings", "load_lexicon", "save_lexicon",
    "int_to_words", "number_to_words", "spell_out_numerals", "year_to_words",
    "PLACEHOLDER", "Perturbed", "drop_words", "ne_placeholder", "strip_final_qmark",
    "strip_punctuation", "targeted_perturb",
    "KINDS", "NoiseContext", "NoisePolicy", "PolicyError", "apply_policies", "apply_policy",
    "check_policy", "derive_seed", "load_policies",
    "CONTENT", "FUNCTION", "HeuristicTagger", "SidecarTagger", "TaggerProvider", "load_closed_class",
]
