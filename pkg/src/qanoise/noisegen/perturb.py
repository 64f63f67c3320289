"""Deterministic and targeted perturbations of question text."""

import random
import re
from typing import NamedTuple

from ..textcore import PUNCTUATION, QWERTY, tokenize
from ..textcore.tokenize import collapse_whitespace, detokenize
from .keyboard import key_swap_word
from .misspell import misspell_word
from .tagger import CONTENT, ENTITY_TYPES, FUNCTION, HEURISTIC_ENTITY, HeuristicTagger

PLACEHOLDER = "ENTITY"
COMMON_MISSPELLED = "common_misspelled"
WORD_CLASSES = (FUNCTION, CONTENT, COMMON_MISSPELLED)
MECHANISMS = ("key_swap", "misspell")


class Perturbed(NamedTuple):
    text: str
    flagged: bool


def strip_punctuation(text):
    """Drop every punctuation token; apostrophes inside words survive."""
    tokens = tokenize(text)
    keep = {i for i, tok in enumerate(tokens) if tok.kind != PUNCTUATION}
    if len(keep) == len(tokens):
        return collapse_whitespace(text)
    return detokenize(text, tokens, keep)


_FINAL_QMARKS = re.compile(r"\s*\?+\s*$")


def strip_final_qmark(text):
    """Remove the trailing question mark(s), and nothing else."""
    return _FINAL_QMARKS.sub("", text)


def _replace_tokens(text, tokens, replacements):
    out = []
    prev = 0
    for i in sorted(replacements):
        tok = tokens[i]
        out.append(text[prev:tok.start])
        out.append(replacements[i])
        prev = tok.end
    out.append(text[prev:])
    return "".join(out)


def targeted_perturb(text, word_class, mechanism="key_swap", tagger=None, seed=0,
                     layout=QWERTY, lexicon=None):
    """Perturb every token of one word class and leave the rest alone.

    ``word_class`` is "function", "content" or "common_misspelled" (tokens
    that are keys of ``lexicon``). ``mechanism`` is "key_swap" (one
    row-neighbour substitution per word) or "misspell" (a lexicon
    misspelling; words without an entry stay as they are).
    """
    if word_class not in WORD_CLASSES:
        raise ValueError(f"unknown word class {word_class!r}; expected one of {WORD_CLASSES}")
    if mechanism not in MECHANISMS:
        raise ValueError(f"unknown mechanism {mechanism!r}; expected one of {MECHANISMS}")
    if (word_class == COMMON_MISSPELLED or mechanism == "misspell") and lexicon is None:
        raise ValueError(f"{word_class}/{mechanism} needs a misspelling lexicon")
    tagger = tagger or HeuristicTagger()
    tokens = tokenize(text)
    if word_class == COMMON_MISSPELLED:
        selected = [i for i, tok in enumerate(tokens) if tok.is_word and tok.surface in lexicon]
    else:
        classes = tagger.word_classes(tokens)
        selected = [i for i, c in enumerate(classes) if c == word_class]
    rng = random.Random(seed)
    replacements = {}
    for i in selected:
        word = tokens[i].surface
        if mechanism == "key_swap":
            new = key_swap_word(word, rng, layout)
        else:
            new = misspell_word(word, lexicon, rng)
        if new != word:
            replacements[i] = new
    return _replace_tokens(text, tokens, replacements)


def drop_words(text, word_class, tagger=None):
    """Remove every token of ``word_class`` ("function" or "content")."""
    if word_class not in (FUNCTION, CONTENT):
        raise ValueError(f"can only drop function or content words, not {word_class!r}")
    tagger = tagger or HeuristicTagger()
    tokens = tokenize(text)
    classes = tagger.word_classes(tokens)
    keep = {i for i, c in enumerate(classes) if c != word_class}
    if len(keep) == len(tokens):
        return text
    return detokenize(text, tokens, keep)


def ne_placeholder(text, ner=None, seed=0, types=ENTITY_TYPES):
    """Replace one randomly chosen entity span with ``ENTITY``.

    Only spans whose label is in ``types`` (the heuristic detector's
    untyped spans always qualify) are candidates. Text without a
    candidate comes back unchanged with ``flagged`` set.
    """
    ner = ner or HeuristicTagger()
    tokens = tokenize(text)
    spans = [s for s in ner.entity_spans(tokens) if s[2] in types or s[2] == HEURISTIC_ENTITY]
    if not spans:
        return Perturbed(text, True)
    first, stop, _ = spans[random.Random(seed).randrange(len(spans))]
    start, end = tokens[first].start, tokens[stop - 1].end
    return Perturbed(text[:start] + PLACEHOLDER + text[end:], False)
