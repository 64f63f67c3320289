import random

from ..textcore import QWERTY, WORD, tokenize
from ..textcore.normalize import match_case


def _check_prob(p):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must be in [0, 1], got {p}")


def key_swap_word(word, rng, layout=QWERTY):
    """Replace one letter of ``word`` by a row-wise keyboard neighbour.

    Returns ``word`` unchanged if no letter has a neighbour in ``layout``.
    """
    positions = [i for i, ch in enumerate(word) if layout.row_neighbors_of(ch)]
    if not positions:
        return word
    i = positions[rng.randrange(len(positions))]
    neighbors = layout.row_neighbors_of(word[i])
    repl = match_case(word[i], neighbors[rng.randrange(len(neighbors))])
    return word[:i] + repl + word[i + 1:]


def key_swap_noise(text, p=0.25, layout=QWERTY, seed=0, min_word_len=1):
    """Corrupt each word independently with probability ``p``.

    A corrupted word gets exactly one letter replaced by one of its
    row-wise neighbours on ``layout``, keeping the letter's case.
    Punctuation, numbers and whitespace are never touched, nor are words
    shorter than ``min_word_len``.
    """
    _check_prob(p)
    if p == 0.0:
        return text
    rng = random.Random(seed)
    out = []
    prev = 0
    for tok in tokenize(text):
        if tok.kind != WORD:
            continue
        # one draw per word keeps the stream aligned whatever the outcome
        if rng.random() >= p or len(tok.surface) < min_word_len:
            continue
        out.append(text[prev:tok.start])
        out.append(key_swap_word(tok.surface, rng, layout))
        prev = tok.end
    out.append(text[prev:])
    return "".join(out)
