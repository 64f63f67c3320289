import random
from dataclasses import dataclass

from ..textcore import WORD, apply_case_pattern, tokenize
from .keyboard import _check_prob


@dataclass(frozen=True)
class MisspellingLexicon:
    """Correct word -> misspellings. Keys are casefolded."""

    entries: dict

    def __post_init__(self):
        clean = {}
        for word, misspellings in self.entries.items():
            key = word.casefold()
            if not misspellings:
                raise ValueError(f"lexicon entry {word!r} has no misspellings")
            for m in misspellings:
                if m.casefold() == key:
                    raise ValueError(f"misspelling {m!r} equals its word")
            merged = clean.setdefault(key, [])
            merged.extend(m for m in misspellings if m not in merged)
        object.__setattr__(self, "entries", {k: tuple(v) for k, v in clean.items()})

    def __contains__(self, word):
        return word.casefold() in self.entries

    def __len__(self):
        return len(self.entries)

    def get(self, word):
        return self.entries.get(word.casefold(), ())

    def n_pairs(self):
        return sum(len(v) for v in self.entries.values())

    @classmethod
    def from_pairs(cls, pairs):
        entries = {}
        for word, miss in pairs:
            bucket = entries.setdefault(word.casefold(), [])
            if miss not in bucket:
                bucket.append(miss)
        return cls(entries)


def load_lexicon(path):
    """Read ``word<TAB>misspelling`` lines; repeated words accumulate.

    Pairs whose misspelling equals the word are skipped.
    """
    pairs = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise ValueError(f"{path}:{lineno}: expected word<TAB>misspelling")
            word, miss = parts[0].strip(), parts[1].strip()
            if word and miss and word.casefold() != miss.casefold():
                pairs.append((word, miss))
    return MisspellingLexicon.from_pairs(pairs)


def save_lexicon(lexicon, path):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for word in sorted(lexicon.entries):
            for miss in lexicon.entries[word]:
                f.write(f"{word}\t{miss}\n")


def misspell_word(word, lexicon, rng):
    options = lexicon.get(word)
    if not options:
        return word
    return apply_case_pattern(word, options[rng.randrange(len(options))])


def inject_misspellings(text, lexicon, p=1.0, seed=0):
    """Replace lexicon words by one of their misspellings with probability ``p``.

    The replacement takes the case pattern of the original word.
    """
    _check_prob(p)
    if p == 0.0:
        return text
    rng = random.Random(seed)
    out = []
    prev = 0
    for tok in tokenize(text):
        if tok.kind != WORD or tok.surface not in lexicon:
            continue
        if rng.random() >= p:
            continue
        out.append(text[prev:tok.start])
        out.append(misspell_word(tok.surface, lexicon, rng))
        prev = tok.end
    out.append(text[prev:])
    return "".join(out)
