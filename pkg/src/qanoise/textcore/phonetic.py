"""Coarse pronunciation codes for English words.

A G2P table (``word<TAB>ph1 ph2 ...``) takes precedence. Words it does not
cover go through a small rule-based encoder:

1. lowercase, keep letters only; drop a final ``e`` after a consonant when
   the word has more than two letters (silent e);
2. collapse doubled letters;
3. rewrite digraphs: ph->F, sh/ch->X, th->0, ck->K, qu->KW, wh->W, gh->G
   at the start of a word and silent elsewhere; x->KS;
4. merge consonants: c->S before e/i/y else K, k/q->K, s/z->S; other
   consonants map to their uppercase letter; ``y`` is a consonant only at
   the start of a word;
5. each maximal vowel run becomes one class symbol: ``a`` for a, ``e`` for
   e/i/y, ``o`` for o/u, and ``ə`` for runs that mix classes;
6. collapse repeated symbols.

So "receive" and "recieve" share a code, while "and" and "adn" do not.
"""

from dataclasses import dataclass
from typing import NamedTuple

G2P_TABLE = "g2p-table"
BUILTIN = "builtin-encoder"

_VOWEL_CLASS = {"a": "a", "e": "e", "i": "e", "y": "e", "o": "o", "u": "o"}
_MIXED = "ə"


class PhoneticForm(NamedTuple):
    phonemes: tuple
    source: str


@dataclass(frozen=True)
class G2PTable:
    entries: dict

    def get(self, word):
        return self.entries.get(word.casefold())

    def __len__(self):
        return len(self.entries)


def load_g2p(path):
    """Read a TSV pronunciation table; the first row for a word wins."""
    entries = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            if "\t" not in line:
                raise ValueError(f"{path}:{lineno}: expected word<TAB>phonemes")
            word, phones = line.split("\t", 1)
            key = word.strip().casefold()
            if key and key not in entries:
                entries[key] = tuple(phones.split())
    return G2PTable(entries)


def _is_vowel(letters, i):
    ch = letters[i]
    if ch == "y":
        return i > 0
    return ch in _VOWEL_CLASS


def builtin_encode(word):
    letters = [c for c in word.lower() if c.isalpha()]
    if not letters:
        raise ValueError(f"cannot encode {word!r}: no letters")
    if len(letters) > 2 and letters[-1] == "e" and not _is_vowel(letters, len(letters) - 2):
        letters.pop()
    dedup = [letters[0]]
    for ch in letters[1:]:
        if ch != dedup[-1]:
            dedup.append(ch)
    letters = dedup

    out = []
    i, n = 0, len(letters)
    while i < n:
        ch = letters[i]
        nxt = letters[i + 1] if i + 1 < n else ""
        if _is_vowel(letters, i):
            j = i
            classes = set()
            while j < n and _is_vowel(letters, j):
                classes.add(_VOWEL_CLASS[letters[j]])
                j += 1
            out.append(classes.pop() if len(classes) == 1 else _MIXED)
            i = j
            continue
        pair = ch + nxt
        if pair == "ph":
            out.append("F")
        elif pair in ("sh", "ch"):
            out.append("X")
        elif pair == "th":
            out.append("0")
        elif pair == "ck":
            out.append("K")
        elif pair == "qu":
            out.extend(("K", "W"))
        elif pair == "wh":
            out.append("W")
        elif pair == "gh":
            if i == 0:
                out.append("G")
        else:
            if ch == "x":
                out.extend(("K", "S"))
            elif ch == "c":
                out.append("S" if nxt in ("e", "i", "y") else "K")
            elif ch in ("k", "q"):
                out.append("K")
            elif ch in ("s", "z"):
                out.append("S")
            else:
                out.append(ch.upper())
            i += 1
            continue
        i += 2

    codes = []
    for sym in out:
        if not codes or codes[-1] != sym:
            codes.append(sym)
    return tuple(codes)


def phonetic_encode(word, g2p=None):
    """Phoneme sequence for ``word``: table lookup first, builtin rules otherwise."""
    if not any(c.isalpha() for c in word):
        raise ValueError(f"cannot encode {word!r}: no letters")
    if g2p is not None:
        phones = g2p.get(word)
        if phones:
            return PhoneticForm(tuple(phones), G2P_TABLE)
    return PhoneticForm(builtin_encode(word), BUILTIN)
