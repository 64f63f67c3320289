import re
import unicodedata
from typing import NamedTuple

WORD = "word"
NUMBER = "number"
PUNCTUATION = "punctuation"
SYMBOL = "symbol"

_APOSTROPHES = "'’"
_TOKEN_RE = re.compile(
    rf"(?P<word>[^\W\d_]+(?:[{_APOSTROPHES}][^\W\d_]+)*)"
    r"|(?P<number>\d+)"
    r"|(?P<other>\S)"
)


class Token(NamedTuple):
    surface: str
    start: int
    end: int
    kind: str

    @property
    def char_span(self):
        return self.start, self.end

    @property
    def is_word(self):
        return self.kind == WORD


def tokenize(text):
    """Split ``text`` into word, number, punctuation and symbol tokens.

    Words are maximal letter runs; an apostrophe between two letters stays
    inside the word ("it's", "Santa's"). Numbers are maximal digit runs.
    Every other non-space character is its own token. Whitespace is never
    part of a token, so the gaps between spans carry it.
    """
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        if kind == "other":
            kind = PUNCTUATION if unicodedata.category(m.group())[0] == "P" else SYMBOL
        tokens.append(Token(m.group(), m.start(), m.end(), kind))
    return tokens


def detokenize(text, tokens, keep):
    """Rebuild ``text`` from the tokens whose index is in ``keep``.

    Each kept token is preceded by the whitespace that preceded it in the
    original; runs of whitespace left behind by dropped tokens are collapsed.
    """
    parts = []
    prev_end = 0
    for i, tok in enumerate(tokens):
        if i in keep:
            parts.append(text[prev_end:tok.start] if parts else "")
            parts.append(tok.surface)
        prev_end = tok.end
    return collapse_whitespace("".join(parts))


_WS_RUN = re.compile(r"\s{2,}")


def collapse_whitespace(text):
    return _WS_RUN.sub(" ", text).strip()


def is_punctuation_char(ch):
    return unicodedata.category(ch)[0] == "P"
