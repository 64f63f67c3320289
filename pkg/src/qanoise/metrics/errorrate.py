"""Character and word error rates.

Both casefold by default. WER also drops punctuation tokens before
splitting on whitespace, since recognizers rarely emit punctuation; pass
``strip_punct=False`` to keep it. Rates are percentages.
"""

from typing import NamedTuple

from .. import kernels
from ..noisegen.perturb import strip_punctuation


class ErrorCounts(NamedTuple):
    edits: int
    ref_len: int

    @property
    def rate(self):
        if self.ref_len == 0:
            raise ValueError("reference is empty")
        return 100.0 * self.edits / self.ref_len


def _prep_chars(text, casefold, strip_punct):
    if strip_punct:
        text = strip_punctuation(text)
    return text.casefold() if casefold else text


def wer_words(text, casefold=True, strip_punct=True):
    if strip_punct:
        text = strip_punctuation(text)
    if casefold:
        text = text.casefold()
    return text.split()


def char_errors(hyp, ref, casefold=True, strip_punct=False):
    h = _prep_chars(hyp, casefold, strip_punct)
    r = _prep_chars(ref, casefold, strip_punct)
    return ErrorCounts(kernels.levenshtein(h, r), len(r))


def word_errors(hyp, ref, casefold=True, strip_punct=True):
    h = wer_words(hyp, casefold, strip_punct)
    r = wer_words(ref, casefold, strip_punct)
    return ErrorCounts(kernels.levenshtein(h, r), len(r))


def cer(hyp, ref, casefold=True, strip_punct=False):
    counts = char_errors(hyp, ref, casefold, strip_punct)
    if counts.ref_len == 0:
        raise ValueError("CER needs a non-empty reference")
    return counts.rate


def wer(hyp, ref, casefold=True, strip_punct=True):
    counts = word_errors(hyp, ref, casefold, strip_punct)
    if counts.ref_len == 0:
        raise ValueError("WER needs a non-empty reference")
    return counts.rate


def _corpus(fn, hyps, refs, **kw):
    if len(hyps) != len(refs):
        raise ValueError(f"{len(hyps)} hypotheses but {len(refs)} references")
    edits = total = 0
    for h, r in zip(hyps, refs):
        c = fn(h, r, **kw)
        edits += c.edits
        total += c.ref_len
    if total == 0:
        raise ValueError("references are empty")
    return 100.0 * edits / total


def corpus_cer(hyps, refs, casefold=True, strip_punct=False):
    """Total character edits over total reference characters."""
    return _corpus(char_errors, hyps, refs, casefold=casefold, strip_punct=strip_punct)


def corpus_wer(hyps, refs, casefold=True, strip_punct=True):
    """Total word edits over total reference words."""
    return _corpus(word_errors, hyps, refs, casefold=casefold, strip_punct=strip_punct)
